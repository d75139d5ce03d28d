//! JSON builders for the `describe` and `point` subcommands.

use anyhow::{bail, Result};
use ris_secrecy::config::db_to_lin;
use ris_secrecy::{
    estimate_ip, ip_asymptotic, ip_quadrature, AnalyticError, AsymptoticResult, DominantHop,
    SystemConfig,
};
use serde_json::{json, Value};

use crate::args::Methods;

fn config_json(cfg: &SystemConfig) -> Value {
    json!({
        "m_elems": cfg.m_elems,
        "n_elems": cfg.n_elems,
        "nb1": cfg.nb1,
        "nb2": cfg.nb2,
        "snr_sr_db": cfg.snr_sr_db,
        "snr_rd_db": cfg.snr_rd_db,
        "snr_re_db": cfg.snr_re_db,
        "snr_je_db": cfg.snr_je_db,
        "setup": cfg.setup.as_str(),
    })
}

fn dominant_str(d: DominantHop) -> &'static str {
    match d {
        DominantHop::First => "first",
        DominantHop::Second => "second",
        DominantHop::Both => "both",
    }
}

fn asymptotic_json(asym: &AsymptoticResult, cfg: &SystemConfig) -> Value {
    let snr = db_to_lin(cfg.snr_sr_db.min(cfg.snr_rd_db));
    json!({
        "prefactor": asym.prefactor,
        "diversity_order": asym.diversity_order,
        "dominant_hop": dominant_str(asym.dominant),
        "balanced": asym.balanced,
        "value": asym.ip_at(snr),
    })
}

/// `describe`: resolved configuration plus every derived model parameter.
pub fn describe_json(cfg: &SystemConfig) -> Result<Value> {
    let d = cfg.derive().map_err(|e| anyhow::anyhow!("{e}"))?;
    let asymptotic = match ip_asymptotic(cfg) {
        Ok(a) => asymptotic_json(&a, cfg),
        Err(AnalyticError::Unsupported { reason }) => json!({ "unsupported": reason }),
        Err(e) => bail!("{e}"),
    };
    Ok(json!({
        "config": config_json(cfg),
        "derived": {
            "shape_sr": d.m_sr,
            "shape_rd": d.m_rd,
            "omega_sr": d.omega_sr,
            "omega_rd": d.omega_rd,
            "scale_sr": d.scale_sr,
            "scale_rd": d.scale_rd,
            "phase_moment1_first": d.phi11,
            "phase_moment2_first": d.phi12,
            "phase_moment1_second": d.phi21,
            "phase_moment2_second": d.phi22,
            "snr_sr": d.snr_sr,
            "snr_rd": d.snr_rd,
            "snr_re": d.snr_re,
            "snr_je": d.snr_je,
            "mean_exp_re": d.mean_exp_re,
            "mean_exp_je": d.mean_exp_je,
        },
        "asymptotic": asymptotic,
    }))
}

/// `point`: intercept probability by each requested route.
///
/// Routes a configuration cannot support (quadrature/asymptote outside the
/// dual-surface setup, asymptote without jamming) report `unsupported`
/// rather than failing; the command fails only when no requested route
/// produced a value.
pub fn point_json(
    cfg: &SystemConfig,
    methods: Methods,
    samples: u64,
    seed: u64,
) -> Result<(Value, u32)> {
    let mut produced = 0u32;
    let mut estimates = serde_json::Map::new();

    if methods.mc {
        let est = estimate_ip(cfg, samples, seed).map_err(|e| anyhow::anyhow!("{e}"))?;
        produced += 1;
        estimates.insert(
            "mc".to_string(),
            json!({
                "value": est.value,
                "std_error": est.std_error,
                "n_samples": est.n_samples,
                "seed": est.seed,
            }),
        );
    }
    if methods.quad {
        let cell = match ip_quadrature(cfg) {
            Ok(est) => {
                produced += 1;
                json!({ "value": est.value })
            }
            Err(AnalyticError::Unsupported { reason }) => json!({ "unsupported": reason }),
            Err(AnalyticError::NotConverged {
                partial,
                error_estimate,
                evaluations,
            }) => json!({
                "failed": "quadrature did not converge",
                "partial": partial,
                "error_estimate": error_estimate,
                "evaluations": evaluations,
            }),
            Err(e) => bail!("{e}"),
        };
        estimates.insert("quadrature".to_string(), cell);
    }
    if methods.asym {
        let cell = match ip_asymptotic(cfg) {
            Ok(asym) => {
                produced += 1;
                asymptotic_json(&asym, cfg)
            }
            Err(AnalyticError::Unsupported { reason }) => json!({ "unsupported": reason }),
            Err(e) => bail!("{e}"),
        };
        estimates.insert("asymptotic".to_string(), cell);
    }

    Ok((
        json!({
            "config": config_json(cfg),
            "estimates": Value::Object(estimates),
        }),
        produced,
    ))
}
