//! Built-in sweep presets that reproduce the study figures.
//!
//! Each preset is a base configuration plus one or two sweep axes expressed
//! in the same `NAME=VALUES` grammar the `sweep` command accepts. `fig7` is
//! the one exception: it tabulates the high-SNR diversity order and coding
//! prefactor instead of sweeping the intercept probability.

use anyhow::{bail, Result};
use ris_secrecy::{ip_asymptotic, SystemConfig};

use crate::args::Methods;
use crate::sweep::{parse_axis, SweepOutput, SweepSpec};

/// How a figure is produced.
pub enum Kind {
    /// A standard sweep: base-config mutator plus axis specs.
    Sweep {
        base: fn(&mut SystemConfig),
        axes: &'static [&'static str],
        methods: Methods,
    },
    /// The diversity-order table (analytic only; ignores samples/seed).
    DiversityTable,
}

pub struct Figure {
    pub name: &'static str,
    pub alias: Option<&'static str>,
    pub description: &'static str,
    pub kind: Kind,
}

fn base_default(_: &mut SystemConfig) {}

fn base_jammer_0db(cfg: &mut SystemConfig) {
    cfg.snr_je_db = Some(0.0);
}

fn base_two_hop_grid(cfg: &mut SystemConfig) {
    cfg.m_elems = 24;
    cfg.n_elems = 24;
    cfg.snr_re_db = 30.0;
}

fn base_legit_10db(cfg: &mut SystemConfig) {
    cfg.snr_sr_db = 10.0;
    cfg.snr_rd_db = 10.0;
}

const MC_QUAD: Methods = Methods {
    mc: true,
    quad: true,
    asym: false,
};
const MC_ONLY: Methods = Methods {
    mc: true,
    quad: false,
    asym: false,
};
const QUAD_ONLY: Methods = Methods {
    mc: false,
    quad: true,
    asym: false,
};

pub const FIGURES: &[Figure] = &[
    Figure {
        name: "fig1",
        alias: None,
        description: "intercept probability vs legitimate SNR for jammer \
                      strengths 0/10/20 dB (all three routes)",
        kind: Kind::Sweep {
            base: base_default,
            axes: &["snr_db=0:5:35", "snr_je_db=0,10,20"],
            methods: Methods::ALL,
        },
    },
    Figure {
        name: "fig2",
        alias: None,
        description: "intercept probability vs legitimate SNR for 16/28/40 \
                      elements per surface (all three routes)",
        kind: Kind::Sweep {
            base: base_default,
            axes: &["snr_db=0:5:50", "elems=16,28,40"],
            methods: Methods::ALL,
        },
    },
    Figure {
        name: "fig3",
        alias: None,
        description: "intercept probability vs legitimate SNR for phase \
                      registers of 1/2/3/5 bits, jammer at 0 dB",
        kind: Kind::Sweep {
            base: base_jammer_0db,
            axes: &["snr_db=0:5:35", "nb=1,2,3,5"],
            methods: Methods::ALL,
        },
    },
    Figure {
        name: "fig4",
        alias: None,
        description: "intercept probability over the first-hop x second-hop \
                      SNR grid, 24 elements, eavesdropper at 30 dB \
                      (quadrature only)",
        kind: Kind::Sweep {
            base: base_two_hop_grid,
            axes: &["snr_sr_db=0:5:40", "snr_rd_db=0:5:40"],
            methods: QUAD_ONLY,
        },
    },
    Figure {
        name: "fig5",
        alias: None,
        description: "intercept probability vs eavesdropper SNR for jammer \
                      strengths 0/10/20 dB, legitimate hops at 10 dB",
        kind: Kind::Sweep {
            base: base_legit_10db,
            axes: &["snr_re_db=0:5:50", "snr_je_db=0,10,20"],
            methods: MC_QUAD,
        },
    },
    Figure {
        name: "fig6",
        alias: Some("setups"),
        description: "surface-placement comparison (dual / first hop only / \
                      second hop only) vs legitimate SNR (Monte Carlo only)",
        kind: Kind::Sweep {
            base: base_default,
            axes: &["snr_db=0:5:40", "setup=dual,first,second"],
            methods: MC_ONLY,
        },
    },
    Figure {
        name: "fig7",
        alias: None,
        description: "high-SNR diversity order and coding prefactor vs \
                      element count and register width (analytic table)",
        kind: Kind::DiversityTable,
    },
];

pub fn lookup(name: &str) -> Option<&'static Figure> {
    let needle = name.to_ascii_lowercase();
    FIGURES
        .iter()
        .find(|f| f.name == needle || f.alias == Some(needle.as_str()))
}

/// One line per preset, for `figure --list`.
pub fn listing() -> String {
    let mut out = String::new();
    for f in FIGURES {
        let alias = f.alias.map(|a| format!(" (alias: {a})")).unwrap_or_default();
        out.push_str(&format!("{}{alias}\n    {}\n", f.name, f.description));
    }
    out
}

/// Build the sweep spec for a sweeping preset, applying its base mutations
/// on top of the user-resolved configuration.
pub fn sweep_spec(
    fig: &Figure,
    user_cfg: &SystemConfig,
    samples: u64,
    seed: u64,
    methods_override: Option<Methods>,
) -> Result<(SystemConfig, SweepSpec)> {
    let Kind::Sweep {
        base,
        axes,
        methods,
    } = &fig.kind
    else {
        bail!("{} is a table preset, not a sweep", fig.name);
    };
    let mut cfg = user_cfg.clone();
    base(&mut cfg);
    let axes = axes
        .iter()
        .map(|s| parse_axis(s))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        cfg,
        SweepSpec {
            axes,
            methods: methods_override.unwrap_or(*methods),
            samples,
            seed,
        },
    ))
}

/// The `fig7` table: diversity order and coding prefactor for each element
/// count and register width, at the base eavesdropper/jammer settings.
pub fn diversity_table(user_cfg: &SystemConfig) -> Result<SweepOutput> {
    let elems = [8u32, 16, 24, 32, 40, 48];
    let widths = [1u32, 2, 3, 4, 5];
    let header = ["elems", "nb", "diversity_order", "prefactor"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for &b in &widths {
        for &k in &elems {
            let mut cfg = user_cfg.clone();
            cfg.m_elems = k;
            cfg.n_elems = k;
            cfg.nb1 = b;
            cfg.nb2 = b;
            let asym = ip_asymptotic(&cfg).map_err(|e| anyhow::anyhow!("{e}"))?;
            rows.push(vec![
                k.to_string(),
                b.to_string(),
                format!("{}", asym.diversity_order),
                format!("{:e}", asym.prefactor),
            ]);
        }
    }
    Ok(SweepOutput {
        header,
        rows,
        numeric_failures: 0,
    })
}
