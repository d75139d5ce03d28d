//! Self-validation suite: structural identities of the derived parameters,
//! distributional health of the sampler, and cross-route agreement.
//!
//! Every check runs (no early abort) and reports a pass/fail plus a one-line
//! detail. Statistical checks use seeds derived from the master seed and
//! thresholds of four standard errors or better, so the suite is
//! deterministic for a given seed and false alarms are rare under any seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ris_secrecy::config::{db_to_lin, gamma_shape, omega, phase_moment};
use ris_secrecy::special::reg_gamma_p;
use ris_secrecy::{
    estimate_ip, estimate_moments, ip_asymptotic, ip_quadrature, mc::sample_channel, DominantHop,
    SystemConfig,
};
use serde_json::{json, Value};

use crate::sweep::point_seed;

#[derive(Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckResult {
            name,
            passed,
            detail,
        }
    }
}

#[derive(Debug)]
pub struct ValidationReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn report_json(report: &ValidationReport) -> Value {
    json!({
        "passed": report.passed(),
        "seed": report.seed,
        "checks": report.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

/// The exit code the `validate` command should use for a finished report.
pub fn exit_code(report: &ValidationReport) -> i32 {
    if report.passed() {
        0
    } else {
        2
    }
}

// --- individual checks ----------------------------------------------------

/// The per-hop gamma shape must be exactly linear in the element count:
/// doubling the elements doubles the shape. Takes the shape function as a
/// parameter so the harness itself can be tested against a broken
/// implementation (see the negative-control unit test).
pub fn check_shape_linearity(
    shape_fn: &dyn Fn(u32, u32) -> Result<f64, String>,
) -> CheckResult {
    let name = "shape_doubles_with_elements";
    let mut worst = 0.0f64;
    for nb in [1u32, 3, 5] {
        for k in [4u32, 8, 16] {
            let (m1, m2) = match (shape_fn(k, nb), shape_fn(2 * k, nb)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return CheckResult::new(name, false, e),
            };
            worst = worst.max((m2 - 2.0 * m1).abs() / (2.0 * m1));
        }
    }
    CheckResult::new(
        name,
        worst <= 1e-12,
        format!("worst relative deviation from shape(2K) = 2·shape(K): {worst:.2e}"),
    )
}

fn check_omega_structure() -> CheckResult {
    let name = "omega_quadratic_and_saturating";
    let run = || -> Result<(f64, f64), String> {
        let mut worst_quad = 0.0f64;
        for nb in [1u32, 3, 6] {
            for k in [4u32, 12, 24] {
                let o1 = omega(k, nb).map_err(|e| e.to_string())?;
                let o2 = omega(2 * k, nb).map_err(|e| e.to_string())?;
                worst_quad = worst_quad.max((o2 - 4.0 * o1).abs() / (4.0 * o1));
            }
        }
        for nb in 1..7u32 {
            let lo = omega(16, nb).map_err(|e| e.to_string())?;
            let hi = omega(16, nb + 1).map_err(|e| e.to_string())?;
            if hi <= lo {
                return Err(format!("omega not increasing from {nb} to {} bits", nb + 1));
            }
        }
        let deep = omega(16, 40).map_err(|e| e.to_string())?;
        let deeper = omega(16, 62).map_err(|e| e.to_string())?;
        let sat = (deeper - deep).abs() / deep;
        Ok((worst_quad, sat))
    };
    match run() {
        Ok((worst_quad, sat)) => CheckResult::new(
            name,
            worst_quad <= 1e-12 && sat <= 1e-9,
            format!(
                "worst deviation from omega(2K) = 4·omega(K): {worst_quad:.2e}; \
                 saturation gap between 40 and 62 bits: {sat:.2e}"
            ),
        ),
        Err(e) => CheckResult::new(name, false, e),
    }
}

fn check_mean_identity() -> CheckResult {
    let name = "mean_identity_shape_scale";
    let mut configs = vec![SystemConfig::default()];
    let mut alt = SystemConfig::default();
    alt.m_elems = 16;
    alt.n_elems = 8;
    alt.nb1 = 2;
    alt.nb2 = 4;
    alt.snr_sr_db = 10.0;
    alt.snr_rd_db = 20.0;
    configs.push(alt);
    let mut worst = 0.0f64;
    for cfg in &configs {
        let d = match cfg.derive() {
            Ok(d) => d,
            Err(e) => return CheckResult::new(name, false, e.to_string()),
        };
        let lhs_sr = d.m_sr * d.scale_sr;
        let rhs_sr = d.omega_sr * d.snr_sr;
        let lhs_rd = d.m_rd * d.scale_rd;
        let rhs_rd = d.omega_rd * d.snr_rd;
        worst = worst
            .max((lhs_sr - rhs_sr).abs() / rhs_sr)
            .max((lhs_rd - rhs_rd).abs() / rhs_rd);
    }
    CheckResult::new(
        name,
        worst <= 1e-9,
        format!("worst relative gap in shape·scale = omega·snr: {worst:.2e}"),
    )
}

fn check_omega_floor() -> CheckResult {
    let name = "omega_floor_quarter_k_squared";
    let mut min_ratio = f64::INFINITY;
    for nb in 1..=8u32 {
        for k in [2u32, 8, 32, 64] {
            let o = match omega(k, nb) {
                Ok(o) => o,
                Err(e) => return CheckResult::new(name, false, e.to_string()),
            };
            min_ratio = min_ratio.min(o / (k as f64 * k as f64 / 4.0));
        }
    }
    CheckResult::new(
        name,
        min_ratio >= 1.0 - 1e-12,
        format!("minimum omega / (K²/4): {min_ratio:.12} (1 bit attains the floor)"),
    )
}

fn check_composites_uncorrelated(master: u64) -> CheckResult {
    let name = "composite_coefficients_uncorrelated";
    let cfg = SystemConfig::default();
    let n = 100_000u64;
    // 0.011 is 3.5 standard errors of a correlation estimate at this sample
    // size; allow one outlier across the ten seeds.
    let threshold = 0.011;
    let mut exceed = 0u32;
    let mut worst = 0.0f64;
    for i in 0..10u64 {
        let rep = match estimate_moments(&cfg, n, point_seed(master, 100 + i)) {
            Ok(r) => r,
            Err(e) => return CheckResult::new(name, false, e.to_string()),
        };
        let m = rep.corr_rd_re.max(rep.corr_rd_je).max(rep.corr_re_je);
        worst = worst.max(m);
        if m > threshold {
            exceed += 1;
        }
    }
    CheckResult::new(
        name,
        exceed <= 1,
        format!(
            "{exceed}/10 seeds exceeded {threshold} (worst normalized \
             pseudo-covariance {worst:.2e} at {n} samples)"
        ),
    )
}

fn check_first_hop_distribution(master: u64) -> CheckResult {
    let name = "first_hop_snr_distribution_ks";
    let cfg = SystemConfig::default();
    let d = match cfg.derive() {
        Ok(d) => d,
        Err(e) => return CheckResult::new(name, false, e.to_string()),
    };
    let n = 50_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed(master, 200));
    let mut xs: Vec<f64> = (0..n)
        .map(|_| sample_channel(&mut rng, &cfg, &d).gamma_sr)
        .collect();
    xs.sort_by(|a, b| a.total_cmp(b));
    let mut ks = 0.0f64;
    for (i, x) in xs.iter().enumerate() {
        let f = match reg_gamma_p(d.m_sr, x / d.scale_sr) {
            Ok(f) => f,
            Err(e) => return CheckResult::new(name, false, e.to_string()),
        };
        let lo = i as f64 / n as f64;
        let hi = (i + 1) as f64 / n as f64;
        ks = ks.max((f - lo).abs()).max((f - hi).abs());
    }
    // The gamma model is an approximation, so the statistic does not shrink
    // to the usual 1.36/sqrt(n) level; 0.05 passes the small systematic
    // offset while catching any wrong shape or scale outright.
    CheckResult::new(
        name,
        ks <= 0.05,
        format!("Kolmogorov–Smirnov distance {ks:.4} at {n} samples (bound 0.05)"),
    )
}

fn check_sample_means(master: u64) -> CheckResult {
    let name = "sample_means_match_closed_forms";
    let cfg = SystemConfig::default();
    let n = 100_000u64;
    let rep = match estimate_moments(&cfg, n, point_seed(master, 300)) {
        Ok(r) => r,
        Err(e) => return CheckResult::new(name, false, e.to_string()),
    };
    let d = match cfg.derive() {
        Ok(d) => d,
        Err(e) => return CheckResult::new(name, false, e.to_string()),
    };
    let phi1 = match phase_moment(cfg.nb1, 1) {
        Ok(p) => p,
        Err(e) => return CheckResult::new(name, false, e.to_string()),
    };
    let k = cfg.m_elems as f64;
    let coherent = (std::f64::consts::PI * phi1 / 4.0).powi(2);
    let expected_sr = db_to_lin(cfg.snr_sr_db) * (k + k * (k - 1.0) * coherent);
    let z_sr = (rep.mean_gamma_sr - expected_sr).abs() / rep.se_gamma_sr;
    let z_re = (rep.mean_big_gamma_re - d.mean_exp_re).abs() / rep.se_big_gamma_re;
    CheckResult::new(
        name,
        z_sr <= 4.0 && z_re <= 4.0,
        format!(
            "first-hop SNR mean z = {z_sr:.2}, eavesdropper signal-power mean \
             z = {z_re:.2} at {n} samples (bound 4)"
        ),
    )
}

fn check_register_saturation() -> CheckResult {
    let name = "register_width_saturates";
    let mut wide = SystemConfig::default();
    wide.nb1 = 8;
    wide.nb2 = 8;
    let mut wider = SystemConfig::default();
    wider.nb1 = 12;
    wider.nb2 = 12;
    match (ip_quadrature(&wide), ip_quadrature(&wider)) {
        (Ok(a), Ok(b)) => {
            let gap = (a.value - b.value).abs() / a.value;
            CheckResult::new(
                name,
                gap <= 1e-3,
                format!("relative change from 8-bit to 12-bit registers: {gap:.2e}"),
            )
        }
        (Err(e), _) | (_, Err(e)) => CheckResult::new(name, false, e.to_string()),
    }
}

fn check_hop_symmetry(master: u64) -> CheckResult {
    let name = "hop_swap_symmetry";
    let mut a = SystemConfig::default();
    a.snr_sr_db = 20.0;
    a.snr_rd_db = 30.0;
    let mut b = SystemConfig::default();
    b.snr_sr_db = 30.0;
    b.snr_rd_db = 20.0;
    let quad = match (ip_quadrature(&a), ip_quadrature(&b)) {
        (Ok(x), Ok(y)) => (x.value - y.value).abs() / x.value,
        (Err(e), _) | (_, Err(e)) => return CheckResult::new(name, false, e.to_string()),
    };
    let n = 100_000u64;
    let (mc_a, mc_b) = match (
        estimate_ip(&a, n, point_seed(master, 400)),
        estimate_ip(&b, n, point_seed(master, 401)),
    ) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return CheckResult::new(name, false, e.to_string()),
    };
    let se = (mc_a.std_error.unwrap_or(0.0).powi(2) + mc_b.std_error.unwrap_or(0.0).powi(2))
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let z = (mc_a.value - mc_b.value).abs() / se;
    CheckResult::new(
        name,
        quad <= 1e-9 && z <= 4.0,
        format!(
            "quadrature relative gap {quad:.2e} (bound 1e-9); Monte Carlo \
             z = {z:.2} at {n} samples (bound 4)"
        ),
    )
}

fn check_mc_vs_quadrature(master: u64) -> CheckResult {
    let name = "mc_agrees_with_quadrature";
    let cfg = SystemConfig::default();
    let n = 100_000u64;
    let quad = match ip_quadrature(&cfg) {
        Ok(q) => q.value,
        Err(e) => return CheckResult::new(name, false, e.to_string()),
    };
    let mc = match estimate_ip(&cfg, n, point_seed(master, 500)) {
        Ok(m) => m,
        Err(e) => return CheckResult::new(name, false, e.to_string()),
    };
    let se = mc.std_error.unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let z = (mc.value - quad).abs() / se;
    // The analytic route carries a small systematic bias from the gamma and
    // exponential channel approximations, so the bound is four standard
    // errors at a sample size where that bias sits inside the noise floor.
    CheckResult::new(
        name,
        z <= 4.0,
        format!(
            "Monte Carlo {:.3e} vs quadrature {quad:.3e}: z = {z:.2} at {n} \
             samples (bound 4; a small approximation bias is expected)",
            mc.value
        ),
    )
}

fn check_monotonicity() -> CheckResult {
    let name = "quadrature_monotonic_in_parameters";
    let base = SystemConfig::default();
    let ip = |mutate: &dyn Fn(&mut SystemConfig)| -> Result<f64, String> {
        let mut cfg = base.clone();
        mutate(&mut cfg);
        ip_quadrature(&cfg).map(|e| e.value).map_err(|e| e.to_string())
    };
    let run = || -> Result<Vec<(&'static str, bool, f64, f64)>, String> {
        let mut rows = Vec::new();
        let small = ip(&|c| {
            c.m_elems = 16;
            c.n_elems = 16;
        })?;
        let large = ip(&|_| {})?;
        rows.push(("more elements lower", large < small, large, small));
        let coarse = ip(&|c| {
            c.nb1 = 1;
            c.nb2 = 1;
        })?;
        let fine = ip(&|_| {})?;
        rows.push(("finer registers lower", fine < coarse, fine, coarse));
        let unjammed = ip(&|c| c.snr_je_db = Some(0.0))?;
        let jammed = ip(&|_| {})?;
        rows.push(("stronger jamming lower", jammed < unjammed, jammed, unjammed));
        let weak_eve = ip(&|c| c.snr_re_db = 30.0)?;
        let strong_eve = ip(&|_| {})?;
        rows.push(("stronger eavesdropper higher", strong_eve > weak_eve, strong_eve, weak_eve));
        Ok(rows)
    };
    match run() {
        Ok(rows) => {
            let passed = rows.iter().all(|r| r.1);
            let detail = rows
                .iter()
                .map(|(label, ok, a, b)| {
                    format!("{label}: {} ({a:.3e} vs {b:.3e})", if *ok { "ok" } else { "VIOLATED" })
                })
                .collect::<Vec<_>>()
                .join("; ");
            CheckResult::new(name, passed, detail)
        }
        Err(e) => CheckResult::new(name, false, e),
    }
}

fn check_diversity_construction() -> CheckResult {
    let name = "diversity_equals_smaller_shape";
    let cases = [
        (16u32, 32u32, DominantHop::First),
        (32, 16, DominantHop::Second),
        (16, 16, DominantHop::Both),
    ];
    let mut worst = 0.0f64;
    for (m, n, expect) in cases {
        let mut cfg = SystemConfig::default();
        cfg.m_elems = m;
        cfg.n_elems = n;
        let asym = match ip_asymptotic(&cfg) {
            Ok(a) => a,
            Err(e) => return CheckResult::new(name, false, e.to_string()),
        };
        let (sa, sb) = match (gamma_shape(m, cfg.nb1), gamma_shape(n, cfg.nb2)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return CheckResult::new(name, false, e.to_string()),
        };
        let want = sa.min(sb);
        worst = worst.max((asym.diversity_order - want).abs() / want);
        if asym.dominant != expect {
            return CheckResult::new(
                name,
                false,
                format!("wrong dominant hop for {m}x{n}: {:?}", asym.dominant),
            );
        }
    }
    CheckResult::new(
        name,
        worst <= 1e-12,
        format!("diversity order matches min(shape) on all cases (worst gap {worst:.2e})"),
    )
}

fn check_asymptote_consistency() -> CheckResult {
    let name = "asymptote_approaches_quadrature";
    let mut cfg = SystemConfig::default();
    cfg.m_elems = 16;
    cfg.n_elems = 16;
    let asym = match ip_asymptotic(&cfg) {
        Ok(a) => a,
        Err(e) => return CheckResult::new(name, false, e.to_string()),
    };
    let gap_at = |db: f64| -> Result<f64, String> {
        let mut c = cfg.clone();
        c.snr_sr_db = db;
        c.snr_rd_db = db;
        let q = ip_quadrature(&c).map_err(|e| e.to_string())?.value;
        Ok((asym.ip_at(db_to_lin(db)) - q).abs() / q)
    };
    match (gap_at(50.0), gap_at(60.0)) {
        (Ok(g50), Ok(g60)) => CheckResult::new(
            name,
            g60 < g50 && g60 <= 0.15,
            format!("relative gap to quadrature: {g50:.3} at 50 dB, {g60:.3} at 60 dB"),
        ),
        (Err(e), _) | (_, Err(e)) => CheckResult::new(name, false, e),
    }
}

/// Run every check. `master` seeds the statistical ones.
pub fn run_suite(master: u64) -> ValidationReport {
    let shape_fn = |k: u32, nb: u32| gamma_shape(k, nb).map_err(|e| e.to_string());
    let checks = vec![
        check_shape_linearity(&shape_fn),
        check_omega_structure(),
        check_mean_identity(),
        check_omega_floor(),
        check_composites_uncorrelated(master),
        check_first_hop_distribution(master),
        check_sample_means(master),
        check_register_saturation(),
        check_hop_symmetry(master),
        check_mc_vs_quadrature(master),
        check_monotonicity(),
        check_diversity_construction(),
        check_asymptote_consistency(),
    ];
    ValidationReport {
        seed: master,
        checks,
    }
}
