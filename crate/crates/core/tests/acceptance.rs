//! Acceptance suite: ten numbered criteria that gate the library.
//!
//! Every test prints exactly one `ACCEPTANCE CRITERION n [PASS|FAIL]` line
//! (visible with `cargo test --test acceptance -- --nocapture`) and then
//! asserts. The criteria compare the three computation routes — exact-model
//! Monte Carlo, analytic quadrature, and the high-SNR closed form — against
//! each other and against independently derived reference values.
//!
//! Criteria 3 and 5 are strict cross-route agreement bounds that the
//! implemented model genuinely does not meet: the gamma-moment approximation
//! behind the analytic route carries a small systematic bias relative to the
//! exact channel model, which exceeds the statistical/relative tolerances
//! those criteria demand. They are implemented faithfully and left failing
//! rather than weakened; their output quantifies the measured gap.

use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ris_secrecy::analytic::{cdf_hop, ccdf_hop, pdf_eav};
use ris_secrecy::special::{integrate_semi_infinite_with, upper_inc_gamma, QuadOptions};
use ris_secrecy::{
    estimate_ip, estimate_moments, ip_asymptotic, ip_quadrature, Setup, SystemConfig,
};

/// Serializes the criteria so per-criterion wall-clock budgets are not
/// inflated by concurrent tests sharing the CPU.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial_guard() -> std::sync::MutexGuard<'static, ()> {
    // A previous criterion failing (poisoning the lock) must not cascade.
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE CRITERION {n:2} [{tag}] {name}: {detail}");
}

fn legit_sweep_cfg(snr_db: f64, elems: u32, je_db: f64) -> SystemConfig {
    SystemConfig {
        m_elems: elems,
        n_elems: elems,
        snr_sr_db: snr_db,
        snr_rd_db: snr_db,
        snr_je_db: Some(je_db),
        ..SystemConfig::default()
    }
}

#[test]
fn criterion_01_reference_operating_point_within_window() {
    let _g = serial_guard();
    let start = Instant::now();
    let cfg = SystemConfig {
        m_elems: 40,
        n_elems: 40,
        ..SystemConfig::default()
    };
    let mc = estimate_ip(&cfg, 3_000_000, 20_240_401).unwrap();
    let quad = ip_quadrature(&cfg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let window = 3e-5..=3e-4;
    let pass = window.contains(&mc.value) && window.contains(&quad.value) && elapsed < 120.0;
    let detail = format!(
        "mc = {:.4e} (se {:.1e}), quad = {:.4e}, window [3e-5, 3e-4], {:.1} s (budget 120 s)",
        mc.value,
        mc.std_error.unwrap(),
        quad.value,
        elapsed
    );
    report(1, "40-element operating point", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_02_strong_jamming_rare_event_by_quadrature() {
    let _g = serial_guard();
    let cfg = SystemConfig {
        snr_sr_db: 35.0,
        snr_rd_db: 35.0,
        snr_je_db: Some(20.0),
        ..SystemConfig::default()
    };
    let quad = ip_quadrature(&cfg).unwrap();
    let pass = quad.value >= 1e-7 && quad.value <= 1e-5;
    let detail = format!(
        "quad = {:.4e}, window [1e-7, 1e-5] (Monte Carlo exempt: rare event)",
        quad.value
    );
    report(2, "strong-jamming rare event", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_03_monte_carlo_vs_quadrature_grid() {
    let _g = serial_guard();
    let start = Instant::now();
    let n: u64 = 3_000_000;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut seed = 300u64;
    for &elems in &[16u32, 32] {
        for &je_db in &[0.0f64, 10.0] {
            for &snr_db in &[10.0f64, 20.0, 30.0] {
                let cfg = legit_sweep_cfg(snr_db, elems, je_db);
                seed += 1;
                let mc = estimate_ip(&cfg, n, seed).unwrap();
                let quad = ip_quadrature(&cfg).unwrap();
                if quad.value * (n as f64) < 100.0 {
                    continue; // too rare for a meaningful 3-sigma comparison
                }
                let se = mc.std_error.unwrap();
                let z = (mc.value - quad.value) / se;
                let ok = z.abs() <= 3.0;
                rows.push(format!(
                    "  elems={elems:2} jam={je_db:4.1}dB legit={snr_db:4.1}dB: \
                     mc={:.4e} quad={:.4e} z={z:+.1}{}",
                    mc.value,
                    quad.value,
                    if ok { "" } else { "  <-- exceeds 3 sigma" }
                ));
                if !ok {
                    failures.push(z);
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && elapsed < 600.0;
    let detail = format!(
        "{} of {} grid points outside 3 sigma, {:.0} s (budget 600 s). \
         The analytic route's gamma-moment approximation sits systematically \
         above the exact model (its mean is ~2% high), so at n = 3e6 the \
         statistical error is smaller than the approximation bias.\n{}",
        failures.len(),
        rows.len(),
        elapsed,
        rows.join("\n")
    );
    report(3, "cross-route agreement grid", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_04_high_snr_slope_matches_diversity_order() {
    let _g = serial_guard();
    let snrs_db = [50.0, 55.0, 60.0, 65.0, 70.0];
    let mut all_ok = true;
    let mut parts = Vec::new();
    for &(m, n) in &[(16u32, 16u32), (16, 32)] {
        let mut ys = Vec::new();
        for &s in &snrs_db {
            let cfg = SystemConfig {
                m_elems: m,
                n_elems: n,
                snr_sr_db: s,
                snr_rd_db: s,
                ..SystemConfig::default()
            };
            ys.push(ip_quadrature(&cfg).unwrap().value.log10());
        }
        let slope = ls_slope(&snrs_db, &ys);
        let asym = ip_asymptotic(&SystemConfig {
            m_elems: m,
            n_elems: n,
            ..SystemConfig::default()
        })
        .unwrap();
        let expected = -asym.diversity_order / 10.0;
        let rel_err = ((slope - expected) / expected).abs();
        let ok = rel_err <= 0.10;
        all_ok &= ok;
        parts.push(format!(
            "({m},{n}): slope {slope:.4} dec/dB vs -d/10 = {expected:.4} ({:.1}% off)",
            rel_err * 100.0
        ));
    }
    // Diversity order must be the minimum of the per-hop shapes.
    for &(m, n) in &[(16u32, 16u32), (16, 32), (32, 16)] {
        let cfg = SystemConfig {
            m_elems: m,
            n_elems: n,
            ..SystemConfig::default()
        };
        let d = cfg.derive().unwrap();
        let asym = ip_asymptotic(&cfg).unwrap();
        let ok = asym.diversity_order == d.m_sr.min(d.m_rd);
        all_ok &= ok;
        if !ok {
            parts.push(format!(
                "({m},{n}): diversity {} != min(shapes) {}",
                asym.diversity_order,
                d.m_sr.min(d.m_rd)
            ));
        }
    }
    let detail = parts.join("; ");
    report(4, "high-SNR slope and diversity construction", all_ok, &detail);
    assert!(all_ok, "{detail}");
}

#[test]
fn criterion_05_phase_resolution_gain_and_saturation() {
    let _g = serial_guard();
    let ip_at_nb = |nb: u32| {
        let cfg = SystemConfig {
            nb1: nb,
            nb2: nb,
            snr_je_db: Some(0.0),
            ..SystemConfig::default()
        };
        ip_quadrature(&cfg).unwrap().value
    };
    let ip1 = ip_at_nb(1);
    let ip3 = ip_at_nb(3);
    let ip5 = ip_at_nb(5);
    let ratio = ip1 / ip3;
    let sat_gap = (ip3 - ip5).abs() / ip3;
    let coarse_ok = ratio > 3.0;
    let saturation_ok = sat_gap < 0.05;
    let pass = coarse_ok && saturation_ok;
    let detail = format!(
        "coarse-register penalty ratio ip(1)/ip(3) = {ratio:.2} (> 3: {coarse_ok}); \
         saturation gap |ip(3)-ip(5)|/ip(3) = {:.1}% (< 5%: {saturation_ok}). \
         The 3-bit register still concedes ~0.21 dB of mean power versus 5 bits, \
         and the steep IP slope (~0.15 decade/dB here) turns that into an ~11% gap.",
        sat_gap * 100.0
    );
    report(5, "phase-register resolution effects", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_06_hop_swap_symmetry() {
    let _g = serial_guard();
    let a = SystemConfig {
        snr_sr_db: 20.0,
        snr_rd_db: 35.0,
        ..SystemConfig::default()
    };
    let b = SystemConfig {
        snr_sr_db: 35.0,
        snr_rd_db: 20.0,
        ..SystemConfig::default()
    };
    let qa = ip_quadrature(&a).unwrap().value;
    let qb = ip_quadrature(&b).unwrap().value;
    let quad_rel = (qa - qb).abs() / qa;
    let quad_ok = quad_rel <= 1e-9;

    let n = 400_000;
    let ma = estimate_ip(&a, n, 2468).unwrap();
    let mb = estimate_ip(&b, n, 2469).unwrap();
    let se = (ma.std_error.unwrap().powi(2) + mb.std_error.unwrap().powi(2)).sqrt();
    let z = (ma.value - mb.value) / se;
    let mc_ok = z.abs() <= 3.0;

    let pass = quad_ok && mc_ok;
    let detail = format!(
        "quad {qa:.6e} vs {qb:.6e} (rel diff {quad_rel:.1e}); mc z = {z:+.2}"
    );
    report(6, "hop-swap symmetry", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_07_composite_coefficients_uncorrelated_across_seeds() {
    let _g = serial_guard();
    let cfg = SystemConfig::default();
    let mut exceed = 0u32;
    let mut worst: f64 = 0.0;
    for seed in 1..=10u64 {
        let rep = estimate_moments(&cfg, 1_000_000, seed).unwrap();
        let max_corr = rep.corr_rd_re.max(rep.corr_rd_je).max(rep.corr_re_je);
        worst = worst.max(max_corr);
        if max_corr > 0.003 {
            exceed += 1;
        }
    }
    let pass = exceed <= 1;
    let detail = format!(
        "{exceed}/10 seeds exceeded 0.003 (worst normalized pseudo-covariance {worst:.2e}) \
         at 1e6 samples"
    );
    report(7, "composite-coefficient uncorrelatedness", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_08_sample_means_match_closed_forms() {
    let _g = serial_guard();
    let cfg = SystemConfig::default();
    let d = cfg.derive().unwrap();
    let rep = estimate_moments(&cfg, 500_000, 555).unwrap();

    let m = f64::from(cfg.m_elems);
    let exact_sr =
        d.snr_sr * (m + m * (m - 1.0) * (std::f64::consts::PI / 4.0).powi(2) * d.phi11 * d.phi11);
    let z_sr = (rep.mean_gamma_sr - exact_sr) / rep.se_gamma_sr;
    let z_re = (rep.mean_big_gamma_re - d.mean_exp_re) / rep.se_big_gamma_re;
    let pass = z_sr.abs() <= 3.0 && z_re.abs() <= 3.0;
    let detail = format!(
        "first-hop mean {:.4e} vs exact {:.4e} (z = {z_sr:+.2}); \
         eavesdropper power mean {:.4e} vs {:.4e} (z = {z_re:+.2})",
        rep.mean_gamma_sr, exact_sr, rep.mean_big_gamma_re, d.mean_exp_re
    );
    report(8, "sample means vs closed forms", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_09_special_function_and_distribution_health() {
    let _g = serial_guard();
    // (a) Upper-incomplete-gamma recurrence residual on 200 random points.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_residual: f64 = 0.0;
    for _ in 0..200 {
        let a = loop {
            let cand: f64 = rng.random_range(-15.0..15.0);
            if (cand - cand.round()).abs() > 1e-3 {
                break cand;
            }
        };
        let x: f64 = rng.random_range(0.001..=50.0);
        let g_hi = upper_inc_gamma(a + 1.0, x).unwrap();
        let g_lo = upper_inc_gamma(a, x).unwrap();
        let power = (a * x.ln() - x).exp();
        let scale = g_hi.abs().max(power).max(1e-300);
        worst_residual = worst_residual.max(((g_hi - (a * g_lo + power)) / scale).abs());
    }
    let recurrence_ok = worst_residual <= 1e-10;

    // (b) The eavesdropper SINR density integrates to 1.
    let mut density_ok = true;
    let mut worst_density_gap: f64 = 0.0;
    for je in [Some(10.0), Some(30.0), None] {
        let d = SystemConfig {
            snr_je_db: je,
            ..SystemConfig::default()
        }
        .derive()
        .unwrap();
        let r = integrate_semi_infinite_with(
            |z| pdf_eav(z, &d).unwrap_or(f64::NAN),
            &QuadOptions {
                rel_tol: 1e-10,
                abs_tol: 1e-300,
                breakpoints: vec![d.mean_exp_re],
                ..QuadOptions::default()
            },
        );
        let gap = (r.value - 1.0).abs();
        worst_density_gap = worst_density_gap.max(gap);
        density_ok &= r.converged && gap <= 1e-8;
    }

    // (c) Hop CCDF is bounded in [0, 1] and non-increasing over a wide scan.
    let d = SystemConfig::default().derive().unwrap();
    let mut ccdf_ok = true;
    let mut prev = f64::INFINITY;
    for i in 0..1000 {
        let x = 10f64.powf(-1.0 + 10.0 * i as f64 / 999.0); // 0.1 .. 1e9
        let v = ccdf_hop(x, d.m_sr, d.scale_sr).unwrap();
        ccdf_ok &= (0.0..=1.0).contains(&v) && v <= prev + 1e-12;
        prev = v;
        let c = cdf_hop(x, d.m_sr, d.scale_sr).unwrap();
        ccdf_ok &= (c + v - 1.0).abs() <= 1e-12;
    }

    let pass = recurrence_ok && density_ok && ccdf_ok;
    let detail = format!(
        "recurrence residual worst {worst_residual:.1e} (<= 1e-10: {recurrence_ok}); \
         density normalization worst gap {worst_density_gap:.1e} (<= 1e-8: {density_ok}); \
         hop CCDF bounded/monotone over 1000-point scan: {ccdf_ok}"
    );
    report(9, "special-function and distribution health", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_10_setup_ordering() {
    let _g = serial_guard();
    let n = 300_000;
    let ip_for = |setup: Setup, seed: u64| {
        let cfg = SystemConfig {
            setup,
            ..SystemConfig::default()
        };
        estimate_ip(&cfg, n, seed).unwrap()
    };
    let dual = ip_for(Setup::DualRis, 7);
    let first = ip_for(Setup::FirstHopRisOnly, 8);
    let second = ip_for(Setup::SecondHopRisOnly, 9);

    let se_df = (dual.std_error.unwrap().powi(2) + first.std_error.unwrap().powi(2)).sqrt();
    let se_fs = (first.std_error.unwrap().powi(2) + second.std_error.unwrap().powi(2)).sqrt();
    let dual_below_first = dual.value < first.value - 3.0 * se_df;
    let first_leq_second = first.value <= second.value + 3.0 * se_fs;
    let tenfold = dual.value * 10.0 <= first.value;
    let pass = dual_below_first && first_leq_second && tenfold;
    let detail = format!(
        "dual = {:.4e}, first-hop-only = {:.4e}, second-hop-only = {:.4e}; \
         dual < first: {dual_below_first}, first <= second: {first_leq_second}, \
         >= 10x protection: {tenfold}",
        dual.value, first.value, second.value
    );
    report(10, "surface-placement ordering", pass, &detail);
    assert!(pass, "{detail}");
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}
