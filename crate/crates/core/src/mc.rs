//! Exact-model Monte Carlo estimation of the intercept probability.
//!
//! This route simulates the physical channel with no distributional
//! approximations: every fading coefficient is drawn as a unit-variance
//! circularly-symmetric complex Gaussian, the surface applies the conjugate
//! phase of the legitimate cascade plus a quantization error drawn uniformly
//! from the quantizer cell, and the eavesdropper/jammer composites are formed
//! from the *same* element-wise draws, preserving all cross-correlations of
//! the true model. It is therefore the ground truth that the analytic
//! (gamma-approximation) route is validated against.
//!
//! # Determinism
//!
//! Sampling is organized in fixed-size batches. Batch `i` uses an RNG seeded
//! from the master seed with stream index `i`, so the sample set depends only
//! on `(seed, n_samples)` — not on the worker count or on whether the
//! `parallel` feature is enabled. Counts are integers and per-batch moment
//! accumulators are reduced in batch order, making every estimate
//! bit-for-bit reproducible. The per-sample draw order is part of this
//! contract; reordering draws is a seed-breaking change.

use num_complex::Complex64;
use rand::distr::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::{ConfigError, DerivedParams, Setup, SystemConfig};

/// Number of samples per RNG stream. Fixed: changing it changes which
/// samples a given `(seed, n_samples)` pair produces.
pub const BATCH_SIZE: u64 = 1 << 16;

/// Which of the three computation routes produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IpMethod {
    /// Exact-model Monte Carlo simulation.
    MonteCarlo,
    /// Numerical integration of the gamma-approximation outage integral.
    Quadrature,
    /// High-SNR closed form (coding gain / diversity order).
    Asymptotic,
}

impl IpMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            IpMethod::MonteCarlo => "mc",
            IpMethod::Quadrature => "quadrature",
            IpMethod::Asymptotic => "asymptotic",
        }
    }
}

impl std::fmt::Display for IpMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An intercept-probability estimate with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpEstimate {
    /// Estimated intercept probability.
    pub value: f64,
    /// Binomial standard error (Monte Carlo only).
    pub std_error: Option<f64>,
    /// Sample count (Monte Carlo only).
    pub n_samples: Option<u64>,
    /// Route that produced the estimate.
    pub method: IpMethod,
    /// Master seed (Monte Carlo only).
    pub seed: Option<u64>,
}

/// One draw of the full channel state.
#[derive(Debug, Clone, Copy)]
pub struct ChannelSample {
    /// First-hop instantaneous SNR.
    pub gamma_sr: f64,
    /// Second-hop instantaneous SNR.
    pub gamma_rd: f64,
    /// Eavesdropper instantaneous SINR (signal over jamming-plus-noise).
    pub gamma_re: f64,
    /// Eavesdropper received signal power term (numerator of the SINR).
    pub big_gamma_re: f64,
    /// Eavesdropper received jamming power term.
    pub big_gamma_je: f64,
    /// Composite relay→destination channel coefficient.
    pub g_rd: Complex64,
    /// Composite relay→eavesdropper channel coefficient.
    pub g_re: Complex64,
    /// Composite jammer→eavesdropper channel coefficient.
    pub g_je: Complex64,
}

/// Sample means, standard errors, and cross-correlation diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct MomentReport {
    pub n_samples: u64,
    pub mean_gamma_sr: f64,
    pub se_gamma_sr: f64,
    pub mean_gamma_rd: f64,
    pub se_gamma_rd: f64,
    pub mean_big_gamma_re: f64,
    pub se_big_gamma_re: f64,
    pub mean_big_gamma_je: f64,
    pub se_big_gamma_je: f64,
    /// Normalized pseudo-covariance magnitude between the composite
    /// relay→destination and relay→eavesdropper coefficients. Near zero when
    /// the composites are uncorrelated (they should be, despite sharing
    /// element-wise fades).
    pub corr_rd_re: f64,
    /// Same diagnostic for relay→destination vs jammer→eavesdropper.
    pub corr_rd_je: f64,
    /// Same diagnostic for relay→eavesdropper vs jammer→eavesdropper.
    pub corr_re_je: f64,
}

/// Secrecy capacity of a main/eavesdropper SNR pair in bits/s/Hz (clamped at
/// zero). The intercept event `gamma_eav > gamma_main` is exactly the event
/// that this quantity vanishes.
pub fn secrecy_capacity(gamma_main: f64, gamma_eav: f64) -> f64 {
    ((1.0 + gamma_main).log2() - (1.0 + gamma_eav).log2()).max(0.0)
}

/// Unit-variance circularly-symmetric complex Gaussian draw.
fn sample_cn<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Precomputed per-configuration sampling state.
struct Sampler<'a> {
    derived: &'a DerivedParams,
    setup: Setup,
    m_elems: u32,
    n_elems: u32,
    pqe1: Uniform<f64>,
    pqe2: Uniform<f64>,
}

fn pqe_dist(nb: u32) -> Uniform<f64> {
    // Quantizer cell half-width; positive for every finite register size.
    let half_width = std::f64::consts::PI * f64::exp2(-f64::from(nb));
    Uniform::new(-half_width, half_width).expect("positive quantizer half-width")
}

impl<'a> Sampler<'a> {
    fn new(cfg: &SystemConfig, derived: &'a DerivedParams) -> Self {
        Self {
            derived,
            setup: cfg.setup,
            m_elems: cfg.m_elems,
            n_elems: cfg.n_elems,
            pqe1: pqe_dist(cfg.nb1),
            pqe2: pqe_dist(cfg.nb2),
        }
    }

    /// Aligned surface cascade for the hop where both endpoints are
    /// legitimate: only magnitudes survive, rotated by the residual
    /// quantization error.
    fn draw_aligned_cascade<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        elems: u32,
        pqe: &Uniform<f64>,
    ) -> Complex64 {
        let mut g = Complex64::new(0.0, 0.0);
        for _ in 0..elems {
            let h_in = sample_cn(rng);
            let h_out = sample_cn(rng);
            let xi: f64 = pqe.sample(rng);
            g += h_in.norm() * h_out.norm() * Complex64::from_polar(1.0, xi);
        }
        g
    }

    /// Surface-assisted second hop with an overhearing eavesdropper and a
    /// jammer transmitting through the same surface. The three composites are
    /// built from shared element-wise draws, exactly as the physics dictates.
    fn draw_second_hop_surface<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> (Complex64, Complex64, Complex64) {
        let mut g_rd = Complex64::new(0.0, 0.0);
        let mut g_re = Complex64::new(0.0, 0.0);
        let mut g_je = Complex64::new(0.0, 0.0);
        for _ in 0..self.n_elems {
            let h_rl = sample_cn(rng); // relay → surface element
            let h_ld = sample_cn(rng); // surface element → destination
            let h_le = sample_cn(rng); // surface element → eavesdropper
            let h_jl = sample_cn(rng); // jammer → surface element
            let xi: f64 = self.pqe2.sample(rng);
            let rot = Complex64::from_polar(1.0, xi);
            // Element phase is matched to the relay→destination cascade;
            // residual phases below follow from that choice.
            let u_rl = h_rl / h_rl.norm();
            let u_ld = h_ld / h_ld.norm();
            g_rd += h_rl.norm() * h_ld.norm() * rot;
            g_re += h_rl.norm() * (h_le * u_ld.conj()) * rot;
            g_je += (h_jl * u_rl.conj()) * (h_le * u_ld.conj()) * rot;
        }
        (g_rd, g_re, g_je)
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelSample {
        let d = self.derived;
        match self.setup {
            Setup::DualRis => {
                let g_sr = self.draw_aligned_cascade(rng, self.m_elems, &self.pqe1);
                let (g_rd, g_re, g_je) = self.draw_second_hop_surface(rng);
                finish_sample(d, g_sr.norm_sqr(), g_rd, g_re, g_je)
            }
            Setup::FirstHopRisOnly => {
                let g_sr = self.draw_aligned_cascade(rng, self.m_elems, &self.pqe1);
                // Direct (unassisted) second hop and direct exposure of the
                // relay's transmission to the eavesdropper and jammer.
                let g_rd = sample_cn(rng);
                let g_re = sample_cn(rng);
                let g_je = sample_cn(rng);
                finish_sample(d, g_sr.norm_sqr(), g_rd, g_re, g_je)
            }
            Setup::SecondHopRisOnly => {
                let h_sr = sample_cn(rng);
                let (g_rd, g_re, g_je) = self.draw_second_hop_surface(rng);
                finish_sample(d, h_sr.norm_sqr(), g_rd, g_re, g_je)
            }
        }
    }
}

fn finish_sample(
    d: &DerivedParams,
    sr_power: f64,
    g_rd: Complex64,
    g_re: Complex64,
    g_je: Complex64,
) -> ChannelSample {
    let gamma_sr = d.snr_sr * sr_power;
    let gamma_rd = d.snr_rd * g_rd.norm_sqr();
    let big_gamma_re = d.snr_re * g_re.norm_sqr();
    let big_gamma_je = d.snr_je * g_je.norm_sqr();
    let gamma_re = big_gamma_re / (big_gamma_je + 1.0);
    ChannelSample {
        gamma_sr,
        gamma_rd,
        gamma_re,
        big_gamma_re,
        big_gamma_je,
        g_rd,
        g_re,
        g_je,
    }
}

/// Draw one channel realization. Convenience wrapper for tests and
/// diagnostics; the batch estimators below precompute the sampler state.
pub fn sample_channel<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &SystemConfig,
    derived: &DerivedParams,
) -> ChannelSample {
    Sampler::new(cfg, derived).draw(rng)
}

/// `(batch_index, batch_length)` decomposition of `n_samples`.
fn batch_plan(n_samples: u64) -> Vec<(u64, u64)> {
    let mut plan = Vec::new();
    let mut remaining = n_samples;
    let mut idx = 0u64;
    while remaining > 0 {
        let len = remaining.min(BATCH_SIZE);
        plan.push((idx, len));
        remaining -= len;
        idx += 1;
    }
    plan
}

fn batch_rng(seed: u64, batch_idx: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch_idx);
    rng
}

/// Map every batch through `work` and collect the results in batch order.
/// With the `parallel` feature the batches run on the rayon pool; the
/// output vector order (and therefore any subsequent reduction) is identical
/// either way.
fn run_batches<T, F>(plan: &[(u64, u64)], work: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        plan.par_iter().map(|&(idx, len)| work(idx, len)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        plan.iter().map(|&(idx, len)| work(idx, len)).collect()
    }
}

fn count_batch(cfg: &SystemConfig, derived: &DerivedParams, seed: u64, idx: u64, len: u64) -> u64 {
    let mut rng = batch_rng(seed, idx);
    let sampler = Sampler::new(cfg, derived);
    let mut hits = 0u64;
    for _ in 0..len {
        let s = sampler.draw(&mut rng);
        if s.gamma_re > s.gamma_sr.min(s.gamma_rd) {
            hits += 1;
        }
    }
    hits
}

fn finish_ip(count: u64, n_samples: u64, seed: u64) -> IpEstimate {
    let n = n_samples as f64;
    let p = count as f64 / n;
    let se = (p * (1.0 - p) / n).sqrt();
    if count == 0 {
        log::warn!(
            "monte carlo observed no intercept events in {n_samples} samples; \
             the estimate is a floor, not a value"
        );
    } else if count < 100 {
        log::warn!(
            "monte carlo observed only {count} intercept events in {n_samples} samples; \
             relative error is large in this rare-event regime"
        );
    }
    IpEstimate {
        value: p,
        std_error: Some(se),
        n_samples: Some(n_samples),
        method: IpMethod::MonteCarlo,
        seed: Some(seed),
    }
}

fn check_mc_args(cfg: &SystemConfig, n_samples: u64) -> Result<DerivedParams, ConfigError> {
    if n_samples == 0 {
        return Err(ConfigError::Invalid {
            field: "n_samples",
            reason: "must be at least 1".to_string(),
        });
    }
    cfg.derive()
}

/// Estimate the intercept probability by exact-model simulation.
///
/// Deterministic in `(cfg, n_samples, seed)`; see the module docs.
pub fn estimate_ip(cfg: &SystemConfig, n_samples: u64, seed: u64) -> Result<IpEstimate, ConfigError> {
    let derived = check_mc_args(cfg, n_samples)?;
    let plan = batch_plan(n_samples);
    let counts = run_batches(&plan, |idx, len| count_batch(cfg, &derived, seed, idx, len));
    let total: u64 = counts.iter().sum();
    Ok(finish_ip(total, n_samples, seed))
}

/// Single-threaded reference implementation of [`estimate_ip`].
///
/// Always compiled, regardless of the `parallel` feature: it anchors the
/// determinism guarantee (the parallel path must reproduce it bit-for-bit)
/// and serves as the baseline in the benchmark suite.
pub fn estimate_ip_sequential(
    cfg: &SystemConfig,
    n_samples: u64,
    seed: u64,
) -> Result<IpEstimate, ConfigError> {
    let derived = check_mc_args(cfg, n_samples)?;
    let mut total = 0u64;
    for (idx, len) in batch_plan(n_samples) {
        total += count_batch(cfg, &derived, seed, idx, len);
    }
    Ok(finish_ip(total, n_samples, seed))
}

/// Per-batch accumulator for the moment estimator. Reduced in batch order so
/// the floating-point sums are reproducible.
#[derive(Debug, Clone, Copy, Default)]
struct MomentAcc {
    sum_gamma_sr: f64,
    sum_sq_gamma_sr: f64,
    sum_gamma_rd: f64,
    sum_sq_gamma_rd: f64,
    sum_big_re: f64,
    sum_sq_big_re: f64,
    sum_big_je: f64,
    sum_sq_big_je: f64,
    sum_g_rd: Complex64,
    sum_g_re: Complex64,
    sum_g_je: Complex64,
    sum_abs2_g_rd: f64,
    sum_abs2_g_re: f64,
    sum_abs2_g_je: f64,
    sum_rd_re: Complex64,
    sum_rd_je: Complex64,
    sum_re_je: Complex64,
}

impl MomentAcc {
    fn absorb(&mut self, s: &ChannelSample) {
        self.sum_gamma_sr += s.gamma_sr;
        self.sum_sq_gamma_sr += s.gamma_sr * s.gamma_sr;
        self.sum_gamma_rd += s.gamma_rd;
        self.sum_sq_gamma_rd += s.gamma_rd * s.gamma_rd;
        self.sum_big_re += s.big_gamma_re;
        self.sum_sq_big_re += s.big_gamma_re * s.big_gamma_re;
        self.sum_big_je += s.big_gamma_je;
        self.sum_sq_big_je += s.big_gamma_je * s.big_gamma_je;
        self.sum_g_rd += s.g_rd;
        self.sum_g_re += s.g_re;
        self.sum_g_je += s.g_je;
        self.sum_abs2_g_rd += s.g_rd.norm_sqr();
        self.sum_abs2_g_re += s.g_re.norm_sqr();
        self.sum_abs2_g_je += s.g_je.norm_sqr();
        self.sum_rd_re += s.g_rd * s.g_re;
        self.sum_rd_je += s.g_rd * s.g_je;
        self.sum_re_je += s.g_re * s.g_je;
    }

    fn merge(&mut self, other: &MomentAcc) {
        self.sum_gamma_sr += other.sum_gamma_sr;
        self.sum_sq_gamma_sr += other.sum_sq_gamma_sr;
        self.sum_gamma_rd += other.sum_gamma_rd;
        self.sum_sq_gamma_rd += other.sum_sq_gamma_rd;
        self.sum_big_re += other.sum_big_re;
        self.sum_sq_big_re += other.sum_sq_big_re;
        self.sum_big_je += other.sum_big_je;
        self.sum_sq_big_je += other.sum_sq_big_je;
        self.sum_g_rd += other.sum_g_rd;
        self.sum_g_re += other.sum_g_re;
        self.sum_g_je += other.sum_g_je;
        self.sum_abs2_g_rd += other.sum_abs2_g_rd;
        self.sum_abs2_g_re += other.sum_abs2_g_re;
        self.sum_abs2_g_je += other.sum_abs2_g_je;
        self.sum_rd_re += other.sum_rd_re;
        self.sum_rd_je += other.sum_rd_je;
        self.sum_re_je += other.sum_re_je;
    }
}

fn mean_se(sum: f64, sum_sq: f64, n: f64) -> (f64, f64) {
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}

/// Normalized pseudo-covariance magnitude: |E[XY] - E[X]E[Y]| over the
/// geometric mean of the (Hermitian) variances.
fn pseudo_corr(
    sum_xy: Complex64,
    sum_x: Complex64,
    sum_y: Complex64,
    abs2_x: f64,
    abs2_y: f64,
    n: f64,
) -> f64 {
    let mean_x = sum_x / n;
    let mean_y = sum_y / n;
    let cov = sum_xy / n - mean_x * mean_y;
    let var_x = (abs2_x / n - mean_x.norm_sqr()).max(0.0);
    let var_y = (abs2_y / n - mean_y.norm_sqr()).max(0.0);
    let denom = (var_x * var_y).sqrt();
    if denom == 0.0 {
        0.0
    } else {
        cov.norm() / denom
    }
}

/// Estimate first and second moments of the channel aggregates plus the
/// composite-coefficient correlation diagnostics. Deterministic in
/// `(cfg, n_samples, seed)` with the same stream layout as [`estimate_ip`].
pub fn estimate_moments(
    cfg: &SystemConfig,
    n_samples: u64,
    seed: u64,
) -> Result<MomentReport, ConfigError> {
    let derived = check_mc_args(cfg, n_samples)?;
    let plan = batch_plan(n_samples);
    let accs = run_batches(&plan, |idx, len| {
        let mut rng = batch_rng(seed, idx);
        let sampler = Sampler::new(cfg, &derived);
        let mut acc = MomentAcc::default();
        for _ in 0..len {
            acc.absorb(&sampler.draw(&mut rng));
        }
        acc
    });
    let mut total = MomentAcc::default();
    for acc in &accs {
        total.merge(acc);
    }

    let n = n_samples as f64;
    let (mean_gamma_sr, se_gamma_sr) = mean_se(total.sum_gamma_sr, total.sum_sq_gamma_sr, n);
    let (mean_gamma_rd, se_gamma_rd) = mean_se(total.sum_gamma_rd, total.sum_sq_gamma_rd, n);
    let (mean_big_gamma_re, se_big_gamma_re) = mean_se(total.sum_big_re, total.sum_sq_big_re, n);
    let (mean_big_gamma_je, se_big_gamma_je) = mean_se(total.sum_big_je, total.sum_sq_big_je, n);

    Ok(MomentReport {
        n_samples,
        mean_gamma_sr,
        se_gamma_sr,
        mean_gamma_rd,
        se_gamma_rd,
        mean_big_gamma_re,
        se_big_gamma_re,
        mean_big_gamma_je,
        se_big_gamma_je,
        corr_rd_re: pseudo_corr(
            total.sum_rd_re,
            total.sum_g_rd,
            total.sum_g_re,
            total.sum_abs2_g_rd,
            total.sum_abs2_g_re,
            n,
        ),
        corr_rd_je: pseudo_corr(
            total.sum_rd_je,
            total.sum_g_rd,
            total.sum_g_je,
            total.sum_abs2_g_rd,
            total.sum_abs2_g_je,
            n,
        ),
        corr_re_je: pseudo_corr(
            total.sum_re_je,
            total.sum_g_re,
            total.sum_g_je,
            total.sum_abs2_g_re,
            total.sum_abs2_g_je,
            n,
        ),
    })
}
