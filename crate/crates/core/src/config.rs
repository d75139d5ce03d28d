//! Operating point and derived distribution parameters.
//!
//! A RIS hop with K elements and nb-bit phases has instantaneous SNR
//! `γ = γ̄ |Σ_k |h_k||g_k| e^{jξ_k}|²` with ξ_k the quantization residual.
//! Its distribution is approximated as Gamma with shape
//!
//! ```text
//! m = (K/2) · (φ₁² π²/16) / (1 + φ₂ − 2 φ₁² π²/16)
//! ```
//!
//! and mean `Ω γ̄`, where `Ω = (K π φ₁ / 4)²` and `φ_k = sinc(2^{k−1−nb} π)`
//! is the k-th circular moment of the phase residual. The eavesdropper's
//! intercepted power and the jamming power behave as exponentials with means
//! `N γ̄_RE` and `N γ̄_JE`. [`SystemConfig::derive`] evaluates all of these
//! once (including the single dB→linear conversion point) and hands them to
//! the Monte Carlo and analytic routes.

use thiserror::Error;

/// Above this bit depth the phase residual is numerically indistinguishable
/// from zero: every circular moment is treated as exactly 1 (continuous
/// limit), and the sampler clamps the residual interval accordingly.
pub const NB_CONTINUOUS_CAP: u32 = 62;

/// Which links are assisted by a surface.
///
/// The comparative single-surface setups replace each missing RIS path with a
/// direct Rayleigh link at the same average SNR; in `FirstHopRisOnly` the
/// eavesdropper overhears the relay broadcast directly (single Rayleigh
/// intercept and jamming links), while in `SecondHopRisOnly` it sees the
/// surface-reflected broadcast exactly as in the dual configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setup {
    DualRis,
    FirstHopRisOnly,
    SecondHopRisOnly,
}

impl Setup {
    pub fn as_str(self) -> &'static str {
        match self {
            Setup::DualRis => "dual",
            Setup::FirstHopRisOnly => "first",
            Setup::SecondHopRisOnly => "second",
        }
    }
}

impl std::str::FromStr for Setup {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "dual" => Ok(Setup::DualRis),
            "first" => Ok(Setup::FirstHopRisOnly),
            "second" => Ok(Setup::SecondHopRisOnly),
            other => Err(ConfigError::invalid(
                "setup",
                format!("expected dual|first|second, got {other:?}"),
            )),
        }
    }
}

impl std::fmt::Display for Setup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Full operating point. Average SNRs are carried in dB; `snr_je_db = None`
/// means the jammer is absent (linear γ̄_JE = 0), which is distinct from
/// 0 dB (linear 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Elements on the source-side surface (M).
    pub m_elems: u32,
    /// Elements on the destination-side surface (N).
    pub n_elems: u32,
    /// Phase-shift resolution of the first surface, bits.
    pub nb1: u32,
    /// Phase-shift resolution of the second surface, bits.
    pub nb2: u32,
    pub snr_sr_db: f64,
    pub snr_rd_db: f64,
    pub snr_re_db: f64,
    pub snr_je_db: Option<f64>,
    pub setup: Setup,
}

impl Default for SystemConfig {
    /// The standard operating point used throughout the experiments:
    /// M = N = 32, nb = 3 bits, γ̄_SR = γ̄_RD = 30 dB, γ̄_RE = 40 dB,
    /// γ̄_JE = 10 dB, both hops surface-assisted.
    fn default() -> Self {
        SystemConfig {
            m_elems: 32,
            n_elems: 32,
            nb1: 3,
            nb2: 3,
            snr_sr_db: 30.0,
            snr_rd_db: 30.0,
            snr_re_db: 40.0,
            snr_je_db: Some(10.0),
            setup: Setup::DualRis,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
}

impl ConfigError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field,
            reason: reason.into(),
        }
    }
}

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// k-th circular moment `E[e^{jkξ}] = sinc(2^{k−1−nb} π)` of the phase
/// residual, real by symmetry. Only k ∈ {1, 2} appear in the model.
pub fn phase_moment(nb: u32, k: u32) -> Result<f64, ConfigError> {
    if !(1..=2).contains(&k) {
        return Err(ConfigError::invalid("k", format!("moment order must be 1 or 2, got {k}")));
    }
    if nb < 1 {
        return Err(ConfigError::invalid("nb", "phase resolution must be at least 1 bit"));
    }
    if nb > NB_CONTINUOUS_CAP {
        return Ok(1.0);
    }
    // arg = 2^{k-1-nb}·π, exact in f64 (power-of-two scaling).
    let arg = std::f64::consts::PI * f64::exp2(k as f64 - 1.0 - nb as f64);
    Ok(arg.sin() / arg)
}

/// Gamma shape parameter of a K-element hop with nb-bit phases.
pub fn gamma_shape(k_elems: u32, nb: u32) -> Result<f64, ConfigError> {
    if k_elems < 1 {
        return Err(ConfigError::invalid("k_elems", "element count must be at least 1"));
    }
    let p1 = phase_moment(nb, 1)?;
    let p2 = phase_moment(nb, 2)?;
    let t = p1 * p1 * std::f64::consts::PI.powi(2) / 16.0;
    Ok(k_elems as f64 / 2.0 * t / (1.0 + p2 - 2.0 * t))
}

/// Normalized mean power `Ω = (K π φ₁ / 4)²` of a K-element hop: the hop's
/// average SNR under the approximation is `Ω γ̄`.
pub fn omega(k_elems: u32, nb: u32) -> Result<f64, ConfigError> {
    if k_elems < 1 {
        return Err(ConfigError::invalid("k_elems", "element count must be at least 1"));
    }
    let p1 = phase_moment(nb, 1)?;
    let k = k_elems as f64;
    Ok((k * std::f64::consts::PI * p1 / 4.0).powi(2))
}

/// Everything the estimators need, with dB→linear applied exactly once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Gamma shape of the source→relay hop.
    pub m_sr: f64,
    /// Gamma shape of the relay→destination hop.
    pub m_rd: f64,
    pub omega_sr: f64,
    pub omega_rd: f64,
    /// First/second circular phase moments per surface: `phi<surface><order>`.
    pub phi11: f64,
    pub phi12: f64,
    pub phi21: f64,
    pub phi22: f64,
    /// Gamma scale θ = Ω γ̄ / m per hop (linear SNR units).
    pub scale_sr: f64,
    pub scale_rd: f64,
    /// Linear average SNRs.
    pub snr_sr: f64,
    pub snr_rd: f64,
    pub snr_re: f64,
    /// Linear γ̄_JE; 0 when the jammer is absent.
    pub snr_je: f64,
    /// Mean of the exponential model of the intercepted power, N γ̄_RE.
    pub mean_exp_re: f64,
    /// Mean of the exponential model of the jamming power, N γ̄_JE.
    pub mean_exp_je: f64,
}

impl SystemConfig {
    /// Linear γ̄_JE with the jammer-absent sentinel mapped to 0.
    pub fn snr_je_lin(&self) -> f64 {
        self.snr_je_db.map(db_to_lin).unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.m_elems < 1 {
            return Err(ConfigError::invalid("m_elems", "element count must be at least 1"));
        }
        if self.n_elems < 1 {
            return Err(ConfigError::invalid("n_elems", "element count must be at least 1"));
        }
        if self.nb1 < 1 {
            return Err(ConfigError::invalid("nb1", "phase resolution must be at least 1 bit"));
        }
        if self.nb2 < 1 {
            return Err(ConfigError::invalid("nb2", "phase resolution must be at least 1 bit"));
        }
        for (field, v) in [
            ("snr_sr_db", self.snr_sr_db),
            ("snr_rd_db", self.snr_rd_db),
            ("snr_re_db", self.snr_re_db),
        ] {
            if !v.is_finite() {
                return Err(ConfigError::invalid(field, format!("must be finite, got {v}")));
            }
        }
        if let Some(v) = self.snr_je_db {
            if !v.is_finite() {
                return Err(ConfigError::invalid("snr_je_db", format!("must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Validate and evaluate every derived parameter.
    pub fn derive(&self) -> Result<DerivedParams, ConfigError> {
        self.validate()?;
        let phi11 = phase_moment(self.nb1, 1)?;
        let phi12 = phase_moment(self.nb1, 2)?;
        let phi21 = phase_moment(self.nb2, 1)?;
        let phi22 = phase_moment(self.nb2, 2)?;
        let m_sr = gamma_shape(self.m_elems, self.nb1)?;
        let m_rd = gamma_shape(self.n_elems, self.nb2)?;
        let omega_sr = omega(self.m_elems, self.nb1)?;
        let omega_rd = omega(self.n_elems, self.nb2)?;
        let snr_sr = db_to_lin(self.snr_sr_db);
        let snr_rd = db_to_lin(self.snr_rd_db);
        let snr_re = db_to_lin(self.snr_re_db);
        let snr_je = self.snr_je_lin();
        Ok(DerivedParams {
            m_sr,
            m_rd,
            omega_sr,
            omega_rd,
            phi11,
            phi12,
            phi21,
            phi22,
            scale_sr: omega_sr * snr_sr / m_sr,
            scale_rd: omega_rd * snr_rd / m_rd,
            snr_sr,
            snr_rd,
            snr_re,
            snr_je,
            mean_exp_re: self.n_elems as f64 * snr_re,
            mean_exp_je: self.n_elems as f64 * snr_je,
        })
    }
}
