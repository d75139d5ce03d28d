//! Secrecy analysis of a dual-hop RIS-assisted decode-and-forward relay link
//! with cooperative jamming and quantized RIS phase control.
//!
//! The model: a source reaches a relay through a first reconfigurable
//! intelligent surface (M reflective elements), and the relay reaches the
//! destination through a second surface (N elements). Each element applies a
//! phase shift quantized to `nb` bits, leaving a residual phase error uniform
//! on [−π/2^nb, π/2^nb]. An eavesdropper overhears the relay's transmission
//! via the second surface while a friendly jammer (cancelled at the
//! destination) degrades the eavesdropper's SINR. All individual links are
//! Rayleigh (unit-variance complex Gaussian coefficients).
//!
//! The intercept probability — the chance that the end-to-end secrecy
//! capacity is negative, i.e. `min(γ_SR, γ_RD) < γ_RE` — is computed by three
//! mutually cross-validating routes:
//!
//! * [`mc`] — Monte Carlo over the exact channel model, deterministic and
//!   optionally data-parallel;
//! * [`analytic`] — adaptive quadrature of the closed-form integrand built
//!   from the Gamma approximation of each RIS hop and the exponential/ratio
//!   model of the eavesdropper SINR;
//! * [`analytic::ip_asymptotic`] — the high-SNR power law `G_c·γ̄^{−G_d}`.
//!
//! [`config`] owns the operating point and the derived distribution
//! parameters; [`special`] provides the incomplete-gamma family (including
//! negative orders) and the semi-infinite quadrature engine the analytic
//! route is built on.

pub mod analytic;
pub mod config;
pub mod mc;
pub mod special;

pub use analytic::{ip_asymptotic, ip_quadrature, AnalyticError, AsymptoticResult, DominantHop};
pub use config::{DerivedParams, Setup, SystemConfig};
pub use mc::{estimate_ip, estimate_ip_sequential, estimate_moments, IpEstimate, IpMethod, MomentReport};
