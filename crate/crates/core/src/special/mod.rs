//! Special functions and quadrature underpinning the analytic route:
//! the gamma family (including the upper incomplete gamma at negative and
//! zero orders, which the high-SNR coding gain requires) and an adaptive
//! Gauss–Kronrod engine for semi-infinite integrals of decaying integrands.

pub mod gamma;
pub mod quad;

pub use gamma::{
    exp_e1, gamma_fn, ln_gamma, reg_gamma_p, reg_gamma_q, upper_inc_gamma, SpecialError,
};
pub use quad::{integrate_semi_infinite, integrate_semi_infinite_with, QuadOptions, QuadResult};
