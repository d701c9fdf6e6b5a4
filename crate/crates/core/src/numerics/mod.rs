//! Scalar special functions, the log-scale real type, and checkers for the
//! elementary inequalities the asymptotic analysis leans on.

mod beta;
mod bounds;
mod constants;
mod gamma;
mod logreal;
mod normal;
pub mod quadrature;

pub use beta::{
    ln_reg_inc_beta, ln_reg_inc_beta_complement, reg_inc_beta, reg_inc_beta_complement,
};
pub(crate) use beta::{beta_inc_log_pair, BetaPoint};
pub use bounds::{check_bounds_suite, BoundCheck, BoundViolation, BoundsReport, ViolationKind};
pub use constants::{
    a_alpha, c_alpha, gaussian_comparison_cdf, inner_cdf, ln_inner_cdf, ln_inner_cdf_complement,
};
pub use gamma::{ln_binomial, ln_gamma_ratio, log_gamma};
pub use logreal::LogReal;
pub use normal::{log_norm_cdf, norm_cdf, norm_hazard, norm_pdf};

pub(crate) use logreal::log_add_exp;

/// Tolerance and iteration budget for an iterative numerical routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyConfig {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl AccuracyConfig {
    /// Defaults used by the special functions.
    pub const SPECIAL: AccuracyConfig = AccuracyConfig {
        rel_tol: 1e-12,
        max_iter: 10_000,
    };

    /// Defaults used by the facet-integral quadrature.
    pub const QUADRATURE: AccuracyConfig = AccuracyConfig {
        rel_tol: 1e-9,
        max_iter: 4_000,
    };

    pub fn new(rel_tol: f64, max_iter: usize) -> crate::Result<Self> {
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return crate::error::domain(format!("rel_tol must be positive, got {rel_tol}"));
        }
        if max_iter == 0 {
            return crate::error::domain("max_iter must be at least 1");
        }
        Ok(Self { rel_tol, max_iter })
    }
}

impl Default for AccuracyConfig {
    fn default() -> Self {
        Self::SPECIAL
    }
}
