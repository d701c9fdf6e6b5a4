use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numerics::LogReal;

/// Where the maximum of the exponent sits relative to the integration range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplaceBoundary {
    /// Stationary interior maximum; `derivative` is `f''(r*)`.
    Interior,
    /// Maximum at an endpoint of the range; `derivative` is `f'(r*)`.
    Endpoint,
}

/// Leading-order Laplace approximation of `∫ g(r) e^{x f(r)} dr`:
///
/// `g(r*) e^{x f(r*)} √(2π / (x |f''(r*)|))` for an interior maximum,
/// `g(r*) e^{x f(r*)} / (x |f'(r*)|)` for an endpoint maximum.
pub fn laplace_approx<G, F>(
    g: G,
    f: F,
    derivative: f64,
    r_star: f64,
    x: f64,
    boundary: LaplaceBoundary,
) -> Result<LogReal>
where
    G: Fn(f64) -> f64,
    F: Fn(f64) -> f64,
{
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("Laplace parameter must be positive, got {x}"));
    }
    if derivative == 0.0 || !derivative.is_finite() {
        return domain(format!(
            "Laplace approximation needs a finite nonzero derivative at r*, got {derivative}"
        ));
    }
    let scale = x * derivative.abs();
    let ln_width = match boundary {
        LaplaceBoundary::Interior => 0.5 * (2.0 * std::f64::consts::PI / scale).ln(),
        LaplaceBoundary::Endpoint => -scale.ln(),
    };
    Ok(LogReal::from_f64(g(r_star)) * LogReal::from_ln(x * f(r_star) + ln_width))
}
