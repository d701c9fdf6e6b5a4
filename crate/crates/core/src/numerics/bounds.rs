//! Numerical checks of three elementary inequalities:
//!
//! - `e^{-x - x²/n} <= (1 - x/n)^n <= e^{-x}` for `0 <= x/n <= 1/2`;
//! - the tail bound
//!   `1 - (1-h²)/(2h²(D+2)) <= ∫_h^1 (1-s²)^D ds / [(1-h²)^{D+1} / (2h(D+1))] <= 1`
//!   for `D > -1`, `h ∈ (0,1)`;
//! - `Φ <= Φ_α <= a_α Φ` on `[0, √α]` and
//!   `Φ >= Φ_α >= (1 - a_α)/2 + a_α Φ` on `[-√α, 0]`.
//!
//! Each side is evaluated independently and compared with a relative slack.

use serde::{Deserialize, Serialize};

use super::beta::{beta_inc_log_pair, BetaPoint};
use super::constants::{a_alpha, gaussian_comparison_cdf};
use super::gamma::ln_gamma_ratio;
use super::normal::norm_cdf;
use super::AccuracyConfig;

const HALF_LN_PI: f64 = 0.572_364_942_924_700_1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum BoundCheck {
    ExpSandwich { x: f64, n: f64 },
    TailIntegral { h: f64, exponent: f64 },
    GaussianComparison { h: f64, alpha: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    /// The point does not satisfy the hypotheses of its inequality.
    Hypothesis { reason: String },
    /// `lower <= value` failed.
    Lower { lower: f64, value: f64 },
    /// `value <= upper` failed.
    Upper { value: f64, upper: f64 },
    /// A side could not be evaluated.
    Numeric { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub index: usize,
    pub check: BoundCheck,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub checked: usize,
    pub violations: Vec<BoundViolation>,
}

impl BoundsReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn leq(a: f64, b: f64, slack: f64) -> bool {
    a <= b + slack * a.abs().max(b.abs())
}

/// Two-sided comparison `lower <= value <= upper` (relative slack).
fn sandwich(lower: f64, value: f64, upper: f64, slack: f64) -> Option<ViolationKind> {
    if !leq(lower, value, slack) {
        Some(ViolationKind::Lower { lower, value })
    } else if !leq(value, upper, slack) {
        Some(ViolationKind::Upper { value, upper })
    } else {
        None
    }
}

fn check_exp_sandwich(x: f64, n: f64, slack: f64) -> Option<ViolationKind> {
    if !(n > 0.0) || !(0.0..=0.5).contains(&(x / n)) {
        return Some(ViolationKind::Hypothesis {
            reason: format!("needs n > 0 and 0 <= x/n <= 1/2, got x={x}, n={n}"),
        });
    }
    // compared in log space, where a relative slack is an absolute one
    let mid = n * (-x / n).ln_1p();
    let lower = -x - x * x / n;
    let upper = -x;
    let s = slack;
    if lower > mid + s {
        Some(ViolationKind::Lower { lower, value: mid })
    } else if mid > upper + s {
        Some(ViolationKind::Upper { value: mid, upper })
    } else {
        None
    }
}

/// `ln ∫_h^1 (1-s²)^D ds = ln(B(D+1, 1/2)/2) + ln I_{1-h²}(D+1, 1/2)`.
pub(crate) fn ln_cap_integral(h: f64, exponent: f64) -> crate::Result<f64> {
    let ln_beta = HALF_LN_PI - ln_gamma_ratio(exponent + 1.5, exponent + 1.0);
    let p = BetaPoint {
        x: (1.0 - h) * (1.0 + h),
        y: h * h,
        ln_x: (-h).ln_1p() + h.ln_1p(),
        ln_y: 2.0 * h.ln(),
    };
    let (ln_i, _) = beta_inc_log_pair(exponent + 1.0, 0.5, p, &AccuracyConfig::SPECIAL)?;
    Ok(ln_beta - std::f64::consts::LN_2 + ln_i)
}

fn check_tail_integral(h: f64, exponent: f64, slack: f64) -> Option<ViolationKind> {
    if !(exponent > -1.0) || !(h > 0.0 && h < 1.0) {
        return Some(ViolationKind::Hypothesis {
            reason: format!("needs D > -1 and h in (0,1), got D={exponent}, h={h}"),
        });
    }
    let ln_int = match ln_cap_integral(h, exponent) {
        Ok(v) => v,
        Err(e) => {
            return Some(ViolationKind::Numeric {
                reason: e.to_string(),
            })
        }
    };
    let one_m_h2 = (1.0 - h) * (1.0 + h);
    let ln_bound = (exponent + 1.0) * ((-h).ln_1p() + h.ln_1p()) - (2.0 * h * (exponent + 1.0)).ln();
    let ratio = (ln_int - ln_bound).exp();
    let lower = 1.0 - one_m_h2 / (2.0 * h * h * (exponent + 2.0));
    sandwich(lower, ratio, 1.0, slack)
}

fn check_gaussian(h: f64, alpha: f64, slack: f64) -> Option<ViolationKind> {
    if !(alpha > 0.0) || !(h.abs() <= alpha.sqrt()) {
        return Some(ViolationKind::Hypothesis {
            reason: format!("needs alpha > 0 and |h| <= sqrt(alpha), got h={h}, alpha={alpha}"),
        });
    }
    let (phi_a, a) = match (gaussian_comparison_cdf(h, alpha), a_alpha(alpha)) {
        (Ok(p), Ok(a)) => (p, a),
        (Err(e), _) | (_, Err(e)) => {
            return Some(ViolationKind::Numeric {
                reason: e.to_string(),
            })
        }
    };
    let phi = norm_cdf(h);
    if h >= 0.0 {
        sandwich(phi, phi_a, a * phi, slack)
    } else {
        sandwich(0.5 * (1.0 - a) + a * phi, phi_a, phi, slack)
    }
}

/// Evaluates every grid point and collects the ones whose inequality fails by
/// more than `slack` (relative), or whose hypotheses do not hold.
pub fn check_bounds_suite(grid: &[BoundCheck], slack: f64) -> BoundsReport {
    let violations = grid
        .iter()
        .enumerate()
        .filter_map(|(index, &check)| {
            let kind = match check {
                BoundCheck::ExpSandwich { x, n } => check_exp_sandwich(x, n, slack),
                BoundCheck::TailIntegral { h, exponent } => check_tail_integral(h, exponent, slack),
                BoundCheck::GaussianComparison { h, alpha } => check_gaussian(h, alpha, slack),
            }?;
            Some(BoundViolation { index, check, kind })
        })
        .collect();
    BoundsReport {
        checked: grid.len(),
        violations,
    }
}
