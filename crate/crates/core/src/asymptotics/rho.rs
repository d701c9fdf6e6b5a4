//! Rate functions of the linear regime `(n - d)/d -> ρ`:
//!
//! `f_ρ(r) = ρ ln Φ(r) - r²/2`, maximized at `r_ρ`, and
//! `g_ρ(r) = (ρ+1) ln(ρ+1) - ρ ln ρ + f_ρ(r)`, positive exactly on `(r_ℓ, r_u)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::{log_norm_cdf, norm_hazard};

const ROOT_TOL: f64 = 1e-12;

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        domain(format!("ρ must be positive and finite, got {rho}"))
    }
}

pub fn f_rho(rho: f64, r: f64) -> f64 {
    rho * log_norm_cdf(r) - 0.5 * r * r
}

pub fn f_rho_prime(rho: f64, r: f64) -> f64 {
    rho * norm_hazard(r) - r
}

pub fn f_rho_second(rho: f64, r: f64) -> f64 {
    let m = norm_hazard(r);
    -rho * m * (r + m) - 1.0
}

/// `(ρ+1) ln(ρ+1) - ρ ln ρ`, the exponential growth rate of `C(n, d)`.
fn entropy_term(rho: f64) -> f64 {
    (rho + 1.0) * rho.ln_1p() - rho * rho.ln()
}

pub fn g_rho(rho: f64, r: f64) -> f64 {
    entropy_term(rho) + f_rho(rho, r)
}

/// `argmax f_ρ`, the limit of `√d H_typ`.
///
/// `f_ρ'` is decreasing with `f_ρ'(0) > 0`; Newton steps are kept inside a
/// bracket that is grown until the derivative changes sign.
pub fn solve_r_rho(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let fp = |r| f_rho_prime(rho, r);
    let mut lo = 0.0;
    let mut hi = 1.0;
    while fp(hi) >= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Internal(format!("no sign change of f' for ρ = {rho}")));
        }
    }
    let mut r = 0.5 * (lo + hi);
    for _ in 0..200 {
        let v = fp(r);
        if v == 0.0 {
            return Ok(r);
        }
        if v > 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let newton = r - v / f_rho_second(rho, r);
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - r).abs() <= ROOT_TOL * r.max(1.0) || hi - lo <= ROOT_TOL {
            return Ok(next);
        }
        r = next;
    }
    Err(Error::Convergence {
        method: "safeguarded Newton for r_ρ",
        iterations: 200,
        achieved: hi - lo,
    })
}

/// Bisection for the sign change of `f` between `inside` (f > 0) and a point
/// found by stepping away in direction `dir` with doubling steps.
fn outer_root<F: Fn(f64) -> f64>(f: F, inside: f64, dir: f64) -> Result<f64> {
    let mut step = 1.0;
    let mut good = inside;
    let mut bad = inside + dir * step;
    while f(bad) > 0.0 {
        good = bad;
        step *= 2.0;
        bad = inside + dir * step;
        if step > 1e8 {
            return Err(Error::Internal("g_ρ has no sign change".into()));
        }
    }
    while (bad - good).abs() > ROOT_TOL * good.abs().max(1.0) {
        let mid = 0.5 * (good + bad);
        if mid == good || mid == bad {
            break;
        }
        if f(mid) > 0.0 {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(0.5 * (good + bad))
}

/// `(r_ℓ, r_u)`, the zeros of `g_ρ` on either side of `r_ρ`.
pub fn solve_range_roots(rho: f64) -> Result<(f64, f64)> {
    let r_rho = solve_r_rho(rho)?;
    let g = |r| g_rho(rho, r);
    if !(g(r_rho) > 0.0) {
        return Err(Error::Internal(format!("g_ρ(r_ρ) = {} is not positive", g(r_rho))));
    }
    Ok((outer_root(g, r_rho, -1.0)?, outer_root(g, r_rho, 1.0)?))
}

/// The `ρ` at which `g_ρ(0)` changes sign: below it the expected number of
/// facets with negative height grows without bound.
pub fn negative_height_threshold() -> f64 {
    // g_ρ(0) = (ρ+1)ln(ρ+1) - ρ ln ρ - ρ ln 2 is decreasing through zero on [1, 10]
    let g0 = |rho: f64| g_rho(rho, 0.0);
    let (mut lo, mut hi) = (1.0, 10.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if g0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `r_ρ`, `r_ℓ`, `r_u` for one `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoFunctions {
    pub rho: f64,
    pub r_rho: f64,
    pub r_ell: f64,
    pub r_u: f64,
}

impl RhoFunctions {
    pub fn new(rho: f64) -> Result<Self> {
        let r_rho = solve_r_rho(rho)?;
        let (r_ell, r_u) = solve_range_roots(rho)?;
        Ok(Self { rho, r_rho, r_ell, r_u })
    }

    /// `g_ρ(r_ρ)`, the growth rate of `ln F / d`.
    pub fn growth_rate(&self) -> f64 {
        g_rho(self.rho, self.r_rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_one_at_zero_is_ln_two() {
        assert!((g_rho(1.0, 0.0) - std::f64::consts::LN_2).abs() < 1e-15);
        for rho in [0.5, 1.0, 2.0] {
            assert!(g_rho(rho, 0.0) > 0.0);
        }
    }

    #[test]
    fn f_rho_approaches_parabola() {
        // ρ ln Φ(r) ≈ -ρ Φ(-r) for large r
        for r in [5.0, 10.0, 40.0] {
            let gap = f_rho(2.0, r) + 0.5 * r * r;
            let tail = 2.0 * crate::numerics::norm_cdf(-r);
            assert!((gap + tail).abs() <= 1e-6 * tail + 1e-15 * r * r, "r={r}: {gap}");
        }
        assert!(f_rho(2.0, 1e3) < -4e5);
    }

    #[test]
    fn r_one_matches_grid_search() {
        let mut best = (f64::NEG_INFINITY, 0.0);
        for k in 0..=30_000 {
            let r = -1.0 + 1e-4 * f64::from(k);
            let v = f_rho(1.0, r);
            if v > best.0 {
                best = (v, r);
            }
        }
        let r1 = solve_r_rho(1.0).unwrap();
        assert!((r1 - best.1).abs() < 2e-4);
        assert!((r1 - 0.506).abs() < 1e-3);
    }

    #[test]
    fn r_rho_increases_with_rho() {
        let rs: Vec<f64> = [0.1, 0.5, 1.0, 2.0, 5.0].iter().map(|&p| solve_r_rho(p).unwrap()).collect();
        assert!(rs.windows(2).all(|w| w[0] < w[1]), "{rs:?}");
    }

    #[test]
    fn roots_straddle_zero_at_rho_one() {
        let (l, u) = solve_range_roots(1.0).unwrap();
        assert!(l < 0.0 && 0.0 < u);
        for rho in [0.5, 1.0, 3.0] {
            let (l, u) = solve_range_roots(rho).unwrap();
            assert!(g_rho(rho, l).abs() < 1e-8 && g_rho(rho, u).abs() < 1e-8);
        }
    }

    #[test]
    fn threshold_near_three_point_four() {
        let rho0 = negative_height_threshold();
        assert!((rho0 - 3.4).abs() < 0.05, "{rho0}");
        assert!(g_rho(rho0 - 0.01, 0.0) > 0.0 && g_rho(rho0 + 0.01, 0.0) < 0.0);
    }

    #[test]
    fn rejects_nonpositive_rho() {
        assert!(solve_r_rho(0.0).is_err());
        assert!(solve_r_rho(f64::NAN).is_err());
    }
}
