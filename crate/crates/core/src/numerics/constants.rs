use super::beta::{beta_inc_log_pair, BetaPoint};
use super::gamma::ln_gamma_ratio;
use super::{AccuracyConfig, LogReal};
use crate::error::{domain, Result};

const HALF_LN_PI: f64 = 0.572_364_942_924_700_1;

/// Normalizer `c_α` with `c_α ∫_{-1}^{1} (1-t²)^α dt = 1`, i.e.
/// `Γ(α+3/2) / (√π Γ(α+1))`.
pub fn c_alpha(alpha: f64) -> Result<LogReal> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return domain(format!("c_alpha requires alpha > -1, got {alpha}"));
    }
    Ok(LogReal::from_ln(ln_gamma_ratio(alpha + 1.5, alpha + 1.0) - HALF_LN_PI))
}

/// Normalizer of the density `(1 - s²/α)^{α/2}` on `[-√α, √α]` relative to
/// the standard normal: `Γ((α+3)/2) / (Γ(α/2+1) √(α/2))`.
pub fn a_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return domain(format!("a_alpha requires alpha > 0, got {alpha}"));
    }
    Ok((ln_gamma_ratio(0.5 * (alpha + 3.0), 0.5 * alpha + 1.0) - 0.5 * (0.5 * alpha).ln()).exp())
}

/// CDF `Φ_α(h)` of the density `a_α φ-like (1 - s²/α)^{α/2}` on `[-√α, √α]`.
///
/// After `s = √α t` this is the symmetric beta law with parameter `α/2 + 1`.
pub fn gaussian_comparison_cdf(h: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return domain(format!("alpha must be positive, got {alpha}"));
    }
    let root = alpha.sqrt();
    if h <= -root {
        return Ok(0.0);
    }
    if h >= root {
        return Ok(1.0);
    }
    let t = h / root;
    let p = BetaPoint {
        x: 0.5 * (1.0 + t),
        y: 0.5 * (1.0 - t),
        ln_x: (0.5 * (1.0 + t)).ln(),
        ln_y: (0.5 * (1.0 - t)).ln(),
    };
    let shape = 0.5 * alpha + 1.0;
    Ok(beta_inc_log_pair(shape, shape, p, &AccuracyConfig::SPECIAL)?.0.exp())
}

fn inner_point(h: f64, d: u32) -> Result<BetaPoint> {
    if !(-1.0..=1.0).contains(&h) {
        return domain(format!("height must lie in [-1,1], got {h}"));
    }
    if d < 2 {
        return domain(format!("dimension must be at least 2, got {d}"));
    }
    let x = 0.5 * (1.0 + h);
    let y = 0.5 * (1.0 - h);
    Ok(BetaPoint {
        x,
        y,
        ln_x: x.ln(),
        ln_y: y.ln(),
    })
}

/// Shape parameter of the projected coordinate law, `(d-1)/2`.
pub(crate) fn inner_shape(d: u32) -> f64 {
    0.5 * (f64::from(d) - 1.0)
}

/// `ln G(h)` where `G(h) = c_{(d-3)/2} ∫_{-1}^{h} (1-s²)^{(d-3)/2} ds` is the
/// CDF of one coordinate of a uniform point on `S^{d-1}`.
pub fn ln_inner_cdf(h: f64, d: u32) -> Result<f64> {
    let a = inner_shape(d);
    Ok(beta_inc_log_pair(a, a, inner_point(h, d)?, &AccuracyConfig::SPECIAL)?.0)
}

/// `ln(1 - G(h))`, finite even when `1 - G(h)` underflows.
pub fn ln_inner_cdf_complement(h: f64, d: u32) -> Result<f64> {
    let a = inner_shape(d);
    Ok(beta_inc_log_pair(a, a, inner_point(h, d)?, &AccuracyConfig::SPECIAL)?.1)
}

/// `G(h) = I_{(1+h)/2}((d-1)/2, (d-1)/2)`.
pub fn inner_cdf(h: f64, d: u32) -> Result<f64> {
    ln_inner_cdf(h, d).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn c_alpha_closed_forms() {
        assert!((c_alpha(0.0).unwrap().to_f64() - 0.5).abs() < 1e-14);
        assert!((c_alpha(-0.5).unwrap().to_f64() - 1.0 / PI).abs() < 1e-14);
        // c_1 = 3/4 from ∫(1-t²) = 4/3
        assert!((c_alpha(1.0).unwrap().to_f64() - 0.75).abs() < 1e-14);
        assert!(c_alpha(-1.0).is_err());
    }

    #[test]
    fn inner_cdf_boundaries_and_closed_forms() {
        for d in 2..12 {
            assert_eq!(inner_cdf(-1.0, d).unwrap(), 0.0);
            assert_eq!(inner_cdf(1.0, d).unwrap(), 1.0);
            assert!((inner_cdf(0.0, d).unwrap() - 0.5).abs() < 1e-14);
        }
        // d = 2: (arcsin h + π/2)/π
        assert!((inner_cdf(0.5, 2).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        // d = 3: uniform on [-1,1] (Archimedes)
        assert!((inner_cdf(0.2, 3).unwrap() - 0.6).abs() < 1e-14);
        // d = 5: (2 + 3h - h³)/4
        assert!((inner_cdf(0.5, 5).unwrap() - 0.84375).abs() < 1e-14);
        assert!(inner_cdf(1.5, 3).is_err());
        assert!(inner_cdf(0.0, 1).is_err());
    }

    #[test]
    fn complement_is_finite_beyond_linear_underflow() {
        // d = 3: 1 - G(h) = (1-h)/2
        let h = 1.0 - 2e-16;
        let l = ln_inner_cdf_complement(h, 3).unwrap();
        assert!((l - (1e-16f64).ln()).abs() < 0.2);
        // d = 400 at h = 0.99: mass ~ (1-h²)^{199.5}, far below 1e-300
        let l = ln_inner_cdf_complement(0.99, 400).unwrap();
        assert!(l.is_finite() && l < -700.0);
    }

    #[test]
    fn a_alpha_tends_to_one() {
        let a10 = a_alpha(10.0).unwrap();
        let a1000 = a_alpha(1000.0).unwrap();
        assert!(a10 > a1000 && a1000 > 1.0);
        assert!(a1000 - 1.0 < 1e-3);
    }

    #[test]
    fn gaussian_comparison_symmetry() {
        assert!((gaussian_comparison_cdf(0.0, 10.0).unwrap() - 0.5).abs() < 1e-14);
        let p = gaussian_comparison_cdf(1.3, 7.0).unwrap();
        let q = gaussian_comparison_cdf(-1.3, 7.0).unwrap();
        assert!((p + q - 1.0).abs() < 1e-14);
    }
}
