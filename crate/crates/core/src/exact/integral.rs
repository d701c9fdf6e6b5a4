//! The facet integral is split at `h = 0` into an upper and a lower half, and
//! each half again at `|h| = 1/√2`:
//!
//! * polar piece, `|h| = cos ψ` with `ψ ∈ (0, π/4]`, integrated in `u = ln ψ`;
//! * equatorial piece, `|h| = sin φ` with `φ ∈ [0, π/4]`, integrated in `w = ln φ`.
//!
//! Both angles are small near the end of the piece where mass concentrates
//! when `n` is large (`ψ ~ n^{-1/(d-1)}` near the poles, `φ ~ 1/n` near the
//! equator), so the log variable resolves peaks that are far below the
//! spacing of `f64` around `π/2`. On the equatorial piece `G` is written
//! `G(h) = (1 + sign(h) J)/2` with `J = I_{h²}(1/2, (d-1)/2)`, and the constant
//! `-(n-d) ln 2` is taken out of the exponent. Quadrature runs on
//! `exp(L - max L)`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, LN_2};

use super::{HeightInterval, PolytopeParams};
use crate::error::{Error, Result};
use crate::numerics::quadrature::integrate;
use crate::numerics::{beta_inc_log_pair, c_alpha, AccuracyConfig, BetaPoint, LogReal};

/// Drop in the log-integrand at which the domain is truncated.
const LOG_CUTOFF: f64 = 70.0;

/// Smallest relative offset from the mode used for breakpoints.
const LADDER_BASE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    /// `h >= 0`
    Upper,
    /// `h <= 0`
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Piece {
    /// `|h| = cos ψ`, variable `ln ψ`
    Polar,
    /// `|h| = sin φ`, variable `ln φ`
    Equatorial,
}

/// A piece of the integration domain in its log-angle variable.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Segment {
    pub side: Side,
    pub piece: Piece,
    pub v_lo: f64,
    pub v_hi: f64,
}

/// `arccos h` without cancellation near `h = 1`.
pub(crate) fn acos_accurate(h: f64) -> f64 {
    2.0 * (0.5 * (1.0 - h)).sqrt().asin()
}

/// Segments covering `|h| ∈ [lo, hi] ⊆ [0, 1]` on one side.
pub(crate) fn side_segments(side: Side, lo: f64, hi: f64) -> Vec<Segment> {
    let mut out = Vec::with_capacity(2);
    if !(hi > lo) {
        return out;
    }
    if lo < FRAC_1_SQRT_2 {
        let top = if hi >= FRAC_1_SQRT_2 { FRAC_PI_4 } else { hi.asin() };
        out.push(Segment {
            side,
            piece: Piece::Equatorial,
            v_lo: lo.asin().ln(),
            v_hi: top.ln(),
        });
    }
    if hi > FRAC_1_SQRT_2 {
        let top = if lo <= FRAC_1_SQRT_2 { FRAC_PI_4 } else { acos_accurate(lo) };
        out.push(Segment {
            side,
            piece: Piece::Polar,
            v_lo: acos_accurate(hi).ln(),
            v_hi: top.ln(),
        });
    }
    out
}

pub(crate) fn segments_for(window: &HeightInterval) -> Vec<Segment> {
    let (h1, h2) = (window.h1(), window.h2());
    let mut out = Vec::with_capacity(4);
    if h1 < h2 && h1 < 0.0 {
        out.extend(side_segments(Side::Lower, (-h2).max(0.0), -h1));
    }
    if h1 < h2 && h2 > 0.0 {
        out.extend(side_segments(Side::Upper, h1.max(0.0), h2));
    }
    out
}

/// Upper-half segments with `sin ψ <= e^{ln_s}`, i.e. `h >= sqrt(1 - s²)`.
pub(crate) fn upper_segments_below_sine(ln_s: f64) -> Vec<Segment> {
    if ln_s >= 0.0 {
        return side_segments(Side::Upper, 0.0, 1.0);
    }
    let s = ln_s.exp();
    if s <= FRAC_1_SQRT_2 {
        let ln_psi = if s < 1e-8 { ln_s + s * s / 6.0 } else { s.asin().ln() };
        return vec![Segment {
            side: Side::Upper,
            piece: Piece::Polar,
            v_lo: f64::NEG_INFINITY,
            v_hi: ln_psi,
        }];
    }
    // φ = π/2 - asin(s) = acos(s)
    let phi = acos_accurate(s);
    let mut out = side_segments(Side::Upper, FRAC_1_SQRT_2, 1.0);
    out.push(Segment {
        side: Side::Upper,
        piece: Piece::Equatorial,
        v_lo: phi.ln(),
        v_hi: FRAC_PI_4.ln(),
    });
    out
}

/// `ln sin(t)` for `t = exp(ln_t) ∈ [0, π/2]`, exact in the small-angle limit.
fn ln_sin(t: f64, ln_t: f64) -> f64 {
    if t < 1e-4 {
        ln_t - t * t / 6.0
    } else {
        t.sin().ln()
    }
}

/// `ln cos(t)` for `t ∈ [0, π/2)`.
fn ln_cos(t: f64) -> f64 {
    let s = (0.5 * t).sin();
    (-2.0 * s * s).ln_1p()
}

/// Log of the integrand of one piece, up to the additive constant `offset`.
pub(crate) struct LogIntegrand {
    /// `d² - 2d`, exponent of `sqrt(1-h²)` including the Jacobian.
    power: f64,
    shape: f64,
    excess: f64,
    ln_excess: f64,
    side: Side,
    piece: Piece,
}

impl LogIntegrand {
    pub fn new(params: &PolytopeParams, side: Side, piece: Piece) -> Self {
        let d = f64::from(params.d());
        Self {
            power: d * d - 2.0 * d,
            shape: 0.5 * (d - 1.0),
            excess: params.excess(),
            ln_excess: params.ln_excess(),
            side,
            piece,
        }
    }

    /// Constant removed from the exponent on the lower equatorial piece, where
    /// `G -> 1/2` carries the mass once `n` is large.
    pub fn offset(&self) -> f64 {
        if self.uses_offset() {
            -self.excess * LN_2
        } else {
            0.0
        }
    }

    fn uses_offset(&self) -> bool {
        self.piece == Piece::Equatorial && self.side == Side::Lower && self.excess.is_finite()
    }

    /// `(n-d) ln G` given `ln G` and `ln(-ln G)`.
    fn power_term(&self, ln_g: f64, ln_neg_ln_g: f64) -> f64 {
        if self.excess.is_finite() && ln_neg_ln_g > -690.0 {
            self.excess * ln_g
        } else {
            -(self.ln_excess + ln_neg_ln_g).exp()
        }
    }

    fn polar(&self, psi: f64, u: f64) -> Result<f64> {
        let half = 0.5 * psi;
        let (s, c) = half.sin_cos();
        let p = BetaPoint {
            x: s * s,
            y: c * c,
            ln_x: 2.0 * ln_sin(half, u - LN_2),
            ln_y: 2.0 * c.ln(),
        };
        // t = I_{sin²(ψ/2)}(a, a) = G(-cos ψ)
        let (ln_t, ln_1mt) = beta_inc_log_pair(self.shape, self.shape, p, &AccuracyConfig::SPECIAL)?;
        let (ln_g, ln_neg) = match self.side {
            Side::Lower => (ln_t, (-ln_t).ln()),
            Side::Upper => {
                let ln_neg = if ln_t < -30.0 {
                    ln_t + (0.5 * ln_t.exp()).ln_1p()
                } else {
                    (-ln_1mt).ln()
                };
                (ln_1mt, ln_neg)
            }
        };
        Ok(self.power * ln_sin(psi, u) + u + self.power_term(ln_g, ln_neg))
    }

    fn equatorial(&self, phi: f64, w: f64) -> Result<f64> {
        let (s, c) = phi.sin_cos();
        let ln_c = ln_cos(phi);
        let p = BetaPoint {
            x: s * s,
            y: c * c,
            ln_x: 2.0 * ln_sin(phi, w),
            ln_y: 2.0 * ln_c,
        };
        let (_, ln_1mj) = beta_inc_log_pair(0.5, self.shape, p, &AccuracyConfig::SPECIAL)?;
        let term = if self.uses_offset() {
            // (n-d) ln(2G) = (n-d) ln(1 - J)
            self.excess * ln_1mj
        } else {
            let ln_g = match self.side {
                // G = 1 - (1-J)/2
                Side::Upper => (-0.5 * ln_1mj.exp()).ln_1p(),
                Side::Lower => ln_1mj - LN_2,
            };
            let ln_neg = if self.side == Side::Upper && ln_1mj < -30.0 {
                let q = ln_1mj - LN_2;
                q + (0.5 * q.exp()).ln_1p()
            } else {
                (-ln_g).ln()
            };
            self.power_term(ln_g, ln_neg)
        };
        Ok(self.power * ln_c + w + term)
    }

    pub fn eval(&self, v: f64) -> f64 {
        let angle = v.exp();
        let r = match self.piece {
            Piece::Polar => self.polar(angle, v),
            Piece::Equatorial => self.equatorial(angle, v),
        };
        r.unwrap_or(f64::NAN)
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..300 {
        if (b - a).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Walks from `start` in direction `dir` until the log-integrand drops by
/// `LOG_CUTOFF` below `peak` or the limit is reached.
/// Walks away from the mode in doubling steps. Returns the first offset at
/// which `f` has dropped by more than one unit (the local peak width) and
/// the point where it has dropped below the cutoff, both capped at `limit`.
fn peak_extent<F: Fn(f64) -> f64>(f: &F, start: f64, dir: f64, limit: f64, peak: f64) -> (f64, f64) {
    let mut step = LADDER_BASE * (1.0 + start.abs());
    let mut width = None;
    loop {
        let cand = start + dir * step;
        if (dir < 0.0 && cand <= limit) || (dir > 0.0 && cand >= limit) {
            return (width.unwrap_or((limit - start).abs()), limit);
        }
        let v = f(cand);
        if width.is_none() && v < peak - 1.0 {
            width = Some(step);
        }
        if v < peak - LOG_CUTOFF {
            return (width.unwrap_or(step), cand);
        }
        step *= 2.0;
    }
}

/// `ln ∫` over one segment; `-inf` for an empty segment.
pub(crate) fn ln_segment_integral(
    params: &PolytopeParams,
    seg: &Segment,
    cfg: &AccuracyConfig,
) -> Result<f64> {
    if !(seg.v_hi > seg.v_lo) {
        return Ok(f64::NEG_INFINITY);
    }
    let integrand = LogIntegrand::new(params, seg.side, seg.piece);
    let f = |v: f64| integrand.eval(v);

    let search_lo = if seg.v_lo.is_finite() {
        seg.v_lo
    } else {
        let d = f64::from(params.d());
        seg.v_hi.min(0.0) - 2.0 * params.ln_n().max(1.0) - d.ln() - 20.0
    };
    let mut mode = golden_max(&f, search_lo, seg.v_hi);
    let mut peak = f(mode);
    for cand in [search_lo, seg.v_hi] {
        let v = f(cand);
        if v > peak || peak.is_nan() {
            mode = cand;
            peak = v;
        }
    }
    if peak == f64::NEG_INFINITY {
        // underflows everywhere even in log space
        return Ok(f64::NEG_INFINITY);
    }
    if !peak.is_finite() {
        return Err(Error::Internal(format!(
            "facet integrand has no finite maximum on {seg:?}"
        )));
    }

    let (width_left, left) = peak_extent(&f, mode, -1.0, seg.v_lo, peak);
    let (width_right, right) = peak_extent(&f, mode, 1.0, seg.v_hi, peak);

    // geometric breakpoints from a fraction of the peak width outwards, so
    // narrow peaks are never missed
    let mut breaks = vec![left, mode, right];
    for (width, dir, end) in [(width_left, -1.0, left), (width_right, 1.0, right)] {
        let mut off = width / 16.0;
        while (mode + dir * off - end) * dir < 0.0 {
            breaks.push(mode + dir * off);
            off *= 4.0;
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    // Rounding in L is of order eps * |L|; once that exceeds the requested
    // tolerance no quadrature can meet it, so the target is relaxed to the
    // evaluation noise floor.
    let floor = 8.0 * f64::EPSILON * peak.abs();
    let cfg = AccuracyConfig {
        rel_tol: cfg.rel_tol.max(floor),
        ..*cfg
    };
    // values above the located maximum are rounding noise
    let result = integrate(|v| (f(v) - peak).min(0.0).exp(), &breaks, &cfg)?;
    let ln_value = if result.value > 0.0 && result.value.is_finite() {
        result.value.ln()
    } else {
        // The peak is narrower than the spacing of f64 at the mode: one-sided
        // Laplace estimate with the slope taken across the truncation bracket.
        let edge = if (right - mode).abs() >= (mode - left).abs() { right } else { left };
        let slope = (peak - f(edge)) / (edge - mode).abs();
        if !(slope > 0.0 && slope.is_finite()) {
            return Err(Error::Internal(format!(
                "facet integral evaluated to {} on {seg:?}",
                result.value
            )));
        }
        -slope.ln()
    };
    Ok(integrand.offset() + peak + ln_value)
}

pub(crate) fn ln_segments_integral(
    params: &PolytopeParams,
    segments: &[Segment],
    cfg: &AccuracyConfig,
) -> Result<LogReal> {
    segments.iter().try_fold(LogReal::ZERO, |acc, seg| {
        Ok(acc + LogReal::from_ln(ln_segment_integral(params, seg, cfg)?))
    })
}

/// `I_{[h1,h2]} = ∫_{h1}^{h2} (1-h²)^{(d²-2d-1)/2} G(h)^{n-d} dh`.
pub fn integral_i(params: &PolytopeParams, window: &HeightInterval) -> Result<LogReal> {
    integral_i_with(params, window, &AccuracyConfig::QUADRATURE)
}

pub fn integral_i_with(
    params: &PolytopeParams,
    window: &HeightInterval,
    cfg: &AccuracyConfig,
) -> Result<LogReal> {
    ln_segments_integral(params, &segments_for(window), cfg)
}

/// `ln(C(n,d) · 2 · c_{(d²-2d-1)/2})`, the factor turning `I` into `F`.
pub(crate) fn ln_facet_prefactor(params: &PolytopeParams) -> Result<f64> {
    let d = f64::from(params.d());
    let c = c_alpha(0.5 * (d * d - 2.0 * d - 1.0))?;
    Ok(params.ln_binomial() + LN_2 + c.log_abs())
}

/// Expected number of facets with height in the window.
pub fn expected_facets(params: &PolytopeParams, window: &HeightInterval) -> Result<LogReal> {
    expected_facets_with(params, window, &AccuracyConfig::QUADRATURE)
}

pub fn expected_facets_with(
    params: &PolytopeParams,
    window: &HeightInterval,
    cfg: &AccuracyConfig,
) -> Result<LogReal> {
    let i = integral_i_with(params, window, cfg)?;
    Ok(i * LogReal::from_ln(ln_facet_prefactor(params)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn facets(n: u64, d: u32) -> f64 {
        let p = PolytopeParams::new(n, d).unwrap();
        expected_facets(&p, &HeightInterval::FULL).unwrap().to_f64()
    }

    #[test]
    fn circle_has_n_edges() {
        for n in [3, 4, 10, 50] {
            let f = facets(n, 2);
            assert!((f / n as f64 - 1.0).abs() < 1e-8, "n={n}: {f}");
        }
    }

    #[test]
    fn simplex_and_euler() {
        for d in 2..8 {
            let f = facets(u64::from(d) + 1, d);
            assert!((f / f64::from(d + 1) - 1.0).abs() < 1e-8, "d={d}: {f}");
        }
        for n in [5, 12, 40] {
            let f = facets(n, 3);
            assert!((f / (2 * n - 4) as f64 - 1.0).abs() < 1e-8, "n={n}: {f}");
        }
    }

    #[test]
    fn matches_direct_quadrature_in_h() {
        // 30-digit quadrature of the integrand in h
        let cases = [
            (20, 5, -1.0, 1.0, 173.399_697_805_389_98),
            (20, 5, -1.0, 0.0, 0.060_892_071_642_397_306),
            (100, 10, 0.3, 0.8, 963_086.162_340_484_7),
            (1000, 4, -1.0, 1.0, 6540.439_730_147_342),
            (1000, 4, 0.9, 0.99, 6386.620_882_281_668),
            (50, 7, -0.2, 0.4, 501.043_060_091_443_1),
        ];
        for (n, d, h1, h2, expect) in cases {
            let p = PolytopeParams::new(n, d).unwrap();
            let w = HeightInterval::new(h1, h2).unwrap();
            let f = expected_facets(&p, &w).unwrap().to_f64();
            assert!((f / expect - 1.0).abs() < 1e-8, "n={n} d={d} [{h1},{h2}]: {f}");
        }
    }

    #[test]
    fn large_n_stays_consistent() {
        for ln_n in [30.0, 50.0, 300.0, 3000.0] {
            for d in [5, 20, 100] {
                let p = PolytopeParams::from_ln_n(ln_n, d).unwrap();
                let full = integral_i(&p, &HeightInterval::FULL).unwrap();
                let lo = integral_i(&p, &HeightInterval::new(-1.0, 0.0).unwrap()).unwrap();
                let hi = integral_i(&p, &HeightInterval::new(0.0, 1.0).unwrap()).unwrap();
                assert!(lo < hi, "ln n = {ln_n}, d = {d}");
                assert!((full.log_abs() - (lo + hi).log_abs()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn empty_window_is_zero() {
        let p = PolytopeParams::new(20, 5).unwrap();
        let w = HeightInterval::new(0.3, 0.3).unwrap();
        assert!(integral_i(&p, &w).unwrap().is_zero());
    }

    #[test]
    fn halves_add_up() {
        let p = PolytopeParams::new(20, 5).unwrap();
        let full = integral_i(&p, &HeightInterval::FULL).unwrap();
        let lo = integral_i(&p, &HeightInterval::new(-1.0, 0.0).unwrap()).unwrap();
        let hi = integral_i(&p, &HeightInterval::new(0.0, 1.0).unwrap()).unwrap();
        assert!(((lo + hi) / full).to_f64() - 1.0 < 1e-9);
    }

    #[test]
    fn astronomically_many_points() {
        // d = 3 keeps F = 2n - 4 for any n
        let p = PolytopeParams::from_ln_n(5000.0, 3).unwrap();
        let f = expected_facets(&p, &HeightInterval::FULL).unwrap();
        assert!((f.log_abs() - (5000.0 + LN_2)).abs() < 1e-8, "{f:?}");
    }
}
