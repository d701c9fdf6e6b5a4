use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use super::regime::{GrowthFamily, RegimeSpec, RegimeTag};
use super::rho::{solve_r_rho, RhoFunctions};
use crate::error::{domain, Error, Result};
use crate::exact::PolytopeParams;
use crate::numerics::{ln_binomial, ln_gamma_ratio, log_add_exp, LogReal};

/// Heuristic constants for the fast-regime height range. The range is proved
/// only for `r1` large and `r2` small enough, with no explicit values.
pub const DEFAULT_R1: f64 = 10.0;
pub const DEFAULT_R2: f64 = 0.1;

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// Dimension, plus the point count when one is given.
///
/// The linear and exponential formulas depend only on `d` and `ρ`; the others
/// need `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticInput {
    pub d: u32,
    pub params: Option<PolytopeParams>,
}

impl AsymptoticInput {
    pub fn dimension(d: u32) -> Result<Self> {
        if d < 2 {
            return domain(format!("dimension must be at least 2, got {d}"));
        }
        Ok(Self { d, params: None })
    }

    pub fn with_params(params: PolytopeParams) -> Self {
        Self {
            d: params.d(),
            params: Some(params),
        }
    }

    fn params(&self, tag: &RegimeTag) -> Result<&PolytopeParams> {
        self.params
            .as_ref()
            .ok_or_else(|| Error::Domain(format!("the {} regime needs n", tag.name())))
    }

    fn check(&self, spec: &RegimeSpec) -> Result<()> {
        match &self.params {
            Some(p) => spec.check_params(p),
            None => Ok(()),
        }
    }
}

/// `ln F` to leading order, with the order of the dropped correction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetCountAsymptotic {
    pub ln_facets: f64,
    /// Order of the dropped terms in `ln F`.
    pub dropped: String,
}

/// `K_d = lim F_{[-1,1]} / n` at fixed `d`.
pub fn k_d(d: u32) -> Result<LogReal> {
    if d < 2 {
        return domain(format!("K_d needs d >= 2, got {d}"));
    }
    let d = f64::from(d);
    let ln = d * LN_2 + (0.5 * d - 1.0) * PI.ln() - d.ln() - 2.0 * (d - 1.0).ln()
        + ln_gamma_ratio(0.5 * (d * d - 2.0 * d + 2.0), 0.5 * (d * d - 2.0 * d + 1.0))
        + (d - 1.0) * ln_gamma_ratio(0.5 * (d + 1.0), 0.5 * d);
    Ok(LogReal::from_ln(ln))
}

/// `ln(1 - h_*²) = (3 ln d - 2 ln n)/(d - 1)`.
fn ln_gap_h_star(params: &PolytopeParams) -> Result<f64> {
    let d = f64::from(params.d());
    let x = (3.0 * d.ln() - 2.0 * params.ln_n()) / (d - 1.0);
    if x >= 0.0 {
        return domain(format!(
            "h_* needs n > d^(3/2), got ln n = {} at d = {}",
            params.ln_n(),
            params.d()
        ));
    }
    Ok(x)
}

/// `h_* = √(1 - d^{3/(d-1)} n^{-2/(d-1)})`.
pub fn h_star(params: &PolytopeParams) -> Result<f64> {
    Ok((-ln_gap_h_star(params)?.exp_m1()).sqrt())
}

/// A height together with `ln(1 - h²)`, which keeps full precision when
/// `h` rounds to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Endpoint {
    pub h: f64,
    pub ln_one_minus_h_sq: f64,
}

impl Endpoint {
    fn from_ln_gap(x: f64) -> Self {
        Self {
            h: (-x.exp_m1()).sqrt(),
            ln_one_minus_h_sq: x,
        }
    }

    fn from_height(h: f64) -> Self {
        Self {
            h,
            ln_one_minus_h_sq: (-h * h).ln_1p(),
        }
    }
}

/// `(h1, h2)` outside of which the expected number of facets vanishes when
/// `n ≫ d`:
///
/// `h1 = √(1 - (r1 d (ln(n/d))^{3/2} / n)^{2/(d-1)})`,
/// `h2 = √(1 - (r2 d / n)^{2(d+1)/(d-1)²})`.
pub fn range_endpoints(params: &PolytopeParams, r1: f64, r2: f64) -> Result<(Endpoint, Endpoint)> {
    if !(r1 > 0.0 && r2 > 0.0 && r1.is_finite() && r2.is_finite()) {
        return domain(format!("r1 and r2 must be positive, got r1={r1}, r2={r2}"));
    }
    let d = f64::from(params.d());
    let ln_n = params.ln_n();
    let ln_ratio = ln_n - d.ln();
    if !(ln_ratio > 0.0) {
        return domain("range endpoints need n > d");
    }
    let x1 = 2.0 / (d - 1.0) * (r1.ln() + d.ln() + 1.5 * ln_ratio.ln() - ln_n);
    if x1 >= 0.0 {
        return domain(format!(
            "h1 undefined: need r1 d (ln(n/d))^(3/2) < n (r1 = {r1}, d = {d}, ln n = {ln_n})"
        ));
    }
    let x2 = 2.0 * (d + 1.0) / ((d - 1.0) * (d - 1.0)) * (r2.ln() + d.ln() - ln_n);
    if x2 >= 0.0 {
        return domain(format!("h2 undefined: need r2 d < n (r2 = {r2}, d = {d}, ln n = {ln_n})"));
    }
    Ok((Endpoint::from_ln_gap(x1), Endpoint::from_ln_gap(x2)))
}

/// The limit a height of the form `√(1 - (d f(n,d)/n)^{2/(d-1)})` obeys in a
/// fast regime, expressed as a statistic of the height and its predicted value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightReduction {
    pub statistic: String,
    pub predicted: f64,
    uses_gap: bool,
}

impl HeightReduction {
    /// The statistic evaluated at a height.
    pub fn apply(&self, e: &Endpoint) -> f64 {
        if self.uses_gap {
            -e.ln_one_minus_h_sq
        } else {
            e.h
        }
    }
}

pub fn height_reduction(tag: &RegimeTag, params: &PolytopeParams) -> Result<HeightReduction> {
    let d = f64::from(params.d());
    let ln_n = params.ln_n();
    Ok(match *tag {
        RegimeTag::Subexponential => HeightReduction {
            statistic: "h".into(),
            predicted: (2.0 * (ln_n - d.ln()) / d).sqrt(),
            uses_gap: false,
        },
        RegimeTag::Exponential { rho } => HeightReduction {
            statistic: "h".into(),
            predicted: (-(-2.0 * rho).exp_m1()).sqrt(),
            uses_gap: false,
        },
        RegimeTag::SuperExponential | RegimeTag::SuperFactorial => HeightReduction {
            statistic: "-ln(1-h^2)".into(),
            predicted: 2.0 * ln_n / (d - 1.0),
            uses_gap: true,
        },
        _ => return domain(format!("height reductions need n ≫ d, not the {} regime", tag.name())),
    })
}

/// Leading-order `ln F_{[-1,1]}` in the given regime.
pub fn facet_count_asymptotic(spec: &RegimeSpec, input: &AsymptoticInput) -> Result<FacetCountAsymptotic> {
    input.check(spec)?;
    let d = f64::from(input.d);
    let tag = spec.tag;
    let (ln_facets, dropped) = match tag {
        RegimeTag::SublinearSqrt { .. } | RegimeTag::SublinearMid => {
            let p = input.params(&tag)?;
            let m = p.excess();
            (
                p.ln_binomial() + LN_2 - m * LN_2 + m * m / (PI * d),
                "O((n-d)^3/d^2) + o(1)",
            )
        }
        RegimeTag::Linear { rho } => (d * RhoFunctions::new(rho)?.growth_rate(), "o(d)"),
        RegimeTag::Subexponential => {
            let p = input.params(&tag)?;
            let ln_ratio = p.ln_n() - d.ln();
            (0.5 * (d - 1.0) * (4.0 * PI * ln_ratio).ln(), "((d-1)/2)·o(1)")
        }
        RegimeTag::Exponential { rho } => (
            0.5 * (d - 1.0) * (2.0 * PI * (2.0 * rho).exp_m1() * d).ln(),
            "((d-1)/2)·o(1)",
        ),
        RegimeTag::SuperExponential => {
            let p = input.params(&tag)?;
            let ln_h = 0.5 * (-ln_gap_h_star(p)?.exp_m1()).ln();
            (p.ln_n() + k_d(input.d)?.log_abs() + (d - 1.0) * ln_h, "o(1)")
        }
        RegimeTag::SuperFactorial => {
            let p = input.params(&tag)?;
            (p.ln_n() + k_d(input.d)?.log_abs(), "o(1)")
        }
    };
    Ok(FacetCountAsymptotic {
        ln_facets,
        dropped: dropped.into(),
    })
}

/// Limit law of a rescaled typical height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum LimitLaw {
    PointMass { value: f64 },
    Normal { mean: f64, sd: f64 },
    /// Density proportional to `t^{shape-1} e^{-t}`.
    Gamma { shape: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypicalHeightAsymptotic {
    /// The rescaled quantity that converges.
    pub statistic: String,
    pub limit: LimitLaw,
    /// Height implied by the limit at these parameters.
    pub location: Option<f64>,
    /// Scale of `H_typ` in this regime.
    pub scale: String,
}

/// `ln[n Γ(d/2) / (2√π Γ((d+1)/2))]`.
fn ln_gamma_statistic_scale(params: &PolytopeParams) -> f64 {
    crate::exact::gamma_statistic_ln_scale(params)
}

pub fn typheight_asymptotic(spec: &RegimeSpec, input: &AsymptoticInput) -> Result<TypicalHeightAsymptotic> {
    input.check(spec)?;
    let d = f64::from(input.d);
    let tag = spec.tag;
    let (statistic, limit, location, scale) = match tag {
        RegimeTag::SublinearSqrt { rho } => (
            "d H_typ".to_string(),
            LimitLaw::Normal {
                mean: rho * SQRT_2_OVER_PI,
                sd: 1.0,
            },
            Some(rho * SQRT_2_OVER_PI / d),
            "1/d",
        ),
        RegimeTag::SublinearMid => {
            let p = input.params(&tag)?;
            (
                "d^(3/2) H_typ / (n-d)".to_string(),
                LimitLaw::PointMass { value: SQRT_2_OVER_PI },
                Some(SQRT_2_OVER_PI * p.excess() / d.powf(1.5)),
                "(n-d)/d^(3/2)",
            )
        }
        RegimeTag::Linear { rho } => {
            let r = solve_r_rho(rho)?;
            (
                "√d H_typ".to_string(),
                LimitLaw::PointMass { value: r },
                Some(r / d.sqrt()),
                "1/√d",
            )
        }
        RegimeTag::Subexponential => {
            let p = input.params(&tag)?;
            (
                "√(d / ln(n/d)) H_typ".to_string(),
                LimitLaw::PointMass { value: 2f64.sqrt() },
                Some((2.0 * (p.ln_n() - d.ln()) / d).sqrt()),
                "√(ln(n/d)/d)",
            )
        }
        RegimeTag::Exponential { rho } => {
            let h = (-(-2.0 * rho).exp_m1()).sqrt();
            ("H_typ".to_string(), LimitLaw::PointMass { value: h }, Some(h), "1")
        }
        RegimeTag::SuperExponential => {
            let p = input.params(&tag)?;
            (
                "-(d-1) ln(1 - H_typ^2) / ln n".to_string(),
                LimitLaw::PointMass { value: 2.0 },
                Some((-(-2.0 * p.ln_n() / (d - 1.0)).exp_m1()).sqrt()),
                "1 - H_typ^2 ~ n^(-2/(d-1))",
            )
        }
        RegimeTag::SuperFactorial => {
            let p = input.params(&tag)?;
            // Y at the mean d - 1 of its limit
            let x = 2.0 * ((d - 1.0).ln() - ln_gamma_statistic_scale(p)) / (d - 1.0);
            (
                "n Γ(d/2) / (2√π Γ((d+1)/2)) (1 - H_typ^2)^((d-1)/2)".to_string(),
                LimitLaw::Gamma { shape: d - 1.0 },
                (x < 0.0).then(|| (-x.exp_m1()).sqrt()),
                "1 - H_typ^2 ~ n^(-2/(d-1))",
            )
        }
    };
    Ok(TypicalHeightAsymptotic {
        statistic,
        limit,
        location,
        scale: scale.into(),
    })
}

/// `c_d = ½ (2√π Γ((d+1)/2) / Γ(d/2))^{2/(d-1)}`, the fixed-dimension constant
/// in `d_H ~ c_d (ln n / n)^{2/(d-1)}`.
pub fn glasauer_schneider_constant(d: u32) -> Result<f64> {
    if d < 2 {
        return domain(format!("c_d needs d >= 2, got {d}"));
    }
    let d = f64::from(d);
    let ln_inner = LN_2 + 0.5 * PI.ln() + ln_gamma_ratio(0.5 * (d + 1.0), 0.5 * d);
    Ok(0.5 * (2.0 / (d - 1.0) * ln_inner).exp())
}

/// Geodesic radius of the empty cap `{x : <x, u> >= h}` cut off by a facet of
/// height `h`: `arccos h`, which is `arcsin √(1 - h²)` for `h >= 0`.
pub fn radius_from_height(h: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&h) {
        return domain(format!("height must lie in [-1,1], got {h}"));
    }
    Ok(2.0 * (0.5 * (1.0 - h)).sqrt().asin())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HausdorffApproximation {
    pub rule: String,
    pub value: f64,
}

/// Behaviour of `d_H(P, B^d) = 1 - H_min`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HausdorffAsymptotic {
    /// Limit in probability of `d_H`.
    pub limit: f64,
    /// Finite-`n` approximations valid in this regime.
    pub approximations: Vec<HausdorffApproximation>,
}

pub fn hausdorff_asymptotic(spec: &RegimeSpec, input: &AsymptoticInput) -> Result<HausdorffAsymptotic> {
    input.check(spec)?;
    let d = f64::from(input.d);
    let tag = spec.tag;
    let leading = |p: &PolytopeParams| HausdorffApproximation {
        rule: "2 n^(2/(d-1)) d_H -> 1 (ln ln n ≪ d)".into(),
        value: 0.5 * (-2.0 * p.ln_n() / (d - 1.0)).exp(),
    };
    let (limit, approximations) = match tag {
        RegimeTag::Exponential { rho } => {
            let q = (-2.0 * rho).exp();
            (q / (1.0 + (1.0 - q).sqrt()), Vec::new())
        }
        RegimeTag::SuperExponential => (0.0, vec![leading(input.params(&tag)?)]),
        RegimeTag::SuperFactorial => {
            let p = input.params(&tag)?;
            let c = glasauer_schneider_constant(input.d)?;
            let ln_n = p.ln_n();
            let mut approx = vec![HausdorffApproximation {
                rule: "d_H / (c_d (ln n / n)^(2/(d-1))) -> 1 (fixed d)".into(),
                value: c * (2.0 / (d - 1.0) * (ln_n.ln() - ln_n)).exp(),
            }];
            if spec.family != Some(GrowthFamily::FixedDimension) {
                approx.push(leading(p));
            }
            (0.0, approx)
        }
        _ => (1.0, Vec::new()),
    };
    Ok(HausdorffAsymptotic {
        limit,
        approximations,
    })
}

/// Wendel's `P(0 ∉ conv(X_1..X_n)) = 2^{-n+1} Σ_{k<d} C(n-1, k)` for `n`
/// symmetric points in general position in `R^d`.
pub fn wendel_prob(n: u64, d: u32) -> Result<f64> {
    if n == 0 || d == 0 {
        return domain(format!("Wendel probability needs n, d >= 1, got n={n}, d={d}"));
    }
    let m = (n - 1) as f64;
    let top = u64::from(d - 1).min(n - 1);
    let ln_sum = (0..=top)
        .map(|k| ln_binomial(m, k as f64))
        .fold(f64::NEG_INFINITY, log_add_exp);
    Ok((ln_sum - m * LN_2).exp().min(1.0))
}

/// Everything the asymptotic theory says at one `(n, d)` in one regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticEstimate {
    pub regime: RegimeSpec,
    pub input: AsymptoticInput,
    pub facet_count: FacetCountAsymptotic,
    pub typical_height: TypicalHeightAsymptotic,
    /// Heights outside of which the expected facet count vanishes.
    pub range: Option<(Endpoint, Endpoint)>,
    pub hausdorff: HausdorffAsymptotic,
    pub rho_functions: Option<RhoFunctions>,
    pub k_d: Option<LogReal>,
    pub h_star: Option<f64>,
    pub c_d: Option<f64>,
}

/// Evaluates every formula that applies to the regime; the fast-regime
/// range uses `(r1, r2)`.
pub fn estimate(spec: &RegimeSpec, input: &AsymptoticInput, r1: f64, r2: f64) -> Result<AsymptoticEstimate> {
    let facet_count = facet_count_asymptotic(spec, input)?;
    let typical_height = typheight_asymptotic(spec, input)?;
    let hausdorff = hausdorff_asymptotic(spec, input)?;
    let tag = spec.tag;
    let d = f64::from(input.d);

    let rho_functions = match tag {
        RegimeTag::Linear { rho } => Some(RhoFunctions::new(rho)?),
        _ => None,
    };
    let range = match (&tag, &input.params, &rho_functions) {
        (RegimeTag::Linear { .. }, _, Some(rf)) => Some((
            Endpoint::from_height(rf.r_ell / d.sqrt()),
            Endpoint::from_height(rf.r_u / d.sqrt()),
        )),
        (t, Some(p), _) if !t.is_slow() => range_endpoints(p, r1, r2).ok(),
        _ => None,
    };
    let fast_large = matches!(tag, RegimeTag::SuperExponential | RegimeTag::SuperFactorial);
    let k = if fast_large { Some(k_d(input.d)?) } else { None };
    let hs = match (&input.params, fast_large) {
        (Some(p), true) => h_star(p).ok(),
        _ => None,
    };
    let c = if tag == RegimeTag::SuperFactorial {
        Some(glasauer_schneider_constant(input.d)?)
    } else {
        None
    };
    Ok(AsymptoticEstimate {
        regime: *spec,
        input: *input,
        facet_count,
        typical_height,
        range,
        hausdorff,
        rho_functions,
        k_d: k,
        h_star: hs,
        c_d: c,
    })
}
