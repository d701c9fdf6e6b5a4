use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exact::PolytopeParams;

/// Symbolic growth of `n` against `d` as `d -> ∞` (or `n -> ∞` at fixed `d`).
///
/// A constant left as `None` is "unspecified"; it matters only where the
/// regime depends on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GrowthFamily {
    /// `n - d = c d^a`
    ExcessPower { c: Option<f64>, a: f64 },
    /// `n - d = ρ d`
    ExcessLinear { rho: f64 },
    /// `n = c d^a`
    PolyPower { c: Option<f64>, a: f64 },
    /// `ln n = ρ d`
    LogLinear { rho: f64 },
    /// `ln n = c d^a`
    LogPower { c: Option<f64>, a: f64 },
    /// `ln n = c d (ln d)^b`
    LogPolylog { c: Option<f64>, b: f64 },
    /// `d` fixed, `n -> ∞`
    FixedDimension,
}

/// Regime label derived from a growth family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum RegimeTag {
    /// `(n - d)/√d -> ρ ∈ [0, ∞)`
    SublinearSqrt { rho: f64 },
    /// `√d ≪ n - d ≪ d`
    SublinearMid,
    /// `(n - d)/d -> ρ`
    Linear { rho: f64 },
    /// `ln n ≪ d ≪ n`
    Subexponential,
    /// `ln n / d -> ρ`
    Exponential { rho: f64 },
    /// `d ≪ ln n`, not necessarily `≫ d ln d`
    SuperExponential,
    /// `ln n ≫ d ln d`, including fixed `d`
    SuperFactorial,
}

impl RegimeTag {
    pub fn name(&self) -> &'static str {
        match self {
            RegimeTag::SublinearSqrt { .. } => "sublinear-sqrt",
            RegimeTag::SublinearMid => "sublinear-mid",
            RegimeTag::Linear { .. } => "linear",
            RegimeTag::Subexponential => "subexponential",
            RegimeTag::Exponential { .. } => "exponential",
            RegimeTag::SuperExponential => "superexponential",
            RegimeTag::SuperFactorial => "superfactorial",
        }
    }

    pub fn rho(&self) -> Option<f64> {
        match *self {
            RegimeTag::SublinearSqrt { rho }
            | RegimeTag::Linear { rho }
            | RegimeTag::Exponential { rho } => Some(rho),
            _ => None,
        }
    }

    fn validate(self) -> Result<Self> {
        match self {
            RegimeTag::SublinearSqrt { rho } if !(rho >= 0.0 && rho.is_finite()) => {
                domain(format!("sublinear-sqrt needs ρ in [0, ∞), got {rho}"))
            }
            RegimeTag::Linear { rho } | RegimeTag::Exponential { rho }
                if !(rho > 0.0 && rho.is_finite()) =>
            {
                domain(format!("{} needs ρ in (0, ∞), got {rho}", self.name()))
            }
            tag => Ok(tag),
        }
    }

    /// `n` and `d` grow together with `n - d = O(d)`.
    pub fn is_slow(&self) -> bool {
        matches!(
            self,
            RegimeTag::SublinearSqrt { .. } | RegimeTag::SublinearMid | RegimeTag::Linear { .. }
        )
    }
}

/// A regime, optionally with the family it was classified from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeSpec {
    pub family: Option<GrowthFamily>,
    pub tag: RegimeTag,
}

impl RegimeSpec {
    /// A spec from an explicit tag, without a family.
    pub fn from_tag(tag: RegimeTag) -> Result<Self> {
        Ok(Self {
            family: None,
            tag: tag.validate()?,
        })
    }

    /// Checks that concrete parameters are plausible for this regime.
    ///
    /// With a family, `n` must be the family's value at `d` up to rounding to
    /// an integer (any `n` for a fixed dimension), and nothing else is
    /// checked. With a bare tag only coarse conditions are checked: the
    /// slow regimes need `n < 2d` (sublinear) or `(n-d)/d` within a factor 2
    /// of `ρ` (linear); the fast ones need `n > 2d`, plus `ln n < d`
    /// (subexponential), `ln n / d` within a factor 2 of `ρ` (exponential),
    /// `ln n > d` (superexponential) or `ln n > max(d, d ln d)` (superfactorial).
    pub fn check_params(&self, params: &PolytopeParams) -> Result<()> {
        let d = f64::from(params.d());
        let ln_n = params.ln_n();
        if let Some(family) = self.family {
            if let Some(expect) = family.ln_point_count(params.d())? {
                // n ± 1 from rounding
                let slack = 1e-9 * expect.abs().max(1.0) + (-ln_n).exp().min(1.0);
                let follows = match family {
                    GrowthFamily::ExcessPower { .. } | GrowthFamily::ExcessLinear { .. } => {
                        let target = family.excess(params.d())?;
                        (params.excess() - target).abs() <= 1.0 + 1e-9 * target
                    }
                    _ => (ln_n - expect).abs() <= slack,
                };
                if !follows {
                    return Err(Error::RegimeMismatch(format!(
                        "ln n = {ln_n} does not follow {family:?} at d = {d}"
                    )));
                }
            }
            // a fixed dimension admits every n
            return Ok(());
        }
        let excess_ratio = params.excess() / d;
        let within_factor_two = |x: f64, rho: f64| x >= 0.5 * rho && x <= 2.0 * rho;
        let ok = match self.tag {
            RegimeTag::SublinearSqrt { .. } | RegimeTag::SublinearMid => excess_ratio < 1.0,
            RegimeTag::Linear { rho } => within_factor_two(excess_ratio, rho),
            RegimeTag::Subexponential => excess_ratio > 1.0 && ln_n < d,
            RegimeTag::Exponential { rho } => excess_ratio > 1.0 && within_factor_two(ln_n / d, rho),
            RegimeTag::SuperExponential => excess_ratio > 1.0 && ln_n > d,
            RegimeTag::SuperFactorial => excess_ratio > 1.0 && ln_n > d.max(d * d.ln()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::RegimeMismatch(format!(
                "n = exp({ln_n}), d = {d} is implausible for the {} regime",
                self.tag.name()
            )))
        }
    }
}

impl GrowthFamily {
    fn constant(c: Option<f64>, what: &str) -> Result<f64> {
        match c {
            Some(c) if c > 0.0 && c.is_finite() => Ok(c),
            Some(c) => domain(format!("{what}: constant must be positive, got {c}")),
            None => domain(format!("{what}: constant is unspecified")),
        }
    }

    /// `n - d` at dimension `d` for the excess families.
    pub fn excess(&self, d: u32) -> Result<f64> {
        let d = f64::from(d);
        match *self {
            GrowthFamily::ExcessPower { c, a } => Ok(Self::constant(c, "n - d = c d^a")? * d.powf(a)),
            GrowthFamily::ExcessLinear { rho } => Ok(rho * d),
            _ => domain("excess is defined only for the n - d families"),
        }
    }

    /// `ln n` at dimension `d`; `None` when the family fixes no value
    /// (fixed dimension).
    pub fn ln_point_count(&self, d: u32) -> Result<Option<f64>> {
        let df = f64::from(d);
        let ln_n = match *self {
            GrowthFamily::ExcessPower { .. } | GrowthFamily::ExcessLinear { .. } => {
                (df + self.excess(d)?).ln()
            }
            GrowthFamily::PolyPower { c, a } => Self::constant(c, "n = c d^a")?.ln() + a * df.ln(),
            GrowthFamily::LogLinear { rho } => rho * df,
            GrowthFamily::LogPower { c, a } => Self::constant(c, "ln n = c d^a")? * df.powf(a),
            GrowthFamily::LogPolylog { c, b } => {
                Self::constant(c, "ln n = c d (ln d)^b")? * df * df.ln().powf(b)
            }
            GrowthFamily::FixedDimension => return Ok(None),
        };
        Ok(Some(ln_n))
    }

    /// Parameters following the family at dimension `d`, with `n` rounded up
    /// to an integer when it fits in `u64`.
    pub fn params_at(&self, d: u32) -> Result<PolytopeParams> {
        let ln_n = self.ln_point_count(d)?.ok_or_else(|| {
            Error::Domain("a fixed-dimension family does not determine n".into())
        })?;
        if ln_n < 43.0 {
            let n = match self {
                GrowthFamily::ExcessPower { .. } | GrowthFamily::ExcessLinear { .. } => {
                    u64::from(d) + self.excess(d)?.ceil() as u64
                }
                _ => ln_n.exp().ceil() as u64,
            };
            PolytopeParams::new(n, d)
        } else {
            PolytopeParams::from_ln_n(ln_n, d)
        }
    }
}

/// Regime of a growth family.
pub fn classify(family: GrowthFamily) -> Result<RegimeSpec> {
    let ambiguous = |msg: String| Err(Error::AmbiguousRegime(msg));
    let tag = match family {
        GrowthFamily::ExcessPower { c, a } => {
            if let Some(c) = c {
                if !(c > 0.0 && c.is_finite()) {
                    return domain(format!("n - d = c d^a needs c > 0, got {c}"));
                }
            }
            if !(a.is_finite() && a >= 0.0) {
                return domain(format!("n - d = c d^a needs a >= 0, got {a}"));
            }
            if a < 0.5 {
                RegimeTag::SublinearSqrt { rho: 0.0 }
            } else if a == 0.5 {
                match c {
                    Some(c) => RegimeTag::SublinearSqrt { rho: c },
                    None => return ambiguous("n - d = c √d with c unspecified".into()),
                }
            } else if a < 1.0 {
                RegimeTag::SublinearMid
            } else if a == 1.0 {
                match c {
                    Some(c) => RegimeTag::Linear { rho: c },
                    None => return ambiguous("n - d = c d with c unspecified".into()),
                }
            } else {
                RegimeTag::Subexponential
            }
        }
        GrowthFamily::ExcessLinear { rho } => RegimeTag::Linear { rho },
        GrowthFamily::PolyPower { c, a } => {
            if !(a.is_finite() && a >= 1.0) {
                return domain(format!("n = c d^a needs a >= 1 for n > d, got {a}"));
            }
            if a > 1.0 {
                RegimeTag::Subexponential
            } else {
                match c {
                    Some(c) if c > 1.0 => RegimeTag::Linear { rho: c - 1.0 },
                    Some(c) => return domain(format!("n = c d needs c > 1, got {c}")),
                    None => return ambiguous("n = c d with c unspecified".into()),
                }
            }
        }
        GrowthFamily::LogLinear { rho } => RegimeTag::Exponential { rho },
        GrowthFamily::LogPower { c, a } => {
            if !(a.is_finite() && a > 0.0) {
                return domain(format!("ln n = c d^a needs a > 0, got {a}"));
            }
            if a < 1.0 {
                RegimeTag::Subexponential
            } else if a == 1.0 {
                match c {
                    Some(c) => RegimeTag::Exponential { rho: c },
                    None => return ambiguous("ln n = c d with c unspecified".into()),
                }
            } else {
                RegimeTag::SuperFactorial
            }
        }
        GrowthFamily::LogPolylog { c, b } => {
            if !(b.is_finite() && b >= 0.0) {
                return domain(format!("ln n = c d (ln d)^b needs b >= 0, got {b}"));
            }
            if b == 0.0 {
                match c {
                    Some(c) => RegimeTag::Exponential { rho: c },
                    None => return ambiguous("ln n = c d with c unspecified".into()),
                }
            } else if b < 1.0 {
                RegimeTag::SuperExponential
            } else if b > 1.0 {
                RegimeTag::SuperFactorial
            } else {
                // n^{1/d} / d = d^{c-1}
                match c {
                    Some(c) if c > 1.0 => RegimeTag::SuperFactorial,
                    Some(c) if c < 1.0 => RegimeTag::SuperExponential,
                    Some(_) => return ambiguous("ln n = d ln d sits on the superfactorial boundary".into()),
                    None => return ambiguous("ln n = c d ln d with c unspecified".into()),
                }
            }
        }
        GrowthFamily::FixedDimension => RegimeTag::SuperFactorial,
    };
    Ok(RegimeSpec {
        family: Some(family),
        tag: tag.validate()?,
    })
}
