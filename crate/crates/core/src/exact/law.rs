use serde::{Deserialize, Serialize};

use super::integral::{ln_segments_integral, segments_for, upper_segments_below_sine, Segment};
use super::{HeightInterval, PolytopeParams};
use crate::error::{domain, Result};
use crate::numerics::{ln_gamma_ratio, AccuracyConfig, LogReal};

const HALF_LN_PI: f64 = 0.572_364_942_924_700_1;

/// Law of the typical facet height, `P(H_typ <= h) = I_{[-1,h]} / I_{[-1,1]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypicalHeightLaw {
    params: PolytopeParams,
    normalizer: LogReal,
    /// `I_{[-1,0]} / I_{[-1,1]}`
    negative_mass: f64,
    #[serde(skip, default = "default_cfg")]
    cfg: AccuracyConfig,
}

fn default_cfg() -> AccuracyConfig {
    AccuracyConfig::QUADRATURE
}

impl TypicalHeightLaw {
    pub fn new(params: PolytopeParams) -> Result<Self> {
        Self::with_config(params, AccuracyConfig::QUADRATURE)
    }

    pub fn with_config(params: PolytopeParams, cfg: AccuracyConfig) -> Result<Self> {
        let lower = ln_segments_integral(&params, &segments_for(&HeightInterval::new(-1.0, 0.0)?), &cfg)?;
        let upper = ln_segments_integral(&params, &segments_for(&HeightInterval::new(0.0, 1.0)?), &cfg)?;
        let normalizer = lower + upper;
        Ok(Self {
            params,
            normalizer,
            negative_mass: (lower / normalizer).to_f64(),
            cfg,
        })
    }

    pub fn params(&self) -> &PolytopeParams {
        &self.params
    }

    /// `I_{[-1,1]}`.
    pub fn normalizer(&self) -> LogReal {
        self.normalizer
    }

    /// `P(H_typ < 0)`.
    pub fn negative_mass(&self) -> f64 {
        self.negative_mass
    }

    fn mass(&self, segments: &[Segment]) -> Result<f64> {
        Ok((ln_segments_integral(&self.params, segments, &self.cfg)? / self.normalizer).to_f64())
    }

    /// `P(H_typ <= h)`. Mass is integrated from whichever pole is on the same
    /// side of zero as `h`.
    pub fn cdf(&self, h: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&h) {
            return domain(format!("height must lie in [-1,1], got {h}"));
        }
        let p = if h <= 0.0 {
            self.mass(&segments_for(&HeightInterval::new(-1.0, h)?))?
        } else {
            1.0 - self.mass(&segments_for(&HeightInterval::new(h, 1.0)?))?
        };
        Ok(p.clamp(0.0, 1.0))
    }

    /// Inverse of [`cdf`](Self::cdf) by bisection to absolute tolerance `1e-10`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("quantile level must lie in (0,1), got {p}"));
        }
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Law of `Y = n Γ(d/2) / (2√π Γ((d+1)/2)) · (1 - H_typ²)^{(d-1)/2}`
    /// restricted to `H_typ >= 0`.
    pub fn gamma_statistic_cdf(&self, y: f64) -> Result<GammaStatisticCdf> {
        if !(y > 0.0) {
            return domain(format!("gamma statistic argument must be positive, got {y}"));
        }
        let d = f64::from(self.params.d());
        // Y <= y  <=>  sin ψ <= s = (y / scale)^{1/(d-1)} on the upper half
        let ln_s = (y.ln() - gamma_statistic_ln_scale(&self.params)) / (d - 1.0);
        Ok(GammaStatisticCdf {
            cdf: self.mass(&upper_segments_below_sine(ln_s))?.clamp(0.0, 1.0),
            negative_height_mass: self.negative_mass,
        })
    }
}

/// `P(Y <= y)` together with the excluded mass `P(H_typ < 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaStatisticCdf {
    pub cdf: f64,
    pub negative_height_mass: f64,
}

/// `ln[n Γ(d/2) / (2√π Γ((d+1)/2))]`.
pub fn gamma_statistic_ln_scale(params: &PolytopeParams) -> f64 {
    let d = f64::from(params.d());
    params.ln_n() + ln_gamma_ratio(0.5 * d, 0.5 * (d + 1.0)) - std::f64::consts::LN_2 - HALF_LN_PI
}

pub fn typheight_cdf(law: &TypicalHeightLaw, h: f64) -> Result<f64> {
    law.cdf(h)
}

pub fn typheight_quantile(law: &TypicalHeightLaw, p: f64) -> Result<f64> {
    law.quantile(p)
}

pub fn gamma_statistic_cdf(params: &PolytopeParams, y: f64) -> Result<GammaStatisticCdf> {
    TypicalHeightLaw::new(*params)?.gamma_statistic_cdf(y)
}
