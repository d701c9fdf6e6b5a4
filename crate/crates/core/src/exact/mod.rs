//! Quadrature evaluation of the facet-count integral
//!
//! `F_{[h1,h2]} = C(n,d) · 2 c_{(d²-2d-1)/2} · I_{[h1,h2]}`, with
//! `I_{[h1,h2]} = ∫_{h1}^{h2} (1-h²)^{(d²-2d-1)/2} G(h)^{n-d} dh`,
//!
//! and of the typical-height law `I_{[-1,h]} / I_{[-1,1]}` derived from it.

mod integral;
mod law;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numerics::{ln_binomial, ln_gamma_ratio};

pub use integral::{expected_facets, expected_facets_with, integral_i, integral_i_with};
pub use law::{
    gamma_statistic_cdf, gamma_statistic_ln_scale, typheight_cdf, typheight_quantile,
    GammaStatisticCdf, TypicalHeightLaw,
};

/// The number of sample points, either exactly or through its natural log
/// when it is beyond integer range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointCount {
    Exact(u64),
    Log(f64),
}

/// `n` points on `S^{d-1}`, `n > d >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolytopeParams {
    n: PointCount,
    d: u32,
}

impl PolytopeParams {
    pub fn new(n: u64, d: u32) -> Result<Self> {
        if d < 2 {
            return domain(format!("dimension must be at least 2, got d={d}"));
        }
        if n <= u64::from(d) {
            return domain(format!("need n > d, got n={n}, d={d}"));
        }
        Ok(Self {
            n: PointCount::Exact(n),
            d,
        })
    }

    /// Parameters with `n = exp(ln_n)`, for point counts past `u64`.
    pub fn from_ln_n(ln_n: f64, d: u32) -> Result<Self> {
        if d < 2 {
            return domain(format!("dimension must be at least 2, got d={d}"));
        }
        if !ln_n.is_finite() || ln_n <= f64::from(d).ln() {
            return domain(format!("need n > d, got ln n={ln_n}, d={d}"));
        }
        Ok(Self {
            n: PointCount::Log(ln_n),
            d,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn count(&self) -> PointCount {
        self.n
    }

    pub fn ln_n(&self) -> f64 {
        match self.n {
            PointCount::Exact(n) => (n as f64).ln(),
            PointCount::Log(l) => l,
        }
    }

    /// `n` as a float; `inf` when it overflows.
    pub fn n_f64(&self) -> f64 {
        match self.n {
            PointCount::Exact(n) => n as f64,
            PointCount::Log(l) => l.exp(),
        }
    }

    /// `n - d` as a float; `inf` when it overflows.
    pub fn excess(&self) -> f64 {
        match self.n {
            PointCount::Exact(n) => (n - u64::from(self.d)) as f64,
            PointCount::Log(_) => self.ln_excess().exp(),
        }
    }

    /// `ln(n - d)`.
    pub fn ln_excess(&self) -> f64 {
        match self.n {
            PointCount::Exact(n) => ((n - u64::from(self.d)) as f64).ln(),
            PointCount::Log(l) => l + (-f64::from(self.d) * (-l).exp()).ln_1p(),
        }
    }

    /// `ln C(n, d)`.
    pub fn ln_binomial(&self) -> f64 {
        let d = f64::from(self.d);
        match self.n {
            PointCount::Exact(n) => ln_binomial(n as f64, d),
            PointCount::Log(l) => {
                let inv_n = (-l).exp();
                let falling: f64 = (0..self.d)
                    .map(|k| l + (-f64::from(k) * inv_n).ln_1p())
                    .sum();
                falling - ln_gamma_ratio(d + 1.0, 1.0)
            }
        }
    }
}

/// A closed height window `[h1, h2] ⊆ [-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightInterval {
    h1: f64,
    h2: f64,
}

impl HeightInterval {
    pub const FULL: HeightInterval = HeightInterval { h1: -1.0, h2: 1.0 };

    pub fn new(h1: f64, h2: f64) -> Result<Self> {
        if !(-1.0 <= h1 && h1 <= h2 && h2 <= 1.0) {
            return domain(format!(
                "height window must satisfy -1 <= h1 <= h2 <= 1, got [{h1}, {h2}]"
            ));
        }
        Ok(Self { h1, h2 })
    }

    pub fn h1(&self) -> f64 {
        self.h1
    }

    pub fn h2(&self) -> f64 {
        self.h2
    }
}

impl Default for HeightInterval {
    fn default() -> Self {
        Self::FULL
    }
}
