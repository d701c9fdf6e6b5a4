//! Facet statistics of random polytopes inscribed in the unit sphere.
//!
//! The convex hull of `n` i.i.d. uniform points on `S^{d-1}` is a simplicial
//! polytope. This crate evaluates the expected number of its facets and the
//! law of the typical facet height three ways:
//!
//! - [`exact`]: log-domain quadrature of the facet-probability integral,
//!   valid for any `2 <= d < n`;
//! - [`asymptotics`]: leading-order formulas for each growth regime of
//!   `n` against `d`, together with the rate functions and their roots;
//! - [`montecarlo`]: brute-force facet censuses of sampled point sets.
//!
//! [`numerics`] holds the special functions and the log-scale scalar
//! [`LogReal`] that everything else is built on.

pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod montecarlo;
pub mod numerics;

pub use error::{Error, Result};
pub use exact::{HeightInterval, PolytopeParams, TypicalHeightLaw};
pub use numerics::{AccuracyConfig, LogReal};
