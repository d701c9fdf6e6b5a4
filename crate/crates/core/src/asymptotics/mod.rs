//! Leading-order asymptotics of facet counts and heights.
//!
//! Regimes are assigned to symbolic growth families, never to a single
//! `(n, d)`: a finite pair belongs to every regime and to none. Formulas drop
//! all `o(·)` corrections and report the order of what was dropped.

mod formulas;
mod laplace;
mod regime;
mod rho;

pub use formulas::{
    estimate, facet_count_asymptotic, glasauer_schneider_constant, h_star, hausdorff_asymptotic,
    height_reduction, k_d, radius_from_height, range_endpoints, typheight_asymptotic, wendel_prob,
    AsymptoticEstimate, AsymptoticInput, Endpoint, FacetCountAsymptotic, HausdorffApproximation,
    HausdorffAsymptotic, HeightReduction, LimitLaw, TypicalHeightAsymptotic, DEFAULT_R1, DEFAULT_R2,
};
pub use laplace::{laplace_approx, LaplaceBoundary};
pub use regime::{classify, GrowthFamily, RegimeSpec, RegimeTag};
pub use rho::{
    f_rho, f_rho_prime, f_rho_second, g_rho, negative_height_threshold, solve_r_rho,
    solve_range_roots, RhoFunctions,
};
