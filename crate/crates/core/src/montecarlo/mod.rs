//! Monte Carlo ground truth.
//!
//! Each replicate samples `n` uniform points on `S^{d-1}` and enumerates
//! the facets of their hull by brute force over all `d`-subsets: a subset
//! spans a facet when every other point lies strictly on one side of its
//! affine hull.

mod census;
mod ensemble;
mod ks;
mod sample;

pub use census::{
    facet_census, Census, CensusDiagnostics, CensusSummary, FacetRecord, CONDITION_LIMIT,
    HALF_SPACE_TOL,
};
pub use ensemble::{
    estimate, estimate_with_records, write_facet_csv, EnsembleDiagnostics, EnsembleReport,
    EnsembleSpec, MeanEstimate, ReplicateFacets, DEFAULT_SUBSET_CAP, MAX_RESAMPLES,
};
pub use ks::{ks_distance, ks_distance_to_law, KsDistance};
pub use sample::{replicate_rng, sample_sphere};
