use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::census::{census_impl, CensusDiagnostics, FacetRecord};
use super::sample::{replicate_rng, sample_with};
use crate::error::{Error, Result};
use crate::exact::{PointCount, PolytopeParams};

pub const DEFAULT_SUBSET_CAP: u64 = 1_000_000;
/// Consecutive degenerate draws tolerated in one replicate.
pub const MAX_RESAMPLES: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub params: PolytopeParams,
    pub replicates: u64,
    pub seed: u64,
    pub subset_cap: u64,
}

impl EnsembleSpec {
    pub fn new(n: u64, d: u32, replicates: u64, seed: u64) -> Result<Self> {
        let spec = Self {
            params: PolytopeParams::new(n, d)?,
            replicates,
            seed,
            subset_cap: DEFAULT_SUBSET_CAP,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_subset_cap(mut self, cap: u64) -> Result<Self> {
        self.subset_cap = cap;
        self.validate()?;
        Ok(self)
    }

    pub fn n(&self) -> Result<usize> {
        match self.params.count() {
            PointCount::Exact(n) => usize::try_from(n)
                .map_err(|_| Error::InvalidEnsemble(format!("n={n} does not fit in memory"))),
            PointCount::Log(l) => Err(Error::InvalidEnsemble(format!(
                "simulation needs an explicit point count, got ln n={l}"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n()?;
        if self.replicates == 0 {
            return Err(Error::InvalidEnsemble("need at least one replicate".into()));
        }
        let d = self.params.d() as usize;
        match subset_count(n, d) {
            Some(c) if c <= u128::from(self.subset_cap) => Ok(()),
            c => Err(Error::InvalidEnsemble(format!(
                "C({n},{d}) = {} subsets exceeds the cap of {}",
                c.map_or_else(|| "more than 2^128".to_string(), |c| c.to_string()),
                self.subset_cap
            ))),
        }
    }
}

/// `C(n,k)`, or `None` on overflow.
fn subset_count(n: usize, k: usize) -> Option<u128> {
    let k = k.min(n - k);
    (0..k).try_fold(1u128, |acc, i| {
        Some(acc.checked_mul((n - i) as u128)? / (i as u128 + 1))
    })
}

/// A sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
}

impl MeanEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let m = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / m;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            std_error: (var / m).sqrt(),
        }
    }

    /// Ratio `Σ num / Σ den` with its delta-method standard error.
    pub fn ratio(num: &[f64], den: &[f64]) -> Self {
        let m = num.len() as f64;
        let den_mean = den.iter().sum::<f64>() / m;
        let r = num.iter().sum::<f64>() / den.iter().sum::<f64>();
        let resid = num
            .iter()
            .zip(den)
            .map(|(a, b)| (a - r * b).powi(2))
            .sum::<f64>();
        let var = if num.len() > 1 { resid / (m - 1.0) } else { 0.0 };
        Self {
            mean: r,
            std_error: (var / m).sqrt() / den_mean,
        }
    }

    /// `|mean - target|` in units of the standard error. A deterministic
    /// estimate (zero error) scores 0 when it hits the target to within
    /// `1e-9` relative and infinity otherwise.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.mean - target).abs();
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff <= 1e-9 * target.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleDiagnostics {
    pub subsets_examined: u64,
    pub ill_conditioned_skips: u64,
    /// Draws discarded because a point tied with a candidate hyperplane.
    pub resampled_replicates: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub spec: EnsembleSpec,
    pub facet_count: MeanEstimate,
    pub origin_inside: MeanEstimate,
    /// Share of facets with negative height, as a ratio of expectations.
    pub negative_height_fraction: MeanEstimate,
    /// `1 - H_min` averaged over replicates.
    pub hausdorff_distance: MeanEstimate,
    pub facet_counts: Vec<u64>,
    /// Facet heights of all replicates in replicate order; their empirical
    /// law estimates the typical-height law.
    pub heights: Vec<f64>,
    pub min_heights: Vec<f64>,
    pub diagnostics: EnsembleDiagnostics,
}

/// The facets found in one replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateFacets {
    pub replicate: u64,
    pub facets: Vec<FacetRecord>,
}

struct Replicate {
    heights: Vec<f64>,
    min_height: f64,
    facets: Vec<FacetRecord>,
    diagnostics: CensusDiagnostics,
    resamples: u64,
}

fn run_replicate(spec: &EnsembleSpec, n: usize, index: u64, keep: bool) -> Result<Replicate> {
    let d = spec.params.d() as usize;
    let mut rng = replicate_rng(spec.seed, index);
    let mut skipped = CensusDiagnostics::default();
    for resamples in 0..=MAX_RESAMPLES {
        let points = sample_with(&mut rng, n, d);
        let census = census_impl(&points, keep);
        skipped.subsets += census.diagnostics.subsets;
        skipped.ill_conditioned += census.diagnostics.ill_conditioned;
        if census.diagnostics.is_degenerate() {
            continue;
        }
        return Ok(Replicate {
            heights: census.summary.heights,
            min_height: census.summary.min_height,
            facets: census.facets,
            diagnostics: skipped,
            resamples,
        });
    }
    Err(Error::Internal(format!(
        "replicate {index} stayed degenerate after {MAX_RESAMPLES} resamples"
    )))
}

/// Runs the ensemble and aggregates it.
pub fn estimate(spec: &EnsembleSpec) -> Result<EnsembleReport> {
    Ok(run(spec, false)?.0)
}

/// Like [`estimate`], also returning every facet record.
pub fn estimate_with_records(spec: &EnsembleSpec) -> Result<(EnsembleReport, Vec<ReplicateFacets>)> {
    run(spec, true)
}

fn run(spec: &EnsembleSpec, keep: bool) -> Result<(EnsembleReport, Vec<ReplicateFacets>)> {
    spec.validate()?;
    let n = spec.n()?;
    let reps: Vec<Replicate> = (0..spec.replicates)
        .into_par_iter()
        .map(|r| run_replicate(spec, n, r, keep))
        .collect::<Result<_>>()?;

    let mut diagnostics = EnsembleDiagnostics::default();
    let mut heights = Vec::new();
    let mut counts = Vec::with_capacity(reps.len());
    let mut negatives = Vec::with_capacity(reps.len());
    let mut min_heights = Vec::with_capacity(reps.len());
    for r in &reps {
        diagnostics.subsets_examined += r.diagnostics.subsets;
        diagnostics.ill_conditioned_skips += r.diagnostics.ill_conditioned;
        diagnostics.resampled_replicates += r.resamples;
        heights.extend_from_slice(&r.heights);
        counts.push(r.heights.len() as f64);
        negatives.push(r.heights.iter().filter(|&&h| h < 0.0).count() as f64);
        min_heights.push(r.min_height);
    }
    let inside: Vec<f64> = min_heights.iter().map(|&h| f64::from(u8::from(h > 0.0))).collect();
    let gaps: Vec<f64> = min_heights.iter().map(|h| 1.0 - h).collect();
    let report = EnsembleReport {
        spec: *spec,
        facet_count: MeanEstimate::from_samples(&counts),
        origin_inside: MeanEstimate::from_samples(&inside),
        negative_height_fraction: MeanEstimate::ratio(&negatives, &counts),
        hausdorff_distance: MeanEstimate::from_samples(&gaps),
        facet_counts: reps.iter().map(|r| r.heights.len() as u64).collect(),
        heights,
        min_heights,
        diagnostics,
    };
    let records = reps
        .into_iter()
        .enumerate()
        .filter(|_| keep)
        .map(|(i, r)| ReplicateFacets {
            replicate: i as u64,
            facets: r.facets,
        })
        .collect();
    Ok((report, records))
}

/// Writes one CSV row per facet: `replicate, v0..v{d-1}, height, u0..u{d-1}`.
pub fn write_facet_csv<W: Write>(out: W, d: usize, records: &[ReplicateFacets]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["replicate".to_string()];
    header.extend((0..d).map(|k| format!("v{k}")));
    header.push("height".into());
    header.extend((0..d).map(|k| format!("u{k}")));
    w.write_record(&header)?;
    for rep in records {
        for f in &rep.facets {
            let mut row = vec![rep.replicate.to_string()];
            row.extend(f.vertex_indices.iter().map(usize::to_string));
            row.push(f.height.to_string());
            row.extend(f.normal.iter().map(f64::to_string));
            w.write_record(&row)?;
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_guards() {
        assert!(EnsembleSpec::new(12, 4, 0, 1).is_err());
        assert!(EnsembleSpec::new(40, 20, 1, 1).is_err());
        let huge = EnsembleSpec {
            params: PolytopeParams::from_ln_n(50.0, 3).unwrap(),
            replicates: 1,
            seed: 0,
            subset_cap: u64::MAX,
        };
        assert!(huge.validate().is_err());
        let s = EnsembleSpec::new(10, 3, 5, 1).unwrap();
        assert!(s.with_subset_cap(119).is_err());
        assert!(s.with_subset_cap(120).is_ok());
        assert_eq!(subset_count(10, 3), Some(120));
        assert_eq!(subset_count(200, 100), None);
    }

    #[test]
    fn z_score_of_deterministic_estimate() {
        let exact = MeanEstimate::from_samples(&[26.0, 26.0]);
        assert_eq!(exact.z_score(26.000_000_000_000_01), 0.0);
        assert_eq!(exact.z_score(26.1), f64::INFINITY);
        let noisy = MeanEstimate { mean: 1.0, std_error: 0.5 };
        assert_eq!(noisy.z_score(2.0), 2.0);
    }

    #[test]
    fn ratio_and_mean() {
        let m = MeanEstimate::from_samples(&[1.0, 2.0, 3.0]);
        assert_eq!(m.mean, 2.0);
        assert!((m.std_error - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let r = MeanEstimate::ratio(&[1.0, 2.0], &[2.0, 4.0]);
        assert_eq!(r.mean, 0.5);
        assert_eq!(r.std_error, 0.0);
    }

    #[test]
    fn deterministic_and_euler() {
        let spec = EnsembleSpec::new(9, 3, 64, 42).unwrap();
        let a = estimate(&spec).unwrap();
        let b = estimate(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.facet_counts.iter().all(|&c| c == 14));
        assert_eq!(a.facet_count.std_error, 0.0);
        assert_eq!(a.heights.len(), 64 * 14);
        let other = estimate(&EnsembleSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(a.heights, other.heights);
    }

    #[test]
    fn records_match_report() {
        let spec = EnsembleSpec::new(8, 3, 4, 7).unwrap();
        let (report, records) = estimate_with_records(&spec).unwrap();
        assert_eq!(report, estimate(&spec).unwrap());
        let pooled: Vec<f64> = records.iter().flat_map(|r| r.facets.iter().map(|f| f.height)).collect();
        assert_eq!(pooled, report.heights);
        let mut buf = Vec::new();
        write_facet_csv(&mut buf, 3, &records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("replicate,v0,v1,v2,height,u0,u1,u2"));
        assert_eq!(lines.count(), pooled.len());
    }
}
