use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Absolute tolerance on the signed distance `⟨x_j,u⟩ - h`.
pub const HALF_SPACE_TOL: f64 = 1e-9;
/// Subsets whose pivot ratio exceeds this are skipped.
pub const CONDITION_LIMIT: f64 = 1e12;

/// A facet: `d` vertices on the hyperplane `{⟨x,normal⟩ = height}` with all
/// other points in `{⟨x,normal⟩ <= height}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetRecord {
    pub vertex_indices: Vec<usize>,
    pub normal: Vec<f64>,
    pub height: f64,
}

impl FacetRecord {
    /// Rechecks the record against the point set it came from.
    pub fn verify(&self, points: &[Vec<f64>]) -> std::result::Result<(), String> {
        let norm = dot(&self.normal, &self.normal).sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(format!("normal has length {norm}"));
        }
        if !(-1.0..=1.0).contains(&self.height) {
            return Err(format!("height {} outside [-1,1]", self.height));
        }
        for (j, p) in points.iter().enumerate() {
            let s = dot(p, &self.normal) - self.height;
            if self.vertex_indices.contains(&j) {
                if s.abs() > 1e-8 {
                    return Err(format!("vertex {j} is {s:e} off the hyperplane"));
                }
            } else if s > 1e-8 {
                return Err(format!("point {j} lies {s:e} beyond the facet"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub facet_count: u64,
    pub heights: Vec<f64>,
    /// Smallest facet height; the Hausdorff distance to the ball is `1 - min_height`.
    pub min_height: f64,
    pub origin_inside: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusDiagnostics {
    pub subsets: u64,
    /// Subsets skipped because their linear system was too ill-conditioned.
    pub ill_conditioned: u64,
    /// Subsets with a non-vertex point within tolerance of their hyperplane.
    pub ties: u64,
}

impl CensusDiagnostics {
    pub fn is_degenerate(&self) -> bool {
        self.ties > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub summary: CensusSummary,
    pub facets: Vec<FacetRecord>,
    pub diagnostics: CensusDiagnostics,
}

/// Finds every facet of the hull of `points` by testing all `d`-subsets.
pub fn facet_census(points: &[Vec<f64>]) -> Result<Census> {
    let d = points.first().map_or(0, Vec::len);
    if d < 2 {
        return domain(format!("dimension must be at least 2, got d={d}"));
    }
    if points.iter().any(|p| p.len() != d) {
        return domain("points have inconsistent dimensions");
    }
    if points.len() <= d {
        return domain(format!("need n > d, got n={}, d={d}", points.len()));
    }
    Ok(census_impl(points, true))
}

pub(crate) fn census_impl(points: &[Vec<f64>], keep_records: bool) -> Census {
    let d = points[0].len();
    let mut diagnostics = CensusDiagnostics::default();
    let mut heights = Vec::new();
    let mut facets = Vec::new();
    let mut lu = vec![0.0; d * d];
    let mut u = vec![0.0; d];

    for subset in (0..points.len()).combinations(d) {
        diagnostics.subsets += 1;
        for (r, &i) in subset.iter().enumerate() {
            lu[r * d..(r + 1) * d].copy_from_slice(&points[i]);
        }
        if !solve_ones(&mut lu, &mut u, d) {
            diagnostics.ill_conditioned += 1;
            continue;
        }
        // hyperplane ⟨x,u⟩ = 1, i.e. ⟨x,u/|u|⟩ = 1/|u|
        let inv_norm = dot(&u, &u).sqrt().recip();
        let mut tie = false;
        let (mut below, mut above) = (0usize, 0usize);
        for (j, p) in points.iter().enumerate() {
            if subset.contains(&j) {
                continue;
            }
            let s = (dot(p, &u) - 1.0) * inv_norm;
            if s.abs() < HALF_SPACE_TOL {
                tie = true;
            } else if s < 0.0 {
                below += 1;
            } else {
                above += 1;
            }
        }
        if tie {
            diagnostics.ties += 1;
            continue;
        }
        let orientation = match (below, above) {
            (_, 0) => 1.0,
            (0, _) => -1.0,
            _ => continue,
        };
        let height = orientation * inv_norm;
        heights.push(height);
        if keep_records {
            facets.push(FacetRecord {
                vertex_indices: subset,
                normal: u.iter().map(|x| orientation * x * inv_norm).collect(),
                height,
            });
        }
    }

    let min_height = heights.iter().copied().fold(f64::INFINITY, f64::min);
    Census {
        summary: CensusSummary {
            facet_count: heights.len() as u64,
            heights,
            min_height,
            origin_inside: min_height > 0.0,
        },
        facets,
        diagnostics,
    }
}

/// Solves `A u = 1` in place by LU with partial pivoting. Returns `false`
/// when the ratio of largest to smallest pivot exceeds [`CONDITION_LIMIT`].
fn solve_ones(a: &mut [f64], u: &mut [f64], d: usize) -> bool {
    u.fill(1.0);
    let (mut pmax, mut pmin) = (0.0f64, f64::INFINITY);
    for k in 0..d {
        let piv = (k..d)
            .max_by(|&i, &j| a[i * d + k].abs().total_cmp(&a[j * d + k].abs()))
            .expect("nonempty range");
        if piv != k {
            for c in 0..d {
                a.swap(k * d + c, piv * d + c);
            }
            u.swap(k, piv);
        }
        let p = a[k * d + k];
        pmax = pmax.max(p.abs());
        pmin = pmin.min(p.abs());
        if p == 0.0 {
            return false;
        }
        for i in k + 1..d {
            let m = a[i * d + k] / p;
            if m != 0.0 {
                for c in k + 1..d {
                    a[i * d + c] -= m * a[k * d + c];
                }
                u[i] -= m * u[k];
            }
        }
    }
    if pmax > CONDITION_LIMIT * pmin {
        return false;
    }
    for k in (0..d).rev() {
        let s: f64 = (k + 1..d).map(|c| a[k * d + c] * u[c]).sum();
        u[k] = (u[k] - s) / a[k * d + k];
    }
    true
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::super::sample_sphere;
    use super::*;

    #[test]
    fn simplex_polygon_and_euler() {
        for d in 2..7 {
            let c = facet_census(&sample_sphere(d + 1, d, 3).unwrap()).unwrap();
            assert_eq!(c.summary.facet_count, d as u64 + 1);
        }
        let c = facet_census(&sample_sphere(7, 2, 5).unwrap()).unwrap();
        assert_eq!(c.summary.facet_count, 7);
        for seed in 0..20 {
            let c = facet_census(&sample_sphere(12, 3, seed).unwrap()).unwrap();
            assert_eq!(c.diagnostics.ill_conditioned, 0);
            assert_eq!(c.summary.facet_count, 20);
        }
    }

    #[test]
    fn records_verify() {
        let pts = sample_sphere(11, 4, 77).unwrap();
        let c = facet_census(&pts).unwrap();
        assert_eq!(c.facets.len() as u64, c.summary.facet_count);
        for f in &c.facets {
            f.verify(&pts).unwrap();
        }
        assert_eq!(c.summary.origin_inside, c.summary.min_height > 0.0);
    }

    #[test]
    fn hemisphere_gives_negative_height() {
        // three points on a short arc: origin outside
        let pts = vec![
            vec![1.0, 0.0],
            vec![0.8, 0.6],
            vec![0.8, -0.6],
        ];
        let c = facet_census(&pts).unwrap();
        assert_eq!(c.summary.facet_count, 3);
        assert!(!c.summary.origin_inside);
        let neg: Vec<_> = c.facets.iter().filter(|f| f.height < 0.0).collect();
        assert_eq!(neg.len(), 1);
        assert!((neg[0].height + 0.8).abs() < 1e-12);
        for f in &c.facets {
            f.verify(&pts).unwrap();
        }
    }

    #[test]
    fn ties_and_singular_subsets_are_counted() {
        // the two antipodal pairs make every line through them pass the origin
        let pts = vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        let c = facet_census(&pts).unwrap();
        assert_eq!(c.diagnostics.ill_conditioned, 2);
        assert_eq!(c.summary.facet_count, 4);
        // three collinear-on-a-chord points are impossible on a circle, so
        // build a tie in d = 3 with four coplanar points
        let s = 0.5f64.sqrt();
        let pts = vec![
            vec![s, 0.0, s],
            vec![0.0, s, s],
            vec![-s, 0.0, s],
            vec![0.0, -s, s],
            vec![0.0, 0.0, -1.0],
        ];
        let c = facet_census(&pts).unwrap();
        assert!(c.diagnostics.is_degenerate());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(facet_census(&[vec![1.0, 0.0], vec![0.0, 1.0]]).is_err());
        assert!(facet_census(&[vec![1.0], vec![-1.0]]).is_err());
        assert!(facet_census(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0]]).is_err());
    }
}
