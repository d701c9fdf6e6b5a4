use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exact::TypicalHeightLaw;

/// Kolmogorov–Smirnov distance between a sample and a reference law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsDistance {
    pub distance: f64,
    /// Upper bound on the error from tabulating the reference CDF.
    pub table_error: f64,
}

/// `sup_x |F_n(x) - F(x)|`, evaluating `cdf` once per sample point.
pub fn ks_distance<F: FnMut(f64) -> Result<f64>>(sample: &[f64], mut cdf: F) -> Result<f64> {
    let sorted = sorted_sample(sample)?;
    let values = sorted.iter().map(|&x| cdf(x)).collect::<Result<Vec<_>>>()?;
    Ok(sup_distance(&sorted, |i, _| values[i]))
}

/// KS distance to the exact typical-height law. The CDF is tabulated on an
/// adaptive grid over the sample range, refined until neighbouring values
/// differ by at most `max_step`, and interpolated linearly in between.
pub fn ks_distance_to_law(sample: &[f64], law: &TypicalHeightLaw, max_step: f64) -> Result<KsDistance> {
    if !(max_step > 0.0) {
        return domain(format!("table step must be positive, got {max_step}"));
    }
    let sorted = sorted_sample(sample)?;
    let lo = sorted[0];
    let hi = sorted[sorted.len() - 1];
    let mut grid: Vec<(f64, f64)> = Vec::new();
    if hi > lo {
        const START: usize = 64;
        let xs: Vec<f64> = (0..=START)
            .map(|k| lo + (hi - lo) * k as f64 / START as f64)
            .collect();
        let mut stack: Vec<((f64, f64), (f64, f64))> = Vec::new();
        let first = (xs[0], law.cdf(xs[0])?);
        grid.push(first);
        let mut prev = first;
        for &x in &xs[1..] {
            let next = (x, law.cdf(x)?);
            stack.push((prev, next));
            refine(law, &mut stack, &mut grid, max_step)?;
            prev = next;
        }
    } else {
        grid.push((lo, law.cdf(lo)?));
    }
    let table_error = grid
        .windows(2)
        .map(|w| w[1].1 - w[0].1)
        .fold(0.0, f64::max);
    let mut j = 0;
    let distance = sup_distance(&sorted, |_, x| {
        while j + 1 < grid.len() && grid[j + 1].0 < x {
            j += 1;
        }
        interpolate(&grid, j, x)
    });
    Ok(KsDistance {
        distance,
        table_error,
    })
}

fn refine(
    law: &TypicalHeightLaw,
    stack: &mut Vec<((f64, f64), (f64, f64))>,
    grid: &mut Vec<(f64, f64)>,
    max_step: f64,
) -> Result<()> {
    while let Some((a, b)) = stack.pop() {
        let mid = 0.5 * (a.0 + b.0);
        if b.1 - a.1 <= max_step || !(mid > a.0 && mid < b.0) {
            grid.push(b);
            continue;
        }
        let m = (mid, law.cdf(mid)?);
        // right half first so the left half is emitted first
        stack.push((m, b));
        stack.push((a, m));
    }
    Ok(())
}

fn interpolate(grid: &[(f64, f64)], j: usize, x: f64) -> f64 {
    if j + 1 >= grid.len() {
        return grid[grid.len() - 1].1;
    }
    let (x0, y0) = grid[j];
    let (x1, y1) = grid[j + 1];
    if x <= x0 {
        return y0;
    }
    y0 + (y1 - y0) * ((x - x0) / (x1 - x0)).min(1.0)
}

fn sorted_sample(sample: &[f64]) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return domain("KS distance of an empty sample");
    }
    if sample.iter().any(|x| x.is_nan()) {
        return domain("sample contains NaN");
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

/// Scans the sorted sample; `cdf(i, x)` gives the reference CDF at `x = sorted[i]`.
fn sup_distance<F: FnMut(usize, f64) -> f64>(sorted: &[f64], mut cdf: F) -> f64 {
    let m = sorted.len() as f64;
    let mut d = 0.0f64;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut k = i;
        while k + 1 < sorted.len() && sorted[k + 1] == x {
            k += 1;
        }
        let f = cdf(i, x);
        d = d.max(f - i as f64 / m).max((k + 1) as f64 / m - f);
        i = k + 1;
    }
    d
}
