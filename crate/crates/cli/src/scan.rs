use std::fmt::Write as _;

use facet_heights::asymptotics::wendel_prob;
use facet_heights::exact::expected_facets;
use facet_heights::montecarlo::{self, EnsembleSpec};
use facet_heights::{HeightInterval, PolytopeParams, TypicalHeightLaw};
use serde::{Deserialize, Serialize};

use crate::args::ScanArgs;
use crate::emit::{num, opt, Report};
use crate::error::{CliError, CliResult};

/// Parses `a,b,c` or `lo:hi[:step]` (inclusive).
pub fn parse_grid(text: &str) -> CliResult<Vec<u64>> {
    let bad = || CliError::usage(format!("cannot parse grid {text:?}; use 10,20,30 or 10:100[:step]"));
    let int = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let values: Vec<u64> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let (lo, hi, step) = match parts.as_slice() {
            [lo, hi] => (int(lo)?, int(hi)?, 1),
            [lo, hi, step] => (int(lo)?, int(hi)?, int(step)?),
            _ => return Err(bad()),
        };
        if step == 0 || lo > hi {
            return Err(bad());
        }
        (lo..=hi).step_by(step as usize).collect()
    } else {
        text.split(',').map(int).collect::<CliResult<_>>()?
    };
    if values.is_empty() {
        return Err(bad());
    }
    Ok(values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: u64,
    pub d: u32,
    #[serde(rename = "ln_F_exact")]
    pub ln_f_exact: f64,
    #[serde(rename = "F_exact")]
    pub f_exact: Option<f64>,
    pub negative_mass: f64,
    pub origin_inside_prob: f64,
    pub median_height: f64,
    #[serde(rename = "F_mc")]
    pub f_mc: Option<f64>,
    #[serde(rename = "F_mc_se")]
    pub f_mc_se: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// Grid points skipped because `n <= d`.
    pub skipped: usize,
}

pub fn run(args: &ScanArgs) -> CliResult<ScanReport> {
    let ns = parse_grid(&args.n)?;
    let ds = parse_grid(&args.d)?;
    let mut rows = Vec::new();
    let mut skipped = 0;
    for &d in &ds {
        let d = u32::try_from(d).map_err(|_| CliError::usage(format!("dimension {d} is too large")))?;
        for &n in &ns {
            if n <= u64::from(d) || d < 2 {
                skipped += 1;
                continue;
            }
            let params = PolytopeParams::new(n, d)?;
            let f = expected_facets(&params, &HeightInterval::FULL)?;
            let law = TypicalHeightLaw::new(params)?;
            let (f_mc, f_mc_se) = if args.reps > 0 {
                let spec = EnsembleSpec::new(n, d, args.reps, args.seed)?.with_subset_cap(args.subset_cap)?;
                let r = montecarlo::estimate(&spec)?;
                (Some(r.facet_count.mean), Some(r.facet_count.std_error))
            } else {
                (None, None)
            };
            rows.push(ScanRow {
                n,
                d,
                ln_f_exact: f.log_abs(),
                f_exact: f.to_f64_checked(),
                negative_mass: law.negative_mass(),
                origin_inside_prob: 1.0 - wendel_prob(n, d)?,
                median_height: law.quantile(0.5)?,
                f_mc,
                f_mc_se,
            });
        }
    }
    Ok(ScanReport { rows, skipped })
}

impl Report for ScanReport {
    const COMMAND: &'static str = "scan";

    fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>8} {:>5} {:>16} {:>12} {:>12} {:>12} {:>14} {:>10}",
            "n", "d", "F_exact", "P(H<0)", "P(0 inside)", "median H", "F_mc", "F_mc_se"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>8} {:>5} {:>16} {:>12} {:>12} {:>12} {:>14} {:>10}",
                r.n,
                r.d,
                r.f_exact.map_or_else(|| format!("e^{}", num(r.ln_f_exact)), num),
                num(r.negative_mass),
                num(r.origin_inside_prob),
                num(r.median_height),
                opt(r.f_mc),
                opt(r.f_mc_se),
            );
        }
        if self.skipped > 0 {
            let _ = writeln!(s, "({} grid points with n <= d skipped)", self.skipped);
        }
        s
    }

    /// Header: `n,d,ln_F_exact,F_exact,negative_mass,origin_inside_prob,median_height,F_mc,F_mc_se`.
    fn write_csv<W: std::io::Write>(&self, w: &mut csv::Writer<W>) -> csv::Result<()> {
        if self.rows.is_empty() {
            w.write_record([
                "n", "d", "ln_F_exact", "F_exact", "negative_mass", "origin_inside_prob",
                "median_height", "F_mc", "F_mc_se",
            ])?;
        }
        for r in &self.rows {
            w.serialize(r)?;
        }
        Ok(())
    }
}
