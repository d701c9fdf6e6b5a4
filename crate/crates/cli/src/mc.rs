use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;

use anyhow::Context;
use facet_heights::montecarlo::{
    estimate, estimate_with_records, write_facet_csv, EnsembleDiagnostics, EnsembleReport,
    EnsembleSpec, MeanEstimate,
};
use serde::{Deserialize, Serialize};

use crate::args::McArgs;
use crate::emit::{csv_num, num, Report};
use crate::error::CliResult;

const QUANTILE_LEVELS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub n: u64,
    pub d: u32,
    pub replicates: u64,
    pub seed: u64,
    pub facet_count: MeanEstimate,
    pub origin_inside: MeanEstimate,
    pub negative_height_fraction: MeanEstimate,
    pub hausdorff_distance: MeanEstimate,
    /// `(level, quantile)` pairs of the pooled facet heights.
    pub height_quantiles: Vec<(f64, f64)>,
    pub diagnostics: EnsembleDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub summary: McSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full: Option<EnsembleReport>,
}

/// Empirical quantile, the smallest sample value with ECDF at least `p`.
pub(crate) fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let k = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[k - 1]
}

pub(crate) fn summarize(r: &EnsembleReport) -> CliResult<McSummary> {
    let mut sorted = r.heights.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(McSummary {
        n: r.spec.n()? as u64,
        d: r.spec.params.d(),
        replicates: r.spec.replicates,
        seed: r.spec.seed,
        facet_count: r.facet_count,
        origin_inside: r.origin_inside,
        negative_height_fraction: r.negative_height_fraction,
        hausdorff_distance: r.hausdorff_distance,
        height_quantiles: QUANTILE_LEVELS
            .iter()
            .map(|&p| (p, empirical_quantile(&sorted, p)))
            .collect(),
        diagnostics: r.diagnostics,
    })
}

pub fn run(args: &McArgs) -> CliResult<McReport> {
    let spec = EnsembleSpec::new(args.n, args.d, args.reps, args.seed)?.with_subset_cap(args.subset_cap)?;
    let report = match &args.dump {
        Some(path) => {
            let (report, records) = estimate_with_records(&spec)?;
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            write_facet_csv(BufWriter::new(file), args.d as usize, &records)
                .with_context(|| format!("cannot write {}", path.display()))?;
            report
        }
        None => estimate(&spec)?,
    };
    Ok(McReport {
        summary: summarize(&report)?,
        full: args.full.then_some(report),
    })
}

impl McSummary {
    fn rows(&self) -> [(&'static str, &MeanEstimate); 4] {
        [
            ("facet_count", &self.facet_count),
            ("origin_inside", &self.origin_inside),
            ("negative_height_fraction", &self.negative_height_fraction),
            ("hausdorff_distance", &self.hausdorff_distance),
        ]
    }
}

impl Report for McReport {
    const COMMAND: &'static str = "mc";

    fn human(&self) -> String {
        let s0 = &self.summary;
        let mut s = String::new();
        let _ = writeln!(s, "n = {}, d = {}, {} replicates, seed {}", s0.n, s0.d, s0.replicates, s0.seed);
        for (k, m) in s0.rows() {
            let _ = writeln!(s, "{k:>26}: {} ± {}", num(m.mean), num(m.std_error));
        }
        let _ = writeln!(s, "pooled height quantiles:");
        for (p, q) in &s0.height_quantiles {
            let _ = writeln!(s, "  {p:.1}: {}", num(*q));
        }
        let g = &s0.diagnostics;
        let _ = writeln!(
            s,
            "subsets examined {}, ill-conditioned skips {}, resampled draws {}",
            g.subsets_examined, g.ill_conditioned_skips, g.resampled_replicates
        );
        s
    }

    /// Header: `quantity,mean,std_error`; height quantiles appear as
    /// `height_q<level>` rows with a blank standard error.
    fn write_csv<W: std::io::Write>(&self, w: &mut csv::Writer<W>) -> csv::Result<()> {
        w.write_record(["quantity", "mean", "std_error"])?;
        for (k, m) in self.summary.rows() {
            w.write_record([k.to_string(), csv_num(m.mean), csv_num(m.std_error)])?;
        }
        for (p, q) in &self.summary.height_quantiles {
            w.write_record([format!("height_q{p}"), csv_num(*q), String::new()])?;
        }
        Ok(())
    }
}
