use std::fmt::Write as _;

use facet_heights::exact::{expected_facets_with, PointCount};
use facet_heights::{AccuracyConfig, HeightInterval, LogReal, PolytopeParams, TypicalHeightLaw};
use serde::{Deserialize, Serialize};

use crate::args::{ExactArgs, PointCountArgs};
use crate::emit::{csv_num, num, Report};
use crate::error::{CliError, CliResult};

/// The point count and dimension as reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsView {
    pub n: Option<u64>,
    pub ln_n: f64,
    pub d: u32,
}

impl From<&PolytopeParams> for ParamsView {
    fn from(p: &PolytopeParams) -> Self {
        Self {
            n: match p.count() {
                PointCount::Exact(n) => Some(n),
                PointCount::Log(_) => None,
            },
            ln_n: p.ln_n(),
            d: p.d(),
        }
    }
}

impl ParamsView {
    pub(crate) fn describe(&self) -> String {
        match self.n {
            Some(n) => format!("n = {n}, d = {}", self.d),
            None => format!("ln n = {}, d = {}", self.ln_n, self.d),
        }
    }
}

pub(crate) fn params_from(count: &PointCountArgs, d: u32) -> CliResult<PolytopeParams> {
    Ok(match (count.n, count.ln_n) {
        (Some(n), None) => PolytopeParams::new(n, d)?,
        (None, Some(l)) => PolytopeParams::from_ln_n(l, d)?,
        _ => return Err(CliError::usage("exactly one of --n and --ln-n is required")),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfRow {
    pub h: f64,
    pub cdf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactReport {
    pub params: ParamsView,
    pub h1: f64,
    pub h2: f64,
    /// Expected number of facets with height in `[h1, h2]`.
    pub facets: LogReal,
    /// Expected total number of facets.
    pub total_facets: LogReal,
    /// Probability that the typical facet has negative height.
    pub negative_mass: f64,
    /// Typical-height CDF on an even grid between its 0.1% and 99.9% quantiles.
    pub cdf_table: Vec<CdfRow>,
}

pub fn run(args: &ExactArgs) -> CliResult<ExactReport> {
    let params = params_from(&args.count, args.d)?;
    let window = HeightInterval::new(args.h1, args.h2)?;
    let cfg = match args.rel_tol {
        Some(t) => AccuracyConfig::new(t, AccuracyConfig::QUADRATURE.max_iter)?,
        None => AccuracyConfig::QUADRATURE,
    };
    if args.cdf_points < 2 {
        return Err(CliError::usage("--cdf-points must be at least 2"));
    }
    let facets = expected_facets_with(&params, &window, &cfg)?;
    let total_facets = expected_facets_with(&params, &HeightInterval::FULL, &cfg)?;
    let law = TypicalHeightLaw::with_config(params, cfg)?;
    let lo = law.quantile(1e-3)?;
    let hi = law.quantile(1.0 - 1e-3)?;
    let m = args.cdf_points;
    let cdf_table = (0..m)
        .map(|k| {
            let h = lo + (hi - lo) * k as f64 / (m - 1) as f64;
            Ok(CdfRow { h, cdf: law.cdf(h)? })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(ExactReport {
        params: ParamsView::from(&params),
        h1: args.h1,
        h2: args.h2,
        facets,
        total_facets,
        negative_mass: law.negative_mass(),
        cdf_table,
    })
}

pub(crate) fn log_real_text(x: &LogReal) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let value = match x.to_f64_checked() {
        Some(v) => num(v),
        None => x.to_string(),
    };
    format!("{value} (ln {})", num(x.log_abs()))
}

impl Report for ExactReport {
    const COMMAND: &'static str = "exact";

    fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.params.describe());
        let _ = writeln!(s, "expected facets with height in [{}, {}]: {}", self.h1, self.h2, log_real_text(&self.facets));
        let _ = writeln!(s, "expected facets in total: {}", log_real_text(&self.total_facets));
        let _ = writeln!(s, "P(typical height < 0): {}", num(self.negative_mass));
        let _ = writeln!(s, "typical-height CDF:");
        let _ = writeln!(s, "  {:>16}  {:>12}", "h", "P(H <= h)");
        for r in &self.cdf_table {
            let _ = writeln!(s, "  {:>16.10}  {:>12.8}", r.h, r.cdf);
        }
        s
    }

    /// Header: `n,ln_n,d,h1,h2,ln_F,F,h,cdf`; one row per CDF grid point.
    fn write_csv<W: std::io::Write>(&self, w: &mut csv::Writer<W>) -> csv::Result<()> {
        w.write_record(["n", "ln_n", "d", "h1", "h2", "ln_F", "F", "h", "cdf"])?;
        let n = self.params.n.map(|n| n.to_string()).unwrap_or_default();
        let ln_f = self.facets.ln().map(csv_num).unwrap_or_default();
        let f = self.facets.to_f64_checked().map(csv_num).unwrap_or_default();
        for r in &self.cdf_table {
            w.write_record([
                n.clone(),
                csv_num(self.params.ln_n),
                self.params.d.to_string(),
                csv_num(self.h1),
                csv_num(self.h2),
                ln_f.clone(),
                f.clone(),
                csv_num(r.h),
                csv_num(r.cdf),
            ])?;
        }
        Ok(())
    }
}
