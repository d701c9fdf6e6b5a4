use std::fmt::Write as _;

use facet_heights::asymptotics::{estimate, wendel_prob};
use facet_heights::exact::{expected_facets, PointCount};
use facet_heights::montecarlo::{self, ks_distance_to_law, EnsembleSpec, KsDistance};
use facet_heights::{HeightInterval, LogReal, TypicalHeightLaw};
use serde::{Deserialize, Serialize};

use crate::args::CompareArgs;
use crate::asym::{input_from, regime_from};
use crate::emit::{opt, Report};
use crate::error::{CliError, CliResult};
use crate::exact::{params_from, ParamsView};
use crate::mc::empirical_quantile;

/// Table resolution of the exact CDF in the KS comparison.
const KS_TABLE_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub quantity: String,
    pub exact: Option<f64>,
    pub asymptotic: Option<f64>,
    pub monte_carlo: Option<f64>,
    pub monte_carlo_se: Option<f64>,
    pub exact_over_asymptotic: Option<f64>,
    /// `(monte_carlo - exact) / monte_carlo_se`.
    pub monte_carlo_z: Option<f64>,
}

impl CompareRow {
    fn new(quantity: &str, exact: Option<f64>, asymptotic: Option<f64>, mc: Option<(f64, Option<f64>)>) -> Self {
        let (monte_carlo, monte_carlo_se) = match mc {
            Some((m, se)) => (Some(m), se),
            None => (None, None),
        };
        let exact_over_asymptotic = match (exact, asymptotic) {
            (Some(e), Some(a)) if a != 0.0 => Some(e / a),
            _ => None,
        };
        let monte_carlo_z = match (exact, monte_carlo, monte_carlo_se) {
            (Some(e), Some(m), Some(se)) if se > 0.0 => Some((m - e) / se),
            _ => None,
        };
        Self {
            quantity: quantity.into(),
            exact,
            asymptotic,
            monte_carlo,
            monte_carlo_se,
            exact_over_asymptotic,
            monte_carlo_z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub params: ParamsView,
    pub regime: Option<String>,
    pub rows: Vec<CompareRow>,
    /// KS distance between the pooled simulated heights and the exact law.
    pub ks_distance: Option<KsDistance>,
    pub notes: Vec<String>,
}

pub fn run(args: &CompareArgs) -> CliResult<CompareReport> {
    let params = params_from(&args.count, args.d)?;
    let mut notes = Vec::new();

    let exact_f = expected_facets(&params, &HeightInterval::FULL)?;
    let law = TypicalHeightLaw::new(params)?;
    let exact_median = law.quantile(0.5)?;
    let exact_inside = match params.count() {
        PointCount::Exact(n) => Some(1.0 - wendel_prob(n, args.d)?),
        PointCount::Log(_) => None,
    };

    let asym = match regime_from(&args.regime)? {
        Some(spec) => {
            let input = input_from(&spec, args.d, Some(params))?;
            Some(estimate(&spec, &input, args.r1, args.r2)?)
        }
        None => {
            notes.push("no --regime or --family given; asymptotic column left empty".into());
            None
        }
    };

    let mc = match params.count() {
        _ if args.reps == 0 => None,
        PointCount::Log(_) => {
            notes.push("simulation skipped: n given only through ln n".into());
            None
        }
        PointCount::Exact(n) => {
            match EnsembleSpec::new(n, args.d, args.reps, args.seed).and_then(|s| s.with_subset_cap(args.subset_cap)) {
                Ok(spec) => Some(montecarlo::estimate(&spec)?),
                Err(facet_heights::Error::InvalidEnsemble(msg)) => {
                    notes.push(format!("simulation skipped: {msg}"));
                    None
                }
                Err(e) => return Err(CliError::from(e)),
            }
        }
    };

    let asym_ln_f = asym.as_ref().map(|a| a.facet_count.ln_facets);
    let asym_hausdorff = asym.as_ref().map(|a| {
        a.hausdorff
            .approximations
            .last()
            .map_or(a.hausdorff.limit, |x| x.value)
    });
    let mc_median = mc.as_ref().map(|r| {
        let mut h = r.heights.clone();
        h.sort_by(f64::total_cmp);
        empirical_quantile(&h, 0.5)
    });

    let rows = vec![
        CompareRow::new(
            "facet_count",
            exact_f.to_f64_checked(),
            asym_ln_f.and_then(|l| LogReal::from_ln(l).to_f64_checked()),
            mc.as_ref().map(|r| (r.facet_count.mean, Some(r.facet_count.std_error))),
        ),
        CompareRow::new(
            "ln_facet_count",
            exact_f.ln(),
            asym_ln_f,
            mc.as_ref().map(|r| (r.facet_count.mean.ln(), Some(r.facet_count.std_error / r.facet_count.mean))),
        ),
        CompareRow::new(
            "origin_inside_probability",
            exact_inside,
            None,
            mc.as_ref().map(|r| (r.origin_inside.mean, Some(r.origin_inside.std_error))),
        ),
        CompareRow::new(
            "negative_height_fraction",
            Some(law.negative_mass()),
            None,
            mc.as_ref().map(|r| (r.negative_height_fraction.mean, Some(r.negative_height_fraction.std_error))),
        ),
        CompareRow::new(
            "median_height",
            Some(exact_median),
            asym.as_ref().and_then(|a| a.typical_height.location),
            mc_median.map(|m| (m, None)),
        ),
        CompareRow::new(
            "hausdorff_distance",
            None,
            asym_hausdorff,
            mc.as_ref().map(|r| (r.hausdorff_distance.mean, Some(r.hausdorff_distance.std_error))),
        ),
    ];
    let ks_distance = match &mc {
        Some(r) => Some(ks_distance_to_law(&r.heights, &law, KS_TABLE_STEP)?),
        None => None,
    };
    if asym.is_some() {
        notes.push("asymptotic median_height is the height implied by the regime's limit law".into());
    }
    Ok(CompareReport {
        params: ParamsView::from(&params),
        regime: asym.map(|a| a.regime.tag.name().to_string()),
        rows,
        ks_distance,
        notes,
    })
}

impl Report for CompareReport {
    const COMMAND: &'static str = "compare";

    fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.params.describe());
        if let Some(r) = &self.regime {
            let _ = writeln!(s, "regime: {r}");
        }
        let _ = writeln!(
            s,
            "{:<26} {:>16} {:>16} {:>16} {:>14} {:>12} {:>8}",
            "quantity", "exact", "asymptotic", "monte carlo", "mc se", "exact/asym", "mc z"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<26} {:>16} {:>16} {:>16} {:>14} {:>12} {:>8}",
                r.quantity,
                opt(r.exact),
                opt(r.asymptotic),
                opt(r.monte_carlo),
                opt(r.monte_carlo_se),
                opt(r.exact_over_asymptotic),
                r.monte_carlo_z.map_or("-".into(), |z| format!("{z:.2}")),
            );
        }
        if let Some(ks) = &self.ks_distance {
            let _ = writeln!(s, "KS distance of simulated heights to the exact law: {:.5}", ks.distance);
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    /// Header: `quantity,exact,asymptotic,monte_carlo,monte_carlo_se,exact_over_asymptotic,monte_carlo_z`,
    /// followed by a `ks_distance` row with the distance in the `monte_carlo` column.
    fn write_csv<W: std::io::Write>(&self, w: &mut csv::Writer<W>) -> csv::Result<()> {
        for r in &self.rows {
            w.serialize(r)?;
        }
        if let Some(ks) = &self.ks_distance {
            w.serialize(CompareRow::new("ks_distance", None, None, Some((ks.distance, None))))?;
        }
        Ok(())
    }
}
