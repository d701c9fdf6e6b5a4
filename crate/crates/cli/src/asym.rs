use std::fmt::Write as _;

use facet_heights::asymptotics::{
    classify, estimate, AsymptoticEstimate, AsymptoticInput, GrowthFamily, LimitLaw, RegimeSpec,
    RegimeTag,
};
use facet_heights::{LogReal, PolytopeParams};
use serde::{Deserialize, Serialize};

use crate::args::{AsymArgs, FamilyName, RegimeArgs, RegimeName};
use crate::emit::{csv_num, num, opt, Report};
use crate::error::{CliError, CliResult};
use crate::exact::log_real_text;

fn need(value: Option<f64>, flag: &str, what: &str) -> CliResult<f64> {
    value.ok_or_else(|| CliError::usage(format!("{what} requires --{flag}")))
}

fn refuse(value: Option<f64>, flag: &str, what: &str) -> CliResult<()> {
    match value {
        Some(_) => Err(CliError::usage(format!("--{flag} does not apply to {what}"))),
        None => Ok(()),
    }
}

/// The regime requested on the command line, if any.
pub(crate) fn regime_from(args: &RegimeArgs) -> CliResult<Option<RegimeSpec>> {
    if let Some(name) = args.regime {
        for (v, flag) in [(args.c, "c"), (args.a, "a"), (args.b, "b")] {
            refuse(v, flag, "a regime tag")?;
        }
        let tag = match name {
            RegimeName::SublinearSqrt => RegimeTag::SublinearSqrt {
                rho: need(args.rho, "rho", "sublinear-sqrt")?,
            },
            RegimeName::Linear => RegimeTag::Linear {
                rho: need(args.rho, "rho", "linear")?,
            },
            RegimeName::Exponential => RegimeTag::Exponential {
                rho: need(args.rho, "rho", "exponential")?,
            },
            other => {
                let tag = match other {
                    RegimeName::SublinearMid => RegimeTag::SublinearMid,
                    RegimeName::Subexponential => RegimeTag::Subexponential,
                    RegimeName::Superexponential => RegimeTag::SuperExponential,
                    _ => RegimeTag::SuperFactorial,
                };
                refuse(args.rho, "rho", tag.name())?;
                tag
            }
        };
        return Ok(Some(RegimeSpec::from_tag(tag)?));
    }
    let Some(name) = args.family else {
        for (v, flag) in [(args.rho, "rho"), (args.c, "c"), (args.a, "a"), (args.b, "b")] {
            refuse(v, flag, "a missing --regime/--family")?;
        }
        return Ok(None);
    };
    let family = match name {
        FamilyName::ExcessPower => GrowthFamily::ExcessPower {
            c: args.c,
            a: need(args.a, "a", "excess-power")?,
        },
        FamilyName::ExcessLinear => GrowthFamily::ExcessLinear {
            rho: need(args.rho, "rho", "excess-linear")?,
        },
        FamilyName::PolyPower => GrowthFamily::PolyPower {
            c: args.c,
            a: need(args.a, "a", "poly-power")?,
        },
        FamilyName::LogLinear => GrowthFamily::LogLinear {
            rho: need(args.rho, "rho", "log-linear")?,
        },
        FamilyName::LogPower => GrowthFamily::LogPower {
            c: args.c,
            a: need(args.a, "a", "log-power")?,
        },
        FamilyName::LogPolylog => GrowthFamily::LogPolylog {
            c: args.c,
            b: need(args.b, "b", "log-polylog")?,
        },
        FamilyName::FixedDimension => GrowthFamily::FixedDimension,
    };
    let used = match family {
        GrowthFamily::ExcessLinear { .. } | GrowthFamily::LogLinear { .. } => ["rho"].as_slice(),
        GrowthFamily::LogPolylog { .. } => &["c", "b"],
        GrowthFamily::FixedDimension => &[],
        _ => &["c", "a"],
    };
    for (v, flag) in [(args.rho, "rho"), (args.c, "c"), (args.a, "a"), (args.b, "b")] {
        if !used.contains(&flag) {
            refuse(v, flag, "this family")?;
        }
    }
    Ok(Some(classify(family)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymReport {
    pub estimate: AsymptoticEstimate,
    /// `exp` of the leading-order log facet count.
    pub facets: LogReal,
}

pub(crate) fn input_from(
    spec: &RegimeSpec,
    d: u32,
    params: Option<PolytopeParams>,
) -> CliResult<AsymptoticInput> {
    let params = match (params, spec.family) {
        (Some(p), _) => Some(p),
        (None, Some(f)) => f.params_at(d).ok(),
        (None, None) => None,
    };
    Ok(match params {
        Some(p) => AsymptoticInput::with_params(p),
        None => AsymptoticInput::dimension(d)?,
    })
}

pub fn run(args: &AsymArgs) -> CliResult<AsymReport> {
    let spec = regime_from(&args.regime)?.ok_or_else(|| {
        CliError::usage("asym needs an explicit --regime or --family; the regime is never inferred from (n, d)")
    })?;
    let params = match (args.n, args.ln_n) {
        (Some(n), _) => Some(PolytopeParams::new(n, args.d)?),
        (None, Some(l)) => Some(PolytopeParams::from_ln_n(l, args.d)?),
        (None, None) => None,
    };
    let input = input_from(&spec, args.d, params)?;
    let estimate = estimate(&spec, &input, args.r1, args.r2)?;
    let facets = LogReal::from_ln(estimate.facet_count.ln_facets);
    Ok(AsymReport { estimate, facets })
}

fn limit_text(l: &LimitLaw) -> String {
    match *l {
        LimitLaw::PointMass { value } => format!("point mass at {}", num(value)),
        LimitLaw::Normal { mean, sd } => format!("Normal(mean {}, sd {})", num(mean), num(sd)),
        LimitLaw::Gamma { shape } => format!("Gamma(shape {})", num(shape)),
    }
}

impl AsymReport {
    fn rows(&self) -> Vec<(String, Option<f64>)> {
        let e = &self.estimate;
        let mut rows = vec![
            ("d".to_string(), Some(f64::from(e.input.d))),
            ("ln_n".to_string(), e.input.params.map(|p| p.ln_n())),
            ("rho".to_string(), e.regime.tag.rho()),
            ("ln_F".to_string(), Some(e.facet_count.ln_facets)),
            ("F".to_string(), self.facets.to_f64_checked()),
            ("typical_height_location".to_string(), e.typical_height.location),
            ("hausdorff_limit".to_string(), Some(e.hausdorff.limit)),
        ];
        for a in &e.hausdorff.approximations {
            rows.push((format!("hausdorff_{}", a.rule), Some(a.value)));
        }
        if let Some((lo, hi)) = &e.range {
            rows.push(("range_h1".into(), Some(lo.h)));
            rows.push(("range_h2".into(), Some(hi.h)));
        }
        if let Some(rf) = &e.rho_functions {
            rows.push(("r_rho".into(), Some(rf.r_rho)));
            rows.push(("r_ell".into(), Some(rf.r_ell)));
            rows.push(("r_u".into(), Some(rf.r_u)));
        }
        rows.push(("K_d".into(), e.k_d.and_then(|k| k.to_f64_checked())));
        rows.push(("h_star".into(), e.h_star));
        rows.push(("c_d".into(), e.c_d));
        rows
    }
}

impl Report for AsymReport {
    const COMMAND: &'static str = "asym";

    fn human(&self) -> String {
        let e = &self.estimate;
        let mut s = String::new();
        let _ = writeln!(s, "regime: {}", e.regime.tag.name());
        if let Some(f) = &e.regime.family {
            let _ = writeln!(s, "family: {}", serde_json::to_string(f).unwrap_or_default());
        }
        let _ = writeln!(
            s,
            "ln F = {} + {}, F ~ {}",
            num(e.facet_count.ln_facets),
            e.facet_count.dropped,
            log_real_text(&self.facets)
        );
        let _ = writeln!(
            s,
            "typical height: {} -> {}",
            e.typical_height.statistic,
            limit_text(&e.typical_height.limit)
        );
        let _ = writeln!(s, "  scale {}, implied height {}", e.typical_height.scale, opt(e.typical_height.location));
        for (k, v) in self.rows().into_iter().skip(5) {
            if v.is_some() {
                let _ = writeln!(s, "{k}: {}", opt(v));
            }
        }
        s
    }

    /// Header: `quantity,value`; absent quantities are left blank.
    fn write_csv<W: std::io::Write>(&self, w: &mut csv::Writer<W>) -> csv::Result<()> {
        w.write_record(["quantity", "value"])?;
        w.write_record(["regime", self.estimate.regime.tag.name()])?;
        for (k, v) in self.rows() {
            w.write_record([k, v.map(csv_num).unwrap_or_default()])?;
        }
        Ok(())
    }
}
