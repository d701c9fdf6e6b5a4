use std::fmt::Write as _;

use facet_heights::asymptotics::{
    f_rho_prime, g_rho, k_d, negative_height_threshold, wendel_prob, RhoFunctions,
};
use facet_heights::exact::expected_facets;
use facet_heights::numerics::{check_bounds_suite, BoundCheck};
use facet_heights::{HeightInterval, PolytopeParams};
use serde::{Deserialize, Serialize};

use crate::args::VerifyArgs;
use crate::emit::Report;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

/// Additive-recurrence point set in `[0,1)^3`; deterministic and evenly spread.
fn weyl(k: usize) -> [f64; 3] {
    const STEPS: [f64; 3] = [0.414_213_562_373_095, 0.732_050_807_568_877, 0.236_067_977_499_79];
    STEPS.map(|a| ((k as f64 + 0.5) * a).fract())
}

pub fn inequality_grid(points: usize) -> Vec<BoundCheck> {
    let mut grid = Vec::with_capacity(3 * points);
    for k in 0..points {
        let [u, v, _] = weyl(k);
        let n = 10f64.powf(6.0 * u);
        grid.push(BoundCheck::ExpSandwich { x: 0.5 * n * v, n });
    }
    for k in 0..points {
        let [u, v, _] = weyl(k);
        let h = 0.05 + 0.94 * u;
        let exponent = -1.0 + 201.0 * (1.0 - v);
        grid.push(BoundCheck::TailIntegral { h, exponent });
    }
    for k in 0..points {
        let [u, v, _] = weyl(k);
        let alpha = 10f64.powf(-1.0 + 5.0 * u);
        grid.push(BoundCheck::GaussianComparison {
            h: alpha.sqrt() * (2.0 * v - 1.0),
            alpha,
        });
    }
    grid
}

fn rel_failure(label: String, got: f64, want: f64, tol: f64) -> Option<String> {
    let err = (got - want).abs() / want.abs().max(f64::MIN_POSITIVE);
    (!(err <= tol)).then(|| format!("{label}: got {got}, want {want} (relative error {err:e})"))
}

fn suite(name: &str, checks: Vec<facet_heights::Result<Option<String>>>) -> SuiteResult {
    let checked = checks.len();
    let failures = checks
        .into_iter()
        .filter_map(|c| match c {
            Ok(f) => f,
            Err(e) => Some(e.to_string()),
        })
        .collect();
    SuiteResult {
        name: name.into(),
        checked,
        failures,
    }
}

fn facet_oracle(n: u64, d: u32, want: f64, tol: f64) -> facet_heights::Result<Option<String>> {
    let f = expected_facets(&PolytopeParams::new(n, d)?, &HeightInterval::FULL)?.to_f64();
    Ok(rel_failure(format!("F({n},{d})"), f, want, tol))
}

pub fn run(args: &VerifyArgs) -> CliResult<VerifyReport> {
    if args.points == 0 {
        return Err(CliError::usage("--points must be positive"));
    }
    let mut suites = Vec::new();

    let grid = inequality_grid(args.points);
    let bounds = check_bounds_suite(&grid, args.slack);
    suites.push(SuiteResult {
        name: "inequalities".into(),
        checked: bounds.checked,
        failures: bounds
            .violations
            .iter()
            .map(|v| serde_json::to_string(v).unwrap_or_else(|_| format!("{v:?}")))
            .collect(),
    });

    let tol = args.oracle_tol;
    let mut oracles = Vec::new();
    oracles.extend((3..=50).map(|n| facet_oracle(n, 2, n as f64, tol)));
    oracles.extend((2..=15).map(|d| facet_oracle(u64::from(d) + 1, d, f64::from(d) + 1.0, tol)));
    oracles.extend((5..=40).map(|n| facet_oracle(n, 3, 2.0 * n as f64 - 4.0, tol)));
    suites.push(suite("facet oracles", oracles));

    let mut constants = vec![
        k_d(2).map(|k| rel_failure("K_2".into(), k.to_f64(), 1.0, 1e-12)),
        k_d(3).map(|k| rel_failure("K_3".into(), k.to_f64(), 2.0, 1e-12)),
    ];
    constants.extend((1..=20u32).map(|d| {
        wendel_prob(2 * u64::from(d), d).map(|p| rel_failure(format!("wendel(2·{d},{d})"), p, 0.5, 1e-12))
    }));
    suites.push(suite("constants", constants));

    let mut rate = Vec::new();
    for k in 0..=40 {
        let rho = 0.05 * 1000f64.powf(f64::from(k) / 40.0);
        rate.push(RhoFunctions::new(rho).map(|rf| {
            let slope = f_rho_prime(rho, rf.r_rho);
            let (gl, gu) = (g_rho(rho, rf.r_ell), g_rho(rho, rf.r_u));
            let worst = slope.abs().max(gl.abs()).max(gu.abs());
            (!(worst < 1e-8)).then(|| {
                format!("rho={rho}: f'(r_rho)={slope:e}, g(r_ell)={gl:e}, g(r_u)={gu:e}")
            })
        }));
    }
    let r = negative_height_threshold();
    rate.push(Ok((!((r - 3.4).abs() <= 0.05))
        .then(|| format!("negative-height threshold {r} outside 3.4 ± 0.05"))));
    suites.push(suite("rate functions", rate));

    Ok(VerifyReport { suites })
}

impl Report for VerifyReport {
    const COMMAND: &'static str = "verify";

    fn human(&self) -> String {
        let mut s = String::new();
        for suite in &self.suites {
            let status = if suite.passed() { "ok" } else { "FAILED" };
            let _ = writeln!(
                s,
                "{:<16} {:>6} checks  {:>4} failures  {status}",
                suite.name,
                suite.checked,
                suite.failures.len()
            );
            for f in suite.failures.iter().take(10) {
                let _ = writeln!(s, "    {f}");
            }
        }
        let _ = writeln!(s, "{}", if self.passed() { "all suites passed" } else { "verification FAILED" });
        s
    }

    /// Header: `suite,checked,failures,passed`.
    fn write_csv<W: std::io::Write>(&self, w: &mut csv::Writer<W>) -> csv::Result<()> {
        w.write_record(["suite", "checked", "failures", "passed"])?;
        for s in &self.suites {
            w.write_record([
                s.name.clone(),
                s.checked.to_string(),
                s.failures.len().to_string(),
                s.passed().to_string(),
            ])?;
        }
        Ok(())
    }
}
