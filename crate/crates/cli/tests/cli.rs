use std::process::{Command, Output};

use clap::Parser;
use facet_heights::exact::expected_facets;
use facet_heights::montecarlo::{estimate, EnsembleSpec};
use facet_heights::{HeightInterval, LogReal, PolytopeParams};
use facet_heights_cli::args::{Cli, Command as Sub, Format};
use facet_heights_cli::emit::{render, Envelope, Report, SCHEMA_VERSION};
use facet_heights_cli::{asym, compare, exact, mc, scan, verify};
use serde::de::DeserializeOwned;
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_facet-heights"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = bin(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn parse(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("facet-heights").chain(args.iter().copied())).unwrap()
}

fn roundtrip<R: Report + DeserializeOwned + PartialEq + std::fmt::Debug>(report: &R) {
    let text = render(report, Format::Json).unwrap();
    let env: Envelope<R> = serde_json::from_str(&text).unwrap();
    assert_eq!(env.schema_version, SCHEMA_VERSION);
    assert_eq!(env.command, R::COMMAND);
    assert_eq!(&env.report, report);
}

#[test]
fn exact_circle_points_on_sphere() {
    let v = json(&["exact", "--n", "20", "--d", "3"]);
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    let f = v["report"]["facets"]["value"].as_f64().unwrap();
    assert!((f - 36.0).abs() < 1e-4, "{f}");
}

#[test]
fn json_roundtrips_every_report() {
    let Sub::Exact(a) = parse(&["exact", "--n", "15", "--d", "4", "--h1", "-0.5", "--h2", "0.5"]).command else {
        unreachable!()
    };
    roundtrip(&exact::run(&a).unwrap());
    let Sub::Exact(a) = parse(&["exact", "--ln-n", "2000", "--d", "5"]).command else {
        unreachable!()
    };
    roundtrip(&exact::run(&a).unwrap());
    let Sub::Asym(a) = parse(&["asym", "--family", "log-power", "--a", "2", "--c", "1", "--d", "6"]).command else {
        unreachable!()
    };
    roundtrip(&asym::run(&a).unwrap());
    let Sub::Mc(a) = parse(&["mc", "--n", "9", "--d", "3", "--reps", "50", "--full"]).command else {
        unreachable!()
    };
    roundtrip(&mc::run(&a).unwrap());
    let Sub::Compare(a) = parse(&["compare", "--n", "10", "--d", "3", "--reps", "100", "--family", "fixed-dimension"]).command else {
        unreachable!()
    };
    roundtrip(&compare::run(&a).unwrap());
    let Sub::Scan(a) = parse(&["scan", "--n", "6:9", "--d", "3,4"]).command else {
        unreachable!()
    };
    roundtrip(&scan::run(&a).unwrap());
    let Sub::Verify(a) = parse(&["verify", "--points", "100"]).command else {
        unreachable!()
    };
    roundtrip(&verify::run(&a).unwrap());
}

#[test]
fn scan_csv_matches_euler_count() {
    let out = bin(&["scan", "--n", "10:100", "--d", "3", "--format", "csv"]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (n_col, f_col) = (col("n"), col("F_exact"));
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let n: f64 = rec[n_col].parse().unwrap();
        let f: f64 = rec[f_col].parse().unwrap();
        let want = 2.0 * n - 4.0;
        assert!(((f - want) / want).abs() < 1e-5, "n={n}: {f}");
        rows += 1;
    }
    assert_eq!(rows, 91);
}

#[test]
fn scan_is_deterministic() {
    let args = ["scan", "--n", "7,9", "--d", "4", "--reps", "200", "--seed", "11", "--format", "csv"];
    let a = bin(&args);
    let b = bin(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn huge_log_real_has_no_linear_value() {
    let v = serde_json::to_value(LogReal::from_ln(1e4)).unwrap();
    assert_eq!(v["ln_abs"], 1e4);
    assert!(v.get("value").is_none());
    let v = json(&["exact", "--ln-n", "10000", "--d", "3", "--cdf-points", "2"]);
    let facets = &v["report"]["facets"];
    assert!(facets.get("value").is_none());
    assert!((facets["ln_abs"].as_f64().unwrap() - (1e4 + 2f64.ln())).abs() < 1e-6);
}

#[test]
fn linear_regime_example() {
    // independent oracle: maximize ρ ln Φ(r) - r²/2 on a fine grid, Φ by Simpson's rule
    fn phi(r: f64) -> f64 {
        let m = 2000;
        let h = r / m as f64;
        let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let s: f64 = (0..=m)
            .map(|k| {
                let w = if k == 0 || k == m { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
                w * pdf(k as f64 * h)
            })
            .sum();
        0.5 + s * h / 3.0
    }
    let f = |r: f64| phi(r).ln() - 0.5 * r * r;
    let (mut best, mut r1) = (f64::NEG_INFINITY, 0.0);
    for k in 0..=20_000 {
        let r = k as f64 * 1e-4;
        if f(r) > best {
            best = f(r);
            r1 = r;
        }
    }
    assert!((r1 - 0.506).abs() < 1e-3);
    let g1 = 2.0 * 2f64.ln() + best;

    let v = json(&["asym", "--regime", "linear", "--rho", "1", "--d", "500"]);
    let e = &v["report"]["estimate"];
    let r_rho = e["rho_functions"]["r_rho"].as_f64().unwrap();
    assert!((r_rho - r1).abs() < 2e-4, "{r_rho}");
    let ln_f = e["facet_count"]["ln_facets"].as_f64().unwrap();
    assert!((ln_f - 500.0 * g1).abs() < 1e-6, "{ln_f} vs {}", 500.0 * g1);
}

#[test]
fn adapters_match_direct_calls() {
    let v = json(&["exact", "--n", "30", "--d", "5", "--h1", "0.1", "--h2", "0.6"]);
    let direct = expected_facets(&PolytopeParams::new(30, 5).unwrap(), &HeightInterval::new(0.1, 0.6).unwrap()).unwrap();
    let via_cli: LogReal = serde_json::from_value(v["report"]["facets"].clone()).unwrap();
    assert_eq!(via_cli.log_abs().to_bits(), direct.log_abs().to_bits());

    let v = json(&["mc", "--n", "10", "--d", "3", "--reps", "300", "--seed", "5", "--full"]);
    let direct = estimate(&EnsembleSpec::new(10, 3, 300, 5).unwrap()).unwrap();
    let full: facet_heights::montecarlo::EnsembleReport = serde_json::from_value(v["report"]["full"].clone()).unwrap();
    assert_eq!(full, direct);
}

#[test]
fn facet_dump_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("facets.csv");
    let out = bin(&["mc", "--n", "6", "--d", "3", "--reps", "3", "--dump", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("replicate,v0,v1,v2,height,u0,u1,u2"));
    // 2n - 4 = 8 facets per replicate
    assert_eq!(lines.count(), 24);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bin(&["exact", "--n", "8", "--d", "2", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "exact");
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["verify"]).status.code(), Some(0));
    // usage errors
    assert_eq!(bin(&["asym", "--d", "10"]).status.code(), Some(2));
    assert_eq!(bin(&["exact", "--n", "3", "--d", "3"]).status.code(), Some(2));
    assert_eq!(bin(&["exact", "--d", "3"]).status.code(), Some(2));
    assert_eq!(bin(&["exact", "--n", "10", "--ln-n", "2", "--d", "3"]).status.code(), Some(2));
    assert_eq!(bin(&["asym", "--regime", "linear", "--d", "10"]).status.code(), Some(2));
    assert_eq!(bin(&["asym", "--family", "excess-power", "--a", "1", "--d", "10"]).status.code(), Some(2));
    assert_eq!(bin(&["asym", "--regime", "linear", "--rho", "1", "--d", "10", "--n", "100"]).status.code(), Some(2));
    assert_eq!(bin(&["mc", "--n", "40", "--d", "20"]).status.code(), Some(2));
    assert_eq!(bin(&["scan", "--n", "9:3", "--d", "3"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    // I/O failure
    let out = bin(&["exact", "--n", "8", "--d", "2", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(1));
    // verification failure: an impossible oracle tolerance
    assert_eq!(bin(&["verify", "--points", "10", "--oracle-tol", "0"]).status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}
