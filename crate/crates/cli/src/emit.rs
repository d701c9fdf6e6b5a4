use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use crate::args::Format;
use crate::error::CliResult;

/// Version of the JSON envelope and the CSV layouts.
pub const SCHEMA_VERSION: u32 = 1;

/// A command result that can be rendered in every output format.
pub trait Report: Serialize {
    const COMMAND: &'static str;

    fn human(&self) -> String;

    fn write_csv<W: std::io::Write>(&self, w: &mut csv::Writer<W>) -> csv::Result<()>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: String,
    pub report: T,
}

pub fn render<R: Report>(report: &R, format: Format) -> CliResult<String> {
    Ok(match format {
        Format::Human => report.human(),
        Format::Json => {
            let env = Envelope {
                schema_version: SCHEMA_VERSION,
                command: R::COMMAND.to_string(),
                report,
            };
            serde_json::to_string_pretty(&env)? + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            report.write_csv(&mut w)?;
            let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
            String::from_utf8(bytes).context("CSV output is not UTF-8")?
        }
    })
}

/// Renders `report` and writes it to `out`, or to standard output.
pub fn emit<R: Report>(report: &R, format: Format, out: Option<&Path>) -> CliResult<()> {
    let text = render(report, format)?;
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Formats a float for human output: plain for moderate magnitudes,
/// scientific otherwise.
pub(crate) fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e7).contains(&a) {
        format!("{x:.6}")
    } else {
        format!("{x:.6e}")
    }
}

pub(crate) fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), num)
}

/// Shortest round-trip text of a float, switching to exponent form for very
/// large and very small magnitudes.
pub(crate) fn csv_num(x: f64) -> String {
    format!("{x:?}")
}
