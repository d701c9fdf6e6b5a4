//! Command-line front end for the `facet-heights` library.
//!
//! Each subcommand is a thin adapter: it builds the library inputs from the
//! flags, calls the library, and wraps the result in a serializable report.

pub mod args;
pub mod asym;
pub mod compare;
pub mod emit;
pub mod error;
pub mod exact;
pub mod mc;
pub mod scan;
pub mod verify;

use args::{Cli, Command};
use emit::emit;
pub use error::{CliError, CliResult};

/// Runs one command and emits its report. Returns `false` when the command
/// completed but found a violation (only `verify` can).
pub fn run(cli: &Cli) -> CliResult<bool> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Exact(a) => emit(&exact::run(a)?, cli.format, out)?,
        Command::Asym(a) => emit(&asym::run(a)?, cli.format, out)?,
        Command::Mc(a) => emit(&mc::run(a)?, cli.format, out)?,
        Command::Compare(a) => emit(&compare::run(a)?, cli.format, out)?,
        Command::Scan(a) => emit(&scan::run(a)?, cli.format, out)?,
        Command::Verify(a) => {
            let report = verify::run(a)?;
            emit(&report, cli.format, out)?;
            return Ok(report.passed());
        }
    }
    Ok(true)
}
