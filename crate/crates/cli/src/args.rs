use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(
    name = "facet-heights",
    version,
    about = "Facet counts and facet heights of random polytopes inscribed in the sphere"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Expected facet count in a height window and the typical-height CDF.
    Exact(ExactArgs),
    /// Asymptotic formulas for an explicitly chosen regime.
    Asym(AsymArgs),
    /// Monte Carlo facet census.
    Mc(McArgs),
    /// Exact, asymptotic and Monte Carlo values side by side.
    Compare(CompareArgs),
    /// Exact values over an (n, d) grid.
    Scan(ScanArgs),
    /// Inequality checks and closed-form oracle families.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
#[group(id = "count", required = true, multiple = false)]
pub struct PointCountArgs {
    /// Number of points.
    #[arg(long, group = "count")]
    pub n: Option<u64>,
    /// Natural log of the number of points, for counts beyond 2^64.
    #[arg(long = "ln-n", group = "count", allow_negative_numbers = true)]
    pub ln_n: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub count: PointCountArgs,
    /// Dimension of the ambient space.
    #[arg(long)]
    pub d: u32,
    /// Lower end of the height window.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub h1: f64,
    /// Upper end of the height window.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub h2: f64,
    /// Number of heights in the CDF table.
    #[arg(long, default_value_t = 21)]
    pub cdf_points: usize,
    /// Relative tolerance of the quadrature.
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeName {
    SublinearSqrt,
    SublinearMid,
    Linear,
    Subexponential,
    Exponential,
    Superexponential,
    Superfactorial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    /// n - d = c d^a
    ExcessPower,
    /// n - d = rho d
    ExcessLinear,
    /// n = c d^a
    PolyPower,
    /// ln n = rho d
    LogLinear,
    /// ln n = c d^a
    LogPower,
    /// ln n = c d (ln d)^b
    LogPolylog,
    /// d fixed, n growing
    FixedDimension,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RegimeArgs {
    /// Regime tag.
    #[arg(long, value_enum, conflicts_with = "family")]
    pub regime: Option<RegimeName>,
    /// Growth family, classified into a regime.
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// Rate parameter of the linear, exponential and sublinear-sqrt regimes.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Family constant c.
    #[arg(long)]
    pub c: Option<f64>,
    /// Family exponent a.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Family exponent b.
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct AsymArgs {
    /// Dimension.
    #[arg(long)]
    pub d: u32,
    /// Number of points; optional, enables the n-dependent formulas.
    #[arg(long, conflicts_with = "ln_n")]
    pub n: Option<u64>,
    /// Natural log of the number of points.
    #[arg(long = "ln-n", allow_negative_numbers = true)]
    pub ln_n: Option<f64>,
    #[command(flatten)]
    pub regime: RegimeArgs,
    /// Constant r1 of the lower range endpoint.
    #[arg(long, default_value_t = facet_heights::asymptotics::DEFAULT_R1)]
    pub r1: f64,
    /// Constant r2 of the upper range endpoint.
    #[arg(long, default_value_t = facet_heights::asymptotics::DEFAULT_R2)]
    pub r2: f64,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Number of points.
    #[arg(long)]
    pub n: u64,
    /// Dimension.
    #[arg(long)]
    pub d: u32,
    /// Number of independent replicates.
    #[arg(long, default_value_t = 1000)]
    pub reps: u64,
    /// Seed of the replicate random streams.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of d-subsets examined per replicate.
    #[arg(long, default_value_t = facet_heights::montecarlo::DEFAULT_SUBSET_CAP)]
    pub subset_cap: u64,
    /// Also write every facet (replicate, vertices, height, normal) as CSV here.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    /// Include the per-replicate data and pooled heights in the report.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub count: PointCountArgs,
    /// Dimension.
    #[arg(long)]
    pub d: u32,
    #[command(flatten)]
    pub regime: RegimeArgs,
    /// Monte Carlo replicates; 0 skips the simulation.
    #[arg(long, default_value_t = 2000)]
    pub reps: u64,
    /// Seed of the replicate random streams.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = facet_heights::montecarlo::DEFAULT_SUBSET_CAP)]
    pub subset_cap: u64,
    #[arg(long, default_value_t = facet_heights::asymptotics::DEFAULT_R1)]
    pub r1: f64,
    #[arg(long, default_value_t = facet_heights::asymptotics::DEFAULT_R2)]
    pub r2: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Point counts: a list `10,20,50` or a range `lo:hi[:step]`.
    #[arg(long)]
    pub n: String,
    /// Dimensions, in the same syntax.
    #[arg(long)]
    pub d: String,
    /// Monte Carlo replicates per grid point; 0 skips the simulation.
    #[arg(long, default_value_t = 0)]
    pub reps: u64,
    /// Seed of the replicate random streams.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = facet_heights::montecarlo::DEFAULT_SUBSET_CAP)]
    pub subset_cap: u64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Points per inequality.
    #[arg(long, default_value_t = 10_000)]
    pub points: usize,
    /// Relative slack allowed in the inequality checks.
    #[arg(long, default_value_t = 1e-12)]
    pub slack: f64,
    /// Relative tolerance for the closed-form oracle families.
    #[arg(long, default_value_t = 1e-6)]
    pub oracle_tol: f64,
}
