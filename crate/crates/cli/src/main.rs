//! `chebydev`: build extremal polynomials, run the verification suites and
//! compute best approximations from the command line.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad flags or arguments,
//! 3 a numerical routine did not converge.

mod commands;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Failure;

#[derive(Parser, Debug)]
#[command(name = "chebydev", version, about = "Multivariate polynomials of least deviation from zero")]
struct Cli {
    /// Seed for multi-start searches.
    #[arg(long, global = true, default_value_t = 20_240_501)]
    seed: u64,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build R_3, R_5 or T_d and print the family report.
    Construct(ConstructArgs),
    /// Run verification suites over a range of dimensions.
    Verify(VerifyArgs),
    /// Best uniform approximation of a monomial by exchange.
    Approx(ApproxArgs),
    /// Table of r_d with prime factorizations.
    RdTable(RdTableArgs),
    /// U_3 or U_5 sampled on a triangular grid.
    Surface(SurfaceArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    R3,
    R5,
    Td,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Dimension, used by `td`.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Signature,
    Supnorm,
    Laplacian,
    Cubature,
    Determinant,
    Combi,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// A dimension `6` or an inclusive range `3..5`.
    #[arg(long, default_value = "3..5", value_parser = verify::parse_range)]
    pub d: (usize, usize),
    /// Tolerance for floating-point certificates.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Lattice resolution for sup-norm searches; by default 24 up to d = 5, 16 beyond.
    #[arg(long)]
    pub resolution: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainArg {
    Simplex,
    Ball,
    Sphere,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisArg {
    Full,
    Symmetric,
    Even,
    EvenSymmetric,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    /// Exponents of the target monomial, e.g. `1,1,1`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub monomial: Vec<u32>,
    #[arg(long, value_enum)]
    pub domain: DomainArg,
    #[arg(long)]
    pub degree: u32,
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    #[arg(long, value_enum, default_value = "full")]
    pub basis: BasisArg,
    #[arg(long, default_value_t = 30)]
    pub max_iter: usize,
    /// Drop basis functions that vanish identically on the domain.
    #[arg(long)]
    pub drop_dependent: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct RdTableArgs {
    #[arg(long, default_value_t = 11)]
    pub max_d: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfacePoly {
    U3,
    U5,
}

#[derive(Args, Debug)]
pub struct SurfaceArgs {
    #[arg(long, value_enum)]
    pub poly: SurfacePoly,
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("CHEBYDEV_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("CHEBYDEV_THREADS must be a positive integer, got {raw:?}")))?;
    if n == 0 {
        return Err(Failure::Usage("CHEBYDEV_THREADS must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Construct(a) => commands::construct(a, out),
        Command::Verify(a) => verify::run(a, cli.seed, out),
        Command::Approx(a) => commands::approx(a, cli.seed, out),
        Command::RdTable(a) => commands::rd_table(a, out),
        Command::Surface(a) => commands::surface(a, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("chebydev: {f}");
            ExitCode::from(f.code())
        }
    }
}
