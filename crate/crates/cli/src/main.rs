//! `polyginibre`: kernels, blow-up profiles, exterior moments, exact samples
//! and the verification suites from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 runtime numerical failure (including I/O).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use polyginibre::verify::Suite;

pub const THREADS_ENV: &str = "POLYGINIBRE_THREADS";
pub const MAX_RESOLUTION: usize = 4096;

#[derive(Parser, Debug)]
#[command(name = "polyginibre", version, about = "Polyanalytic Ginibre ensemble numerics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Correlation kernel Ж(z, w) on a z-grid against its full-space limit.
    Kernel(KernelArgs),
    /// Blow-up Berezin density around a center against its limiting profile.
    Blowup(BlowupArgs),
    /// Exterior-point Berezin mass and moments against harmonic measure.
    Exterior(ExteriorArgs),
    /// One exact sample of the point process.
    Sample(SampleArgs),
    /// Run verification suites and report each law.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct EnsembleArgs {
    /// Weight scale.
    #[arg(long)]
    pub m: f64,
    /// Number of analytic monomials per level.
    #[arg(long)]
    pub n: usize,
    /// Polyanalytic order (number of levels).
    #[arg(long)]
    pub q: usize,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct GridArgs {
    /// Half-width of the square grid.
    #[arg(long, default_value_t = 4.0)]
    pub extent: f64,
    /// Points per axis.
    #[arg(long, default_value_t = 101)]
    pub res: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Second kernel argument, e.g. `0.3-0.2i`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub w: Complex64,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BlowupArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Blow-up center, e.g. `0`, `0.6i`, `1`.
    #[arg(long, allow_hyphen_values = true)]
    pub center: Complex64,
    /// Profile CSV; the summary JSON goes next to it.
    #[arg(long, short, default_value = "blowup.csv")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ExteriorArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Exterior point, |z| > 1.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Complex64,
    /// Radius beyond which the escaped Berezin mass is measured.
    #[arg(long, default_value_t = 1.1)]
    pub rho: f64,
    /// Highest moment order.
    #[arg(long, default_value_t = 4)]
    pub lmax: usize,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Points CSV; the metadata JSON goes next to it.
    #[arg(long, short, default_value = "sample.csv")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: Suite,
    /// Reduced grids (m <= 200) and sample counts.
    #[arg(long)]
    pub fast: bool,
    /// Report destination; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    /// Bad input caught after parsing.
    Usage(String),
    /// A numerical or I/O failure during the run.
    Runtime(String),
    /// The run finished but some law did not hold.
    Verification(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }
}

impl From<polyginibre::Error> for Failure {
    fn from(e: polyginibre::Error) -> Self {
        use polyginibre::Error as E;
        match e {
            E::InvalidParams(_) | E::Capacity { .. } | E::Domain(_) => Failure::Usage(e.to_string()),
            E::DegenerateCenter | E::Singular(_) | E::SamplerStall { .. } => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(format!("i/o: {e}"))
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 on --help.
    let cli = Cli::parse();
    let result = init_threads().and_then(|_| match cli.command {
        Command::Kernel(a) => commands::kernel(&a),
        Command::Blowup(a) => commands::blowup(&a),
        Command::Exterior(a) => commands::exterior(&a),
        Command::Sample(a) => commands::sample(&a),
        Command::Verify(a) => commands::verify(&a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Runtime(msg) => eprintln!("runtime failure: {msg}"),
                Failure::Verification(n) => eprintln!("{n} law(s) failed"),
            }
            ExitCode::from(f.code())
        }
    }
}
