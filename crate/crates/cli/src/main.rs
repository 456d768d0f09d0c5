//! `heun-connect`: local solutions, connection matrices and feasibility
//! scans for the symmetric general Heun equation.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad input, 3 degenerate
//! configuration, 4 domain violation, 5 non-convergence.

mod commands;
mod input;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use heun_connect::{ErrorClass, C64};

use input::{parse_complex, parse_resolution, parse_window, ConfigArgs};

#[derive(Debug, Parser)]
#[command(name = "heun-connect", version, about = "Connection problem for the symmetric general Heun equation")]
struct Cli {
    /// Worker threads for scans.
    #[arg(long, global = true, env = "HEUN_CONNECT_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derived parameters, exponents and the standard-form map.
    Params {
        #[command(flatten)]
        input: ConfigArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Connection matrix between the Frobenius pairs at z_k and z_l.
    Connect {
        #[command(flatten)]
        input: ConfigArgs,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        k: u8,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        l: u8,
        /// Matching point `re,im`; defaults to the best point of the overlap.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        at: Option<C64>,
        /// Fixed truncation order (disables adaptive extension).
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..=4096))]
        n_terms: Option<u16>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All pairwise connection matrices, through the origin when possible.
    Atlas {
        #[command(flatten)]
        input: ConfigArgs,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..=4096))]
        n_terms: Option<u16>,
        /// Directory receiving one JSON file per matrix.
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Raster scans of the feasibility regions.
    Scan {
        #[command(subcommand)]
        kind: ScanCommand,
    },
    /// Runs the invariant checks on one configuration.
    Verify {
        #[command(flatten)]
        input: ConfigArgs,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..=4096))]
        n_terms: Option<u16>,
        /// Tolerance of the algebraic identities.
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        /// Seed for the sample directions.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, clap::Args)]
struct RasterOut {
    /// Cell resolution, `n` or `n1xn2`.
    #[arg(long, value_parser = parse_resolution, default_value = "256")]
    resolution: (usize, usize),
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    ppm: Option<PathBuf>,
    /// Summary JSON path (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ScanCommand {
    /// Condition A over the (Φ1, Φ2) torus.
    A {
        #[command(flatten)]
        raster: RasterOut,
    },
    /// Conditions A and B over the torus for one cross-ratio value.
    Ab {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        a: C64,
        #[command(flatten)]
        raster: RasterOut,
    },
    /// Cross-ratio values admitting a frame where A and B hold.
    Dmn {
        /// Resolution of the inner angle grid.
        #[arg(long, default_value_t = 128)]
        phi_resolution: usize,
        /// Window `re0,re1,im0,im1`.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true, default_value = "-6,7,-6,6")]
        window: heun_connect::regions::AWindow,
        #[command(flatten)]
        raster: RasterOut,
    },
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Lib(heun_connect::Error),
    Io(String),
    VerifyFailed,
}

impl From<heun_connect::Error> for CliError {
    fn from(e: heun_connect::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Lib(e) => match e.class() {
                ErrorClass::Parameter => 2,
                ErrorClass::Degeneracy => 3,
                ErrorClass::Domain => 4,
                ErrorClass::Convergence => 5,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "invalid input: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "cannot write output: {m}"),
            CliError::VerifyFailed => write!(f, "one or more checks failed"),
        }
    }
}

fn configure_pool(jobs: Option<usize>, scan: bool) -> Result<heun_connect::Execution, CliError> {
    let threads = match (jobs, scan) {
        (Some(0), _) => return Err(CliError::Parse("--jobs must be positive".into())),
        (Some(n), true) => n,
        (None, true) => 0,
        (_, false) => 1,
    };
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(if threads == 1 { heun_connect::Execution::Sequential } else { heun_connect::Execution::Parallel })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let exec = configure_pool(cli.jobs, matches!(cli.command, Command::Scan { .. }))?;
    let n = |t: Option<u16>| t.map(usize::from);
    match cli.command {
        Command::Params { input, out } => commands::params(&input.load()?, out.as_deref()),
        Command::Connect { input, k, l, at, n_terms, out } => {
            commands::connect(&input.load()?, k.into(), l.into(), at, n(n_terms), out.as_deref())
        }
        Command::Atlas { input, n_terms, dir, out } => {
            commands::atlas(&input.load()?, n(n_terms), dir.as_deref(), out.as_deref())
        }
        Command::Scan { kind } => commands::scan(kind, exec),
        Command::Verify { input, n_terms, tolerance, seed, out } => {
            if !(tolerance > 0.0 && tolerance <= 1e-2) {
                return Err(CliError::Parse("--tolerance must lie in (0, 1e-2]".into()));
            }
            let report = verify::run(&input.load()?, n(n_terms), tolerance, seed);
            output::emit(&report, out.as_deref())?;
            if report.passed {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("heun-connect: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
