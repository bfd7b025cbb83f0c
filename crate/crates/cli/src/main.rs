//! `hypermag` command-line front end.
//!
//! Exit codes: 0 on success, 2 on domain errors (with a JSON error object
//! on standard output), 1 on I/O and usage errors.

mod commands;
mod inputs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use inputs::{parse_list, LpSpec, MeasureSpec};

/// Default seed, fixed so that runs are reproducible unless told otherwise.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Domain(#[from] hypermag::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Usage(_) | CliError::Io(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Io(_) => "Io",
            CliError::Domain(e) => e.kind(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "hypermag",
    version,
    about = "Magnitude and intrinsic volumes of convex bodies in hypermetric normed spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every random choice; the default is a fixed constant.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker count for parallel sections and Monte Carlo substreams.
    #[arg(long, global = true, env = "HYPERMAG_WORKERS", default_value_t = 1)]
    pub workers: usize,
    /// Output format; CSV is available for sweep commands only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// A finite metric space given by points, a distance matrix, or a grid
/// over a body.
#[derive(Debug, Args)]
pub struct SpaceArgs {
    /// JSON array of points (or `{"points": [...]}`).
    #[arg(long, conflicts_with_all = ["matrix", "body"])]
    pub points: Option<PathBuf>,
    /// JSON distance matrix.
    #[arg(long, conflicts_with_all = ["body", "norm", "measure"])]
    pub matrix: Option<PathBuf>,
    /// Body JSON; the space is a grid over it.
    #[arg(long)]
    pub body: Option<PathBuf>,
    /// Grid points per side when sampling a body.
    #[arg(long, default_value_t = 16)]
    pub grid_k: usize,
    /// l1, l2 or lp:P with P in [1, 2] (default l1).
    #[arg(long)]
    pub norm: Option<LpSpec>,
    /// Generating measure: l1, l2:N, random:N:SEED or a JSON file.
    #[arg(long, conflicts_with = "norm")]
    pub measure: Option<MeasureSpec>,
    /// Multiply all distances by this factor.
    #[arg(long)]
    pub scale: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BodyArg {
    /// Body JSON (`vpolytope`, `zonotope` or `box`).
    #[arg(long)]
    pub body: PathBuf,
}

#[derive(Debug, Args)]
pub struct BodyMeasureArgs {
    #[arg(long)]
    pub body: PathBuf,
    /// Generating measure: l1, l2:N, random:N:SEED or a JSON file.
    #[arg(long, default_value = "l1")]
    pub measure: MeasureSpec,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Magnitude of a finite metric space.
    Magnitude(SpaceArgs),
    /// Maximum diversity of a finite metric space, with its magnitude.
    Maxdiv {
        #[command(flatten)]
        space: SpaceArgs,
        /// Certification threshold for the KKT residual.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// ℓ1 intrinsic volumes V′_m.
    L1iv(BodyArg),
    /// Holmes–Thompson intrinsic volumes for a generating measure.
    Htiv(BodyMeasureArgs),
    /// Upper bounds on magnitude from Holmes–Thompson intrinsic volumes.
    #[command(after_help = "CSV columns: t,sum_bound,exp_bound")]
    Bound {
        #[command(flatten)]
        args: BodyMeasureArgs,
        /// Comma-separated scales for a sweep over tK.
        #[arg(long, value_parser = parse_list)]
        ts: Option<std::vec::Vec<f64>>,
    },
    /// Exact magnitude of a full-dimensional body in ℓ1.
    L1exact(BodyArg),
    /// Volume product of a zonotope and its polar against 4ⁿ/n!.
    #[command(after_help = "CSV columns: t,lower,upper,upper_leading,ok")]
    Mahler {
        /// JSON array of generators (or `{"generators": [...]}`).
        #[arg(long, conflicts_with = "body", required_unless_present = "body")]
        generators: Option<PathBuf>,
        /// A centered zonotope or box body instead of generators.
        #[arg(long)]
        body: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Comma-separated scales for the magnitude comparison rows.
        #[arg(long, value_parser = parse_list)]
        ts: Option<std::vec::Vec<f64>>,
    },
    /// Greedy ε-packing and the counting-measure magnitude bound.
    #[command(
        after_help = "CSV columns: epsilon,N,t_star,mag_lower,counting_bound,d_max,v1_ratio,ok"
    )]
    Sudakov {
        #[arg(long)]
        body: PathBuf,
        /// Comma-separated separations.
        #[arg(long, value_parser = parse_list, default_value = "0.1,0.2,0.4")]
        epsilon: std::vec::Vec<f64>,
        /// Candidate grid points per side (default depends on dimension).
        #[arg(long)]
        grid_k: Option<usize>,
        /// Norm for distances (default l2).
        #[arg(long)]
        norm: Option<LpSpec>,
    },
    /// Volume of K + t[0,1]ⁿ against the V′ polynomial.
    #[command(after_help = "CSV columns: t,minkowski,polynomial,abs_dev,rel_dev")]
    Steiner {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, value_parser = parse_list, default_value = "0.25,0.5,1,2")]
        ts: std::vec::Vec<f64>,
    },
    /// Lattice point count against the ℓ1 Wills functional.
    Wills(BodyArg),
    /// First-order slope of grid magnitude at small scales.
    #[command(
        after_help = "CSV columns: t,grid_magnitude,slope,exact_slope,bound,ok,finite_bound,ok_finite"
    )]
    Smallt {
        #[command(flatten)]
        args: BodyMeasureArgs,
        #[arg(long, value_parser = parse_list, default_value = "0.1,0.05,0.01")]
        ts: std::vec::Vec<f64>,
        /// Grid points per side (default depends on dimension).
        #[arg(long)]
        grid_k: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let obj = json!({
                "command": commands::name(&cli.command),
                "error": {"kind": e.kind(), "message": e.to_string()},
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&obj).expect("JSON values always serialize")
            );
            if !matches!(e, CliError::Domain(_)) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    if cli.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    // a second initialization only happens in tests and is harmless
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build_global();
    let report = commands::dispatch(cli)?;
    match cli.format {
        Format::Json => Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&report.to_json()).expect("JSON values always serialize")
        )),
        Format::Csv => match &report.table {
            Some(t) => Ok(t.to_csv(&report.digest())),
            None => Err(CliError::Usage(format!(
                "--format csv is only available for sweep commands, not `{}`",
                report.command
            ))),
        },
    }
}
