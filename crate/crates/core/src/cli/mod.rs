//! Command-line front end: argument parsing, orchestration of sweeps and
//! emission of CSV tables and SVG plots.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 numerical failure
//! (including unfolding), 4 resource limit.

mod angle;
mod commands;
mod output;
mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::spectra::SectorKind;
use crate::Error;

pub use angle::{parse_angle, parse_grid, GridSpec};
pub use output::{Cell, OutputDir, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

/// A failed invocation: message plus process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) => EXIT_USAGE,
            Error::Unfolding(_) | Error::Numerical(_) => EXIT_NUMERICAL,
            Error::Resource(_) => EXIT_RESOURCE,
        };
        let mut message = e.to_string();
        if matches!(e, Error::Unfolding(_)) {
            message.push_str(" (hint: lower --fit-degree or raise --trim)");
        }
        Failure { code, message }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tilted-ising", version, about = "Ising chain in a tilted field: spectra, entanglement, level statistics, dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    /// Number of spins.
    #[arg(long = "L")]
    pub len: usize,
    /// Ising coupling J.
    #[arg(long = "J", default_value_t = 1.0, allow_negative_numbers = true)]
    pub coupling: f64,
    /// Field strength B.
    #[arg(long = "B", default_value_t = 1.0, allow_negative_numbers = true)]
    pub field: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Seed recorded with the run; the commands themselves draw no random numbers.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct UnfoldArgs {
    /// Degree of the Chebyshev fit to the level staircase.
    #[arg(long, default_value_t = crate::chaostats::DEFAULT_FIT_DEGREE)]
    pub fit_degree: usize,
    /// Fraction of levels dropped at each spectrum edge.
    #[arg(long, default_value_t = crate::chaostats::DEFAULT_TRIM_FRACTION)]
    pub trim: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Level dynamics E_k(θ) of one sector.
    Spectrum {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = SectorKind::Even)]
        sector: SectorKind,
        /// θ grid as start:stop:count.
        #[arg(long = "theta-grid", visible_alias = "grid", default_value = "0:pi/2:200", value_parser = parse_grid, allow_hyphen_values = true)]
        grid: GridSpec,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Unfolded nearest-neighbour spacing histogram at one angle.
    Nnsd {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = SectorKind::Even)]
        sector: SectorKind,
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: f64,
        #[command(flatten)]
        unfold: UnfoldArgs,
        /// Histogram bin width in unfolded units.
        #[arg(long, default_value_t = 0.1)]
        bin_width: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// KS distances to Poisson and Wigner statistics and mean S_{L/2} across θ.
    Ks {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = SectorKind::Even)]
        sector: SectorKind,
        #[arg(long = "theta-grid", visible_alias = "grid", default_value = "0:pi/2:17", value_parser = parse_grid, allow_hyphen_values = true)]
        grid: GridSpec,
        #[command(flatten)]
        unfold: UnfoldArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Per-eigenstate localization and entanglement, and the S_l curve.
    Eigent {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = SectorKind::Even)]
        sector: SectorKind,
        /// Angle of the eigenstate table (default 7pi/16 unless only --sl-curve is asked for).
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: Option<f64>,
        /// Also emit mean S_l versus l over the central eigenstates.
        #[arg(long)]
        sl_curve: bool,
        /// Angles of the S_l curves (default pi/4, pi/3, 7pi/16, pi/2).
        #[arg(long = "theta-grid", visible_alias = "grid", value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        /// Number of central eigenstates averaged in the S_l curve.
        #[arg(long, default_value_t = 100)]
        central: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Avoided crossings of chosen levels and the entanglement near them.
    Avoided {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = SectorKind::Even)]
        sector: SectorKind,
        #[arg(long = "theta-grid", visible_alias = "grid", default_value = "0:pi/2:200", value_parser = parse_grid, allow_hyphen_values = true)]
        grid: GridSpec,
        /// Level indices k1,k2,... inside the sector; adjacent pairs are searched.
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<usize>,
        /// Bracket width at which golden-section refinement stops.
        #[arg(long, default_value_t = crate::spectra::DEFAULT_REFINE_TOL)]
        refine_tol: f64,
        /// Window edges sit where the gap reaches this multiple of its minimum.
        #[arg(long, default_value_t = 5.0)]
        window_ratio: f64,
        /// Largest half-width of a crossing window.
        #[arg(long, default_value_t = 0.05)]
        max_half_width: f64,
        /// Angles sampled across each window.
        #[arg(long, default_value_t = 41)]
        window_points: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Exact time evolution of a Bell-pair seed state.
    Evolve {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = crate::dynamics::DEFAULT_DT)]
        dt: f64,
        #[arg(long, default_value_t = crate::dynamics::DEFAULT_T_MAX)]
        tmax: f64,
        /// Sites of the initial Bell pair (default 1 2).
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
        /// Bit of every spin outside the pair (1 = down).
        #[arg(long, default_value_t = 1)]
        filler: u8,
        /// Quench threshold on the average nearest-neighbour concurrence.
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
        /// Time the average concurrence must stay below the threshold.
        #[arg(long, default_value_t = 5.0)]
        window: f64,
        #[command(flatten)]
        run: RunArgs,
    },
}

impl Command {
    fn run_args(&self) -> &RunArgs {
        match self {
            Command::Spectrum { run, .. }
            | Command::Nnsd { run, .. }
            | Command::Ks { run, .. }
            | Command::Eigent { run, .. }
            | Command::Avoided { run, .. }
            | Command::Evolve { run, .. } => run,
        }
    }
}

/// Runs a parsed command on a pool of `--workers` threads, returning the
/// files written.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>, Failure> {
    let workers = cli.command.run_args().workers;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure {
            code: EXIT_RESOURCE,
            message: format!("cannot start {workers} worker threads: {e}"),
        })?;
    pool.install(|| commands::dispatch(&cli.command))
}

/// Parses `args` (program name first) and runs the command, printing the
/// written paths on stdout. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            EXIT_OK
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
