//! Command-line front end: `classify`, `construct`, `verify` and `fb-grid`.
//!
//! Every command writes a JSON report that embeds its [`RunManifest`] into
//! `--out`, prints a text or JSON rendering to stdout, and exits with a code
//! that depends only on the result.

mod classify;
mod construct;
mod fbgrid;
mod manifest;
mod verify;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use construct::{construct, Check, ConstructKind, ConstructSummary};
pub use fbgrid::{fb_grid, FbGridReport};
pub use manifest::{digest, write_atomic, Report, RunManifest};
pub use verify::resolve_config;

/// Exit codes shared by all commands.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const USAGE: i32 = 64;
    pub const CONFIG: i32 = 65;
    pub const TRANSFORM: i32 = 66;
    pub const F1: i32 = 67;
    pub const F2: i32 = 68;
    pub const IO: i32 = 74;
}

/// Square lattice `Z^4` with the single offset 0, used when `verify` is
/// given no lattice file.
pub const SQUARE_LATTICE_FIXTURE: &str = include_str!("../../fixtures/square_lattice.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "domlab", version, about = "Dominability classifier and verifier for explicit maps from C^2")]
pub struct Cli {
    /// Directory for reports and data files
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Seed for sampled points [default: 0, or the seed of --config/--manifest]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads [default: all cores]
    #[arg(long, global = true, env = "DOMLAB_THREADS")]
    pub threads: Option<usize>,
    /// Rendering printed to stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide dominability from a JSON surface descriptor
    Classify {
        /// Descriptor file
        input: PathBuf,
    },
    /// Evaluate a fiberwise map on a grid and self-check it
    Construct(ConstructArgs),
    /// Verify bidisk avoidance for a lattice and write a certificate
    Verify(VerifyArgs),
    /// Evaluate the Henon basin map on a 4-dimensional grid
    FbGrid(FbGridArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub kind: ConstructKind,
    /// Section omitted by graph-complement
    #[arg(long, default_value = "1/z", allow_hyphen_values = true)]
    pub s: String,
    /// First section omitted by double-section
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub u: String,
    /// Second section omitted by double-section
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    pub v: String,
    /// Polynomial factor of twist
    #[arg(long, default_value = "z", allow_hyphen_values = true)]
    pub p: String,
    /// Rational summand of twist
    #[arg(long, default_value = "1/(z-1)", allow_hyphen_values = true)]
    pub q: String,
    /// Grid side: the z grid has grid x grid points
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
    /// Half-width of the square z grid around 0
    #[arg(long, default_value_t = 2.0)]
    pub extent: f64,
    /// Fiber coordinates sampled per z
    #[arg(long, default_value_t = 4)]
    pub w_samples: usize,
    /// Fibers used for the surjectivity spot check
    #[arg(long, default_value_t = 20)]
    pub fibers: usize,
    /// Random targets solved per fiber
    #[arg(long, default_value_t = 50)]
    pub targets: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Lattice JSON file [default: bundled square lattice]
    pub lattice: Option<PathBuf>,
    /// Flat key = value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Report or run.json of an earlier run to replay
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Half-size of the verification window [default: 10]
    #[arg(long)]
    pub window: Option<f64>,
    /// Seeded interior samples per bidisk [default: 16]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Strip half-width, sets r = epsilon/2 [default: max_epsilon(log 32, 1/16)]
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Bidisk radius [default: epsilon/2]
    #[arg(long)]
    pub r: Option<f64>,
    /// Quadrature tolerance [default: 1e-9]
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Iteration cap for the basin map [default: 200]
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Also write the images of bidisk centers to points.csv
    #[arg(long)]
    pub points_csv: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FbGridArgs {
    /// Points per real axis
    #[arg(long, default_value_t = 6)]
    pub grid: usize,
    /// Grid spans [-extent, extent] on each real axis
    #[arg(long, default_value_t = 1.0)]
    pub extent: f64,
    /// Convergence tolerance of the limit
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Iteration cap
    #[arg(long, default_value_t = 200)]
    pub nmax: usize,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::PASS };
            let _ = e.print();
            code
        }
    }
}

pub fn run(cli: &Cli) -> i32 {
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return exit::USAGE;
        }
        // Fails only if a pool already exists, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = match &cli.command {
        Command::Classify { input } => classify::run(cli, input),
        Command::Construct(a) => construct::run(cli, a),
        Command::Verify(a) => verify::run(cli, a),
        Command::FbGrid(a) => fbgrid::run(cli, a),
    };
    match result {
        Ok(code) => code,
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            code
        }
    }
}

#[derive(Debug)]
pub(crate) struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

pub(crate) fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::new(exit::USAGE, format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn write_output(cli: &Cli, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let path = cli.out.join(name);
    write_atomic(&path, bytes).map_err(|e| CliError::new(exit::IO, format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

pub(crate) fn emit(cli: &Cli, json: &str, text: impl FnOnce() -> String) {
    match cli.format {
        Format::Json => print!("{json}"),
        Format::Text => print!("{}", text()),
    }
}

pub(crate) fn elapsed_ms(start: std::time::Instant) -> u64 {
    start.elapsed().as_millis() as u64
}
