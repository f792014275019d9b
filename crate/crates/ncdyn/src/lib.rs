#![doc = include_str!("../README.md")]

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

pub mod codec;
mod commands;
pub mod error;
pub mod json;
pub mod sweep;

pub use error::{CliError, Result};

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "NCDYN_SEED";

#[derive(Debug, Parser)]
#[command(name = "ncdyn", version, about = "Finite-dimensional noncommutative dynamics toolkit")]
pub struct Cli {
    /// Seed for randomized runs; NCDYN_SEED takes precedence.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues (nonincreasing) and eigenvectors of a Hermitian matrix.
    Eig {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Lower bound on the interaction from past and future eigenvalue lists.
    InteractionBound {
        #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
        minus: Vec<f64>,
        #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
        plus: Vec<f64>,
    },
    /// CP semigroups generated by GKLS generators.
    #[command(subcommand)]
    Cp(CpCommand),
    /// Moment polynomial of a semigroup at a time tuple.
    #[command(group(ArgGroup::new("semigroup").required(true).args(["gen", "map"])))]
    Moments {
        /// GKLS generator (continuous time).
        #[arg(long)]
        gen: Option<PathBuf>,
        /// Single CP map (integer times).
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
        times: Vec<f64>,
        /// Array of matrices, one per time.
        #[arg(long)]
        mats: PathBuf,
    },
    /// Minimal Stinespring dilation of a CP map.
    Dilate(DilateArgs),
    /// Sections of the free product semigroup and the E0 expectation.
    #[command(subcommand)]
    Freeprod(FreeprodCommand),
    /// Index of the exponential product system spanned by a set of units.
    Index {
        #[arg(long)]
        units: PathBuf,
        /// Units of a second system; also reports the index of the product.
        #[arg(long)]
        with: Option<PathBuf>,
    },
    /// Gauge group arithmetic.
    #[command(subcommand)]
    Gauge(GaugeCommand),
    /// Off-white noise Gram operators and quasiorthogonality.
    #[command(subcommand)]
    Offwhite(OffwhiteCommand),
    /// Deterministic parameter sweep emitting CSV.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CpCommand {
    /// Generator whose unique invariant state has the given spectrum.
    Stationary {
        #[arg(long, required = true, value_delimiter = ',')]
        spectrum: Vec<f64>,
    },
    /// The map P_t = exp(tL), optionally applied to a state.
    Evolve {
        #[arg(long)]
        gen: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Density matrix to evolve in the Schrödinger picture.
        #[arg(long)]
        state: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
pub struct DilateArgs {
    #[arg(long, required = true)]
    pub map: Option<PathBuf>,
    #[command(subcommand)]
    pub action: Option<DilateCommand>,
}

#[derive(Debug, Subcommand)]
pub enum DilateCommand {
    /// Expectation computed by summing over Kraus words.
    Expect {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, required = true, value_delimiter = ',')]
        times: Vec<u32>,
        #[arg(long)]
        mats: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum FreeprodCommand {
    /// Convolution product of two sections.
    Mul {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
    },
    /// Adjoint of a section.
    Star {
        #[arg(long)]
        section: PathBuf,
    },
    /// E0 of a section for the semigroup of a generator or a map.
    #[command(group(ArgGroup::new("semigroup").required(true).args(["gen", "map"])))]
    Expect {
        #[arg(long)]
        section: PathBuf,
        #[arg(long)]
        gen: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GaugeCommand {
    /// Product of two elements.
    Mul {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
    },
    /// Inverse of an element.
    Inverse {
        #[arg(long)]
        element: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum OffwhiteCommand {
    /// Gram matrix of cell indicators on a uniform grid, written as CSV.
    Gram {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long)]
        delta: Option<f64>,
        /// Interval endpoints `a,b`.
        #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true, num_args = 1)]
        interval: Vec<f64>,
        /// Number of cells.
        #[arg(long)]
        n: usize,
        /// CSV destination; a JSON summary goes to stdout. Without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest singular value and HS defect of the sum map across refinements.
    Quasi {
        #[arg(long, default_value_t = 2.0)]
        theta: f64,
        #[arg(long)]
        delta: Option<f64>,
        /// Flat list of endpoints `a1,b1,a2,b2,...`.
        #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
        intervals: Vec<f64>,
        /// Cells per unit length at each level.
        #[arg(long, required = true, value_delimiter = ',')]
        refine: Vec<usize>,
    },
}

/// Parses `args` (including the program name) and runs the command,
/// honoring `NCDYN_SEED`. Returns the text destined for stdout.
pub fn run<I, T>(args: I) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var(SEED_ENV).ok())
}

/// [`run`] with the seed override passed explicitly.
pub fn run_with_env<I, T>(args: I, env_seed: Option<String>) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let seed = match env_seed {
        Some(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got {s:?}")))?,
        None => cli.seed.unwrap_or(0),
    };
    commands::execute(cli.command, seed)
}
