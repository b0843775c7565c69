//! Command-line surface. Every numeric default lives here.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SAMPLES: usize = 256;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_THREADS: usize = 0;
pub const DEFAULT_CUTOFF: usize = 16;
pub const DEFAULT_SAMPLE_POINTS: usize = 512;
pub const DEFAULT_GRAM_MAXDEG: usize = 8;
pub const DEFAULT_SEARCH: usize = 4;
pub const DEFAULT_BPE_MAXDEG: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    Inner,
    Pure,
    Annihilation,
    Qmatrix,
    Symmetry,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegionArg {
    Torus,
    Disk,
}

#[derive(Clone, Debug, Args)]
pub struct Global {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads; 0 picks the machine default. Output never depends on it.
    #[arg(long, default_value_t = DEFAULT_THREADS, global = true)]
    pub threads: usize,
    #[arg(long, default_value_t = DEFAULT_TOL, global = true)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES, global = true)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Toral / inner toral classification of a polynomial.
    Classify { poly: PathBuf },
    /// Polynomial convexity of the torus part of the zero set.
    Convexity { poly: PathBuf },
    /// Points of the zero set over the circle or the disk, as CSV.
    Sample {
        poly: PathBuf,
        #[arg(long, value_enum, default_value_t = RegionArg::Torus)]
        region: RegionArg,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_POINTS)]
        n: usize,
    },
    /// Minimal polynomial of the model pair of a matrix inner function.
    Minpoly { phi: PathBuf },
    /// Check one operator identity for a matrix inner function.
    Verify {
        phi: PathBuf,
        #[arg(long, value_enum)]
        identity: Identity,
        /// Truncation cutoff.
        #[arg(long = "M", default_value_t = DEFAULT_CUTOFF)]
        cutoff: usize,
        /// Distance from the cutoff below which columns are checked; defaults
        /// to half the cutoff.
        #[arg(long)]
        buffer: Option<usize>,
    },
    /// Exact Gram matrix of a torus measure.
    Gram {
        measure: PathBuf,
        #[arg(long, num_args = 2, value_names = ["N", "M"], default_values_t = [DEFAULT_GRAM_MAXDEG, DEFAULT_GRAM_MAXDEG])]
        maxdeg: Vec<usize>,
    },
    /// Lowest-degree polynomial vanishing on the support of a measure.
    Recover {
        measure: PathBuf,
        #[arg(long, num_args = 2, value_names = ["N", "M"], default_values_t = [DEFAULT_SEARCH, DEFAULT_SEARCH])]
        search: Vec<usize>,
    },
    /// Norm of point evaluation at a point of the bidisk.
    Bpe {
        measure: PathBuf,
        /// `re,im,re,im`
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
        /// One value for both variables, or two.
        #[arg(long, num_args = 1..=2, default_values_t = [DEFAULT_BPE_MAXDEG])]
        maxdeg: Vec<usize>,
    },
    /// Check `Φ F = F Ψ` on the circle and compare minimal polynomials.
    Conjcheck { phi: PathBuf, psi: PathBuf, f: PathBuf },
}

#[derive(Clone, Debug, Parser)]
#[command(name = "isopair", version, about = "Inner toral polynomials and pairs of commuting isometries")]
pub struct CommandConfig {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}
