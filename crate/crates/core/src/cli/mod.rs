//! The `toric-minres` command-line tool.

pub mod emit;
pub mod input;
pub mod random;
pub mod report;
pub mod run;
pub mod svg;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use input::{embedding_to_quadruple, parse_input, EmbeddingSpec, InputError, InputSpec};
pub use run::run;

#[derive(Debug, Parser)]
#[command(name = "toric-minres", version, about = "Exact minimal Bondal-Thomsen resolutions from a stratified torus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Input file (JSON).
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// `mp` or a contraction file; overrides the input's options.
    #[arg(long, value_name = "mp|FILE")]
    pub contraction: Option<String>,
    /// `canonical` or a harmonic basis file; overrides the input's options.
    #[arg(long = "harmonic-basis", value_name = "canonical|FILE")]
    pub harmonic_basis: Option<String>,
    /// Output formats, comma separated.
    #[arg(long, value_delimiter = ',', value_name = "report,matrices,m2,svg")]
    pub emit: Option<Vec<input::EmitFormat>>,
    /// Write artifacts to this directory instead of stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cells of the stratified torus and their classes.
    Stratify(Common),
    /// The cellular line bundle complex.
    Hhl(Common),
    /// Positive grading and the Betti table.
    Betti(Common),
    /// The minimal resolution.
    Minres(Common),
    /// Zig-zag paths between two cells, or all nonzero path sums.
    Paths {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "CELL", requires = "to")]
        from: Option<String>,
        #[arg(long, value_name = "CELL", requires = "from")]
        to: Option<String>,
    },
    /// Moore-Penrose inverse of a JSON matrix.
    Mp {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Use the hedge formula instead of the rank factorization.
        #[arg(long)]
        hedge: bool,
    },
    /// All checks on one input, or a seeded random suite without one.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Positivity-passing instances to check in the random suite.
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Picture of the stratification.
    Svg(Common),
}
