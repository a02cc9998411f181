//! The `stp` command-line tool.

pub mod commands;
pub mod edgelist;
pub mod formats;
pub mod json;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use commands::run;

/// Failures with their process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] stp_core::Error),
    #[error("verification failed")]
    VerificationFailed,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn parse(line: usize, msg: impl std::fmt::Display) -> Self {
        CliError::Parse(format!("line {line}: {msg}"))
    }

    pub fn exit_code(&self) -> i32 {
        use stp_core::Error as E;
        match self {
            CliError::Parse(_) => 2,
            CliError::Core(E::Input(_) | E::NotBiconnected(_)) => 2,
            CliError::Core(E::Disconnected) => 3,
            CliError::Core(E::Capacity { .. } | E::Overflow(_)) => 4,
            CliError::Core(E::Invalid { .. } | E::DuplicateRow(..)) => 5,
            CliError::VerificationFailed => 5,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "stp", version, about = "Facets of spanning-tree polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the facet description of P(G).
    Facets(FacetsArgs),
    /// List locked subgraphs of every 2-connected block.
    Locked(LockedArgs),
    /// List parallel and coparallel closures with essentiality.
    Closures(ClosuresArgs),
    /// Show the block decomposition.
    Blocks(BlocksArgs),
    /// Print an alternative system with some rows in complemented form.
    Alt(AltArgs),
    /// Check a SystemJSON file against the spanning trees of a graph.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Ine,
    Lp,
    Text,
}

#[derive(Debug, Args)]
pub struct Limits {
    /// Largest block size (vertices) for the locked-subgraph scan.
    #[arg(long)]
    pub max_n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Declare 0 <= x <= 1 for every variable in LP output.
    #[arg(long)]
    pub relaxed_bounds: bool,
    /// Check the output with the brute-force oracle; report on stderr.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct FacetsArgs {
    /// Edge-list file.
    pub input: String,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Debug, Args)]
pub struct LockedArgs {
    pub input: String,
    #[arg(long)]
    pub json: bool,
    /// Also list induced 2-connected subgraphs that are not locked, with reasons.
    #[arg(long, short)]
    pub verbose: bool,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Debug, Args)]
pub struct ClosuresArgs {
    pub input: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BlocksArgs {
    pub input: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct AltArgs {
    pub input: String,
    /// Parallel rows to complement: `all`, an index, or labels joined by `+`.
    #[arg(long, value_delimiter = ',')]
    pub flip_parallel: Vec<String>,
    /// Coparallel rows to complement.
    #[arg(long, value_delimiter = ',')]
    pub flip_coparallel: Vec<String>,
    /// Locked rows to complement (edge or vertex labels).
    #[arg(long, value_delimiter = ',')]
    pub flip_locked: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Edge-list file.
    pub input: String,
    /// SystemJSON file whose coefficients use the input's edge labels.
    pub system: String,
    /// Skip the convex-hull comparison.
    #[arg(long)]
    pub no_hull: bool,
}
