//! The `fiq` experiment runner: subcommands, JSON run configs and the
//! provenance-stamped files each run writes.

pub mod commands;
pub mod config;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use output::Context;

#[derive(Parser, Debug, Clone)]
#[command(name = "fiq", version, about = "Finite-information quantity experiments")]
pub struct Cli {
    /// JSON run config; defaults are used for missing fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the config's seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for the resolved config, payload files and run log.
    /// Without it payloads go to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Payload format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Per-bit propensities and information content of a Fiq literal.
    Info {
        /// Literal such as `10?(1/4)*`; overrides the config's `literal`.
        literal: Option<String>,
    },
    /// Evolve a Fiq under a map with the fiq or tape model.
    Evolve,
    /// Compare fiq-model and tape-model ensembles statistically.
    Compare,
    /// Binary measurements decided by split hidden variables.
    Qmeasure,
    /// Divergence times of inputs that differ first at bit k + 1.
    Diverge,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for invalid input or I/O failures, 2 for runs that started but hit
    /// a budget or undecided-comparison limit.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io { .. } => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Info { literal } => commands::info::run(cli, literal.as_deref()),
        Command::Evolve => commands::evolve::run(cli),
        Command::Compare => commands::compare::run(cli),
        Command::Qmeasure => commands::qmeasure::run(cli),
        Command::Diverge => commands::diverge::run(cli),
    }
}
