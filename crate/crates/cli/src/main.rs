//! `twobridge`: command-line front end for layered triangulations of
//! 2-bridge link complements.
//!
//! Exit status is 0 on success, 1 for unusable input and 2 when an internal
//! verification (angle equations, volume maximization) fails.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

/// Errors that end a run, split by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or unsupported input.
    #[error("{0}")]
    Input(String),
    /// A computed object failed its own checks.
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Verification(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "twobridge",
    version,
    about = "Layered triangulations, angle structures and complexity bounds for 2-bridge links"
)]
struct Cli {
    #[command(flatten)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

/// Output format flags shared by every subcommand.
#[derive(Debug, Clone, Copy, Args)]
pub struct Format {
    /// Emit JSON (objects carry a `schema_version` field).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV where the command has tabular output.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Print only the isomorphism signature of the resulting triangulation.
    #[arg(long, global = true)]
    pub isosig: bool,
}

/// Words given on the command line or in files.
#[derive(Debug, Args)]
pub struct WordInput {
    /// Words such as `R^2LR` or `RL^3R`.
    pub words: Vec<String>,
    /// Newline-delimited word file; blank lines and `#` comments are skipped.
    #[arg(long, short)]
    pub file: Vec<PathBuf>,
}

/// Stopping rules for the volume maximizer.
#[derive(Debug, Clone, Copy, Args)]
pub struct MaximizerArgs {
    /// Target norm of the projected gradient.
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Maximum number of ascent steps.
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the layered triangulation and print its gluing table.
    Build(WordInput),
    /// Edge classes, their degrees and the degree-3/degree-4 predictions.
    Edges(WordInput),
    /// Greedy 3-2 / 4-4 simplification with its move trace.
    Simplify(WordInput),
    /// Block decomposition of the inner word.
    Blocks(WordInput),
    /// Explicit angle structure and its exact verification.
    Angles(WordInput),
    /// Explicit and maximized volumes.
    Volume {
        #[command(flatten)]
        input: WordInput,
        #[command(flatten)]
        maximizer: MaximizerArgs,
    },
    /// Complexity bounds for each word.
    #[command(after_help = output::CSV_HELP)]
    Bounds(WordInput),
    /// Bounds for every family word up to a syllable count, as CSV.
    #[command(after_help = output::CSV_HELP)]
    Survey {
        /// Largest number of inner syllables.
        #[arg(long)]
        max_n: usize,
        /// Keep only words with this many squared inner syllables.
        #[arg(long = "C", value_name = "C")]
        c: Option<u32>,
        /// Allowed inner exponents.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        exponents: Vec<u32>,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let f = cli.format;
    match cli.command {
        Command::Build(input) => commands::build(&input, f),
        Command::Edges(input) => commands::edges(&input, f),
        Command::Simplify(input) => commands::simplify(&input, f),
        Command::Blocks(input) => commands::blocks(&input, f),
        Command::Angles(input) => commands::angles(&input, f),
        Command::Volume { input, maximizer } => commands::volume(&input, maximizer, f),
        Command::Bounds(input) => commands::bounds(&input, f),
        Command::Survey { max_n, c, exponents } => commands::survey(max_n, c, &exponents, f),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
