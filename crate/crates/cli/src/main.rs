//! `chordspan`: build, measure, enumerate and verify maximal outerplanar
//! graphs from the command line.
//!
//! Payload goes to stdout, diagnostics to stderr. Exit status is 0 on
//! success, 1 when a verification, validation or search fails, and 2 for
//! usage errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "chordspan",
    version,
    about = "Total chord length of maximal outerplanar graphs"
)]
struct Cli {
    #[command(flatten)]
    limits: Limits,
    #[command(subcommand)]
    command: Command,
}

/// Limits shared by every subcommand.
#[derive(Debug, Clone, Copy, Args)]
struct Limits {
    /// Largest order that may be enumerated without --force.
    #[arg(long, global = true, env = "CHORDSPAN_ENUM_CAP", default_value_t = chordspan::enumeration::DEFAULT_ENUM_CAP, value_parser = positive)]
    enum_cap: usize,
    /// Maximum flips away from the starting graph in a witness search
    /// (default: the order).
    #[arg(long, global = true, env = "CHORDSPAN_SEARCH_DEPTH")]
    search_depth: Option<usize>,
    /// Maximum states generated by one witness search.
    #[arg(long, global = true, env = "CHORDSPAN_SEARCH_FRONTIER", default_value_t = 100_000, value_parser = positive)]
    search_frontier: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a greedy, shell or random graph.
    Build {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Seed for --kind random.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Summarize a graph document read from a file or stdin.
    Tcl {
        /// Path to a JSON graph document; `-` or nothing reads stdin.
        input: Option<PathBuf>,
    },
    /// Enumerate every triangulation of the n-gon and print statistics.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Check a theorem by exhaustive enumeration over a range of orders.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Inclusive range `A..B` (or a single value). For theta the range is
        /// over k.
        #[arg(long)]
        n_range: String,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Print the range of total chord lengths, or a witness for one value.
    Spectrum {
        #[arg(long)]
        n: usize,
        /// Target total chord length.
        #[arg(long)]
        witness: Option<u64>,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Convert a graph document to DOT or canonical JSON.
    Export {
        /// Path to a JSON graph document; `-` reads stdin.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
        format: ExportFormat,
    },
}

#[derive(Debug, Clone, Copy, Args)]
struct RunOpts {
    /// Enumerate above the cap.
    #[arg(long)]
    force: bool,
    /// Worker threads for enumeration (default: all available).
    #[arg(long, value_parser = positive)]
    workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Greedy,
    Shell,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Summary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Min,
    Max,
    Ears,
    Theta,
    Spectrum,
}

fn positive(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// How a command failed.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Failed(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Failed(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `chordspan --help` for usage");
            ExitCode::from(2)
        }
        Err(Failure::Failed(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
