use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

mod commands;

/// Collared tiles, Anderson-Putnam complexes and hull cohomology of the
/// pentagonal substitution tiling.
#[derive(Debug, Parser)]
#[command(name = "tilespace", version)]
pub struct Cli {
    /// Directory holding tiles.csv, edges.csv, vertices.csv and rules.csv.
    /// The embedded tables are used when neither this nor
    /// TILESPACE_DATASET is set.
    #[arg(long, global = true, env = "TILESPACE_DATASET", value_name = "DIR")]
    pub dataset: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, value_name = "FMT")]
    pub format: Option<Format>,

    /// Seed for the random demos.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    pub seed: u64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Export {
    Dot,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural checks over the dataset.
    Validate,
    /// Derive the collared tiles from the two patterns and compare.
    Enumerate,
    /// Incidence statistics between tiles, edges and vertices.
    Incidence,
    /// Edge-level border forcing.
    Forcing {
        /// Check the uncollared projection instead.
        #[arg(long)]
        uncollared: bool,
        /// Number of substitutions applied before comparing.
        #[arg(long, default_value_t = 1)]
        depth: u32,
    },
    /// The cell complex and the substitution chain maps.
    Complex {
        #[arg(long, value_enum, default_value = "json")]
        export: Export,
        /// Include face nodes in DOT output.
        #[arg(long)]
        faces: bool,
    },
    /// Cohomology of the complex and of the tiling space.
    Cohomology {
        /// Same as --format json.
        #[arg(long)]
        json: bool,
    },
    /// The collared Fibonacci substitution.
    Fib,
    /// Collared rules and cohomology for a one-dimensional substitution.
    Subst1d {
        /// File of `symbol -> word` lines.
        #[arg(long, value_name = "FILE")]
        rules: PathBuf,
    },
    /// Random walk on the threads of the inverse limit.
    Shift {
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Number of shift steps in each direction.
        #[arg(long, default_value_t = 2)]
        steps: usize,
    },
    /// The complex as a Graphviz digraph.
    ExportDot {
        #[arg(long)]
        faces: bool,
    },
}

/// A rendered report and whether its checks passed.
pub struct Outcome {
    pub body: String,
    pub passed: bool,
}

fn emit(cli: &Cli, body: &str) -> Result<()> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli).and_then(|o| emit(&cli, &o.body).map(|_| o.passed));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
