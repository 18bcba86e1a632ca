//! `queasylab`: reproducible batch experiments.
//!
//! Exit codes: 0 ok, 1 usage or input error, 2 only censored results,
//! 3 an internal invariant failed.

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CENSORED: u8 = 2;
pub const EXIT_INVARIANT: u8 = 3;

/// An error that carries its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> anyhow::Error {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
        .into()
    }

    pub fn invariant(message: impl Into<String>) -> anyhow::Error {
        Failure {
            code: EXIT_INVARIANT,
            message: message.into(),
        }
        .into()
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

#[derive(Debug, Parser)]
#[command(
    name = "queasylab",
    version,
    about = "Exact small-scale complexity experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON settings file; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the primary output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact C, CD and ic (and optionally the quantum measures) of one instance.
    Complexity(commands::ComplexityFlags),
    /// Reduce a factor-prefix pair to DIMACS, or invert a DIMACS file.
    Reduce(commands::ReduceFlags),
    /// Recover the largest prime factor from a pool of deciders.
    Prune(commands::PruneFlags),
    /// Monte-Carlo success curve of the rank-cut amplifier.
    Amplify(commands::AmplifyFlags),
    /// Queasiness table for a batch of instances.
    Landscape(commands::LandscapeFlags),
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("QUEASYLAB_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Failure::usage(format!("QUEASYLAB_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    configure_threads()?;
    match cli.command {
        Command::Complexity(f) => commands::complexity(f),
        Command::Reduce(f) => commands::reduce(f),
        Command::Prune(f) => commands::prune(f),
        Command::Amplify(f) => commands::amplify(f),
        Command::Landscape(f) => commands::landscape(f),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<Failure>().map_or(EXIT_USAGE, |f| f.code);
            ExitCode::from(code)
        }
    }
}
