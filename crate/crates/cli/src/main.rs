//! `hfree`: run, track and analyse the H-free random graph process.

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "hfree", version, about = "Simulate and analyse the H-free random graph process")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a graph and optionally a rooted pair (Γ, A).
    Analyze(commands::AnalyzeArgs),
    /// Run replicates and write per-seed traces plus a summary.
    Run(commands::RunCmdArgs),
    /// Sample catalogued extension variables at checkpoints.
    Track(commands::TrackArgs),
    /// Count small subgraphs at checkpoints.
    Census(commands::CensusArgs),
    /// Fit a power law in n to a sweep or an `n,value` CSV.
    Fit(commands::FitArgs),
    /// Tabulate the closed-form trajectories.
    Traj(commands::TrajArgs),
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input or configuration (exit 2).
    Invalid(String),
    /// File system failure (exit 3).
    Io { path: PathBuf, source: std::io::Error },
    /// Failure while running (exit 3).
    Runtime(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Io { .. } | CliError::Runtime(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(msg) => write!(f, "{msg}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<hfree_core::Error> for CliError {
    fn from(e: hfree_core::Error) -> Self {
        match e {
            hfree_core::Error::Io(_) | hfree_core::Error::Observer { .. } => CliError::Runtime(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => commands::analyze(&a),
        Command::Run(a) => commands::run(&a),
        Command::Track(a) => commands::track(&a),
        Command::Census(a) => commands::census(&a),
        Command::Fit(a) => commands::fit(&a),
        Command::Traj(a) => commands::traj(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
