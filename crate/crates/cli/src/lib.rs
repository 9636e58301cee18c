//! Batch front-end for `kernelbench`: parses test functions and points,
//! runs the verification commands and renders CSV reports.
//!
//! Exit codes: 0 success, 1 a command's own check failed, 2 usage or parse
//! error, 3 numerical failure.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use config::{Cli, CommandKind, ConvergenceCase, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] kernelbench::Error),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use kernelbench::Error as E;
        match self {
            CliError::Usage(_) | CliError::Output(_) => 2,
            CliError::Core(e) => match e {
                E::NearSingular { .. } | E::MassCheck { .. } | E::NonFinite { .. } | E::MixedPiPowers(..) => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub csv: String,
    /// False when the command's own check failed (exit code 1).
    pub passed: bool,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Runs `cfg` on a dedicated pool when a thread count is given.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| commands::run(cfg)),
        None => commands::run(cfg),
    }
}

fn deliver(cfg: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => std::fs::write(path, &outcome.csv)
            .map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(outcome.csv.as_bytes())
            .map_err(|e| CliError::Output(e.to_string())),
    }
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|cfg| {
        let outcome = execute(&cfg)?;
        deliver(&cfg, &outcome)?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            for note in &outcome.notes {
                eprintln!("{note}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
