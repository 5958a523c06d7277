//! `lamperti`: generate ensembles, move between stationary processes, their
//! noises and self-similar processes, and verify the results.
//!
//! Exit codes: 0 success, 1 a `verify` check failed, 2 usage or validation
//! error, 3 I/O error.

mod args;
mod commands;
mod config;
mod data;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<lamperti_core::Error> for CliError {
    fn from(e: lamperti_core::Error) -> Self {
        match e {
            lamperti_core::Error::Io(_) => Self::io(e.to_string()),
            _ => Self::usage(e.to_string()),
        }
    }
}

fn run(raw: Vec<OsString>) -> Result<commands::Outcome, CliError> {
    let raw = match config::config_path(&raw) {
        Some(file) => config::splice(raw, &PathBuf::from(file))?,
        None => raw,
    };
    let cli = Cli::try_parse_from(raw).unwrap_or_else(|e| e.exit());
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Transform(a) => commands::transform(a),
        Command::Solve(a) => commands::solve(a),
        Command::Extract(a) => commands::extract(a),
        Command::VerifyNoise(a) => commands::verify_noise(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(outcome) => {
            println!("{}", outcome.message);
            match outcome.verdict {
                Some(false) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
