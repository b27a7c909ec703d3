mod cli;
mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::error::{CliError, CliResult};

fn init_threads() -> CliResult {
    let Ok(raw) = std::env::var("QFT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        CliError::Usage(format!(
            "QFT_THREADS must be a non-negative integer, got `{raw}`"
        ))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run() -> CliResult {
    let args = config::merge(std::env::args_os().collect())?;
    let cli = Cli::try_parse_from(args).unwrap_or_else(|e| e.exit());
    init_threads()?;
    match &cli.command {
        Command::Group(a) => commands::group::run(a),
        Command::Ray(a) => commands::ray::run(a),
        Command::Slice(a) => commands::slice::run(a),
        Command::Limitset(a) => commands::limitset::run(a),
        Command::Maskit(a) => commands::maskit::run(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qftorus: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
