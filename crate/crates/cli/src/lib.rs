//! Command-line front end for `trimetric-core`.
//!
//! Every command produces a document `{config, results, summary, violations}`.
//! Exit status: 0 when all checks pass, 1 when a bound is violated, 2 on
//! usage or validation errors.

pub mod args;
pub mod automorphism;
pub mod commands;
mod error;
pub mod point;
pub mod report;

pub use error::CliError;

use args::{Cli, Command};
use commands::Output;

/// Thread count from `TRIMETRIC_THREADS`; `None` (or 0) means rayon's default.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("TRIMETRIC_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(CliError::Usage(format!(
                "TRIMETRIC_THREADS must be a non-negative integer, got `{s}`"
            ))),
        },
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Compute(a) => commands::compute(a, cli.format),
        Command::Verify(a) => commands::verify(a, cli.format),
        Command::Sharpness(a) => commands::sharpness(a, cli.format),
        Command::Scan(a) => commands::scan(a, cli.format),
    }
}
