use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use trimetric_cli::args::Cli;
use trimetric_cli::{run, threads_from_env, CliError};

fn main() -> ExitCode {
    // clap exits with status 2 on malformed arguments
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::from(1),
        Ok(false) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    if let Some(n) = threads_from_env()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let out = run(cli)?;
    match &cli.out {
        Some(path) => std::fs::write(path, &out.bytes)?,
        None => std::io::stdout().lock().write_all(&out.bytes)?,
    }
    Ok(out.violation)
}
