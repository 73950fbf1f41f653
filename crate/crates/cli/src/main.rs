//! `boxdos`: spectra, staircases, densities of states, N-boson builds and
//! power-law fits for particles in rigid boxes, written as CSV.
//!
//! Exit status: 0 ok, 2 usage, 3 invalid input, 4 failed computation.

mod args;
mod commands;
mod error;
mod output;
mod reproduce;
mod source;

use std::ffi::OsString;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, RunConfig};
use crate::error::{invalid, CliError, CliResult};

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()) as u8)
}

fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("boxdos: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    let config = match (&cli.config, cli.command) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("--config replaces the subcommand; give one or the other".into()))
        }
        (None, None) => return Err(CliError::Usage("a subcommand or --config is required".into())),
        (Some(path), None) => {
            let mut config = load_config(path)?;
            if cli.out.is_some() {
                config.out = cli.out;
            }
            config
        }
        (None, Some(command)) => RunConfig {
            seed: cli.seed,
            format: cli.format,
            out: cli.out,
            command,
        },
    };
    commands::validate(&config.command)?;
    if let Some(path) = &cli.save_config {
        let text = toml::to_string(&config).map_err(|e| invalid("--save-config", e))?;
        output::write_atomic(path, text.as_bytes())?;
    }
    commands::run(&config)
}

fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid("--config", format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| invalid("--config", e))
}
