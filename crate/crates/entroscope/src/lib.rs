//! Command-line driver: argument parsing, bundled fixtures, JSON input and
//! CSV/JSON output for every toolkit crate.

pub mod args;
pub mod commands;
pub mod error;
pub mod fixtures;
pub mod input;
pub mod output;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;
use crate::error::{CliError, Result, EXIT_OK, EXIT_USAGE};
use crate::output::Header;

pub const THREADS_ENV: &str = "ENTROSCOPE_THREADS";

fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::invalid(format!("{THREADS_ENV}={s:?} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    if let Some(n) = thread_count(cli.threads)? {
        if n == 0 {
            return Err(CliError::invalid("thread count must be positive"));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let header = Header {
        version: env!("CARGO_PKG_VERSION"),
        seed: cli.seed,
        config: serde_json::to_value(&cli.command).expect("arguments serialize"),
    };
    let report = commands::run(&cli.command, cli.seed)?;
    output::emit(&report, &header, cli.json, cli.out.as_deref())
}

/// Runs the CLI on `args` and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("entroscope: {e}");
            e.exit_code()
        }
    }
}
