//! `cycdex`: exact expansions, inequality checks, identity suites and cone
//! certificates from the command line.
//!
//! Exit codes: 0 all checks pass, 2 invalid input, 3 a check failed,
//! 4 size limit exceeded, 5 precision too low to decide a sign.

mod commands;
mod config;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Settings};

/// An error with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Failure { code: 2, message: msg.into() }
    }
}

impl From<cycdex_core::Error> for Failure {
    fn from(e: cycdex_core::Error) -> Self {
        use cycdex_core::Error::*;
        let code = match e {
            InvalidInput(_) | AlphabetMismatch(..) | Parse(_) => 2,
            SizeLimit { .. } => 4,
            Inconclusive { .. } => 5,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::invalid(e.to_string())
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let settings = Settings::resolve(&cli.shared)?;
    let report = commands::dispatch(&cli.command, &settings)?;
    let mut sink: Box<dyn Write> = match &settings.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    report.render(settings.format, &mut *sink)?;
    sink.flush()?;
    Ok(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
