//! Orchestration for the `uinf` command-line tool: configuration, suite
//! dispatch and report emission.

pub mod config;
pub mod report;
pub mod suites;

use std::ffi::OsString;

use clap::Parser;
use thiserror::Error;

pub use config::{Args, RunConfig, Suite};
pub use report::{emit_report, Report, Row};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Compute(#[from] uinf_core::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED_ROWS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_COMPUTE: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Compute(_) => EXIT_COMPUTE,
        }
    }
}

/// Runs the configured suite, writes the report (and CSV when requested) and
/// returns it.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let rows = suites::run_suite(cfg)?;
    let report = Report::new(cfg.suite.name(), rows, cfg.seed);
    emit_report(&report, cfg.out.as_deref())?;
    if let Some(path) = &cfg.csv {
        report::write_csv(path, &suites::csv_samples(cfg)?)?;
    }
    Ok(report)
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = RunConfig::from_args(&args).and_then(|cfg| run(&cfg));
    match outcome {
        Ok(report) if report.passed() => EXIT_OK,
        Ok(report) => {
            for row in report.rows.iter().filter(|r| r.verdict == uinf_core::mc_harness::Verdict::Fail) {
                eprintln!("FAIL {}", row.name);
            }
            EXIT_FAILED_ROWS
        }
        Err(e) => {
            eprintln!("uinf: {e}");
            e.exit_code()
        }
    }
}
