//! Command-line front end: instance files, subcommands and certificate reports.

pub mod commands;
pub mod format;
pub mod report;

use clap::Parser;
use flipkit::ErrorClass;
use thiserror::Error;

pub use commands::Cli;
pub use format::InstanceFile;
pub use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] flipkit::Error),
}

impl CliError {
    /// 0 for verdicts (negative ones included), 1 input, 2 capacity, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Core(e) => match e.class() {
                ErrorClass::Verdict => 0,
                ErrorClass::Input => 1,
                ErrorClass::Capacity => 2,
                ErrorClass::Internal => 3,
            },
        }
    }
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match commands::execute(&cli) {
        Ok(report) => Outcome {
            code: 0,
            stdout: report.render(),
            stderr: String::new(),
        },
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                Outcome {
                    code,
                    stdout: Report::refusal(cli.command.name(), &e).render(),
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: format!("error: {e}\n"),
                }
            }
        }
    }
}
