use std::process::ExitCode;

use mastkit::Error;
use thiserror::Error as ThisError;

/// Failures of a CLI command, each mapped to a fixed exit code.
#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("trees are on different taxon sets")]
    TaxaMismatch,
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Verification(String),
    #[error("the set is not an agreement set")]
    Disagree,
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Disagree => 1,
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse(_) => 2,
            CliError::TaxaMismatch => 3,
            CliError::Cap(_) => 4,
            CliError::Verification(_) => 5,
        })
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Tree(t) => CliError::Parse(t.to_string()),
            Error::TaxaMismatch => CliError::TaxaMismatch,
            Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            Error::Generator(_) => CliError::Usage(e.to_string()),
            Error::Precondition(_) | Error::Invariant(_) => CliError::Verification(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(format!("csv output: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("json output: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
