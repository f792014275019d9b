use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the command layer, each with a stable exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] clap::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("invalid input in {}: {message}", .path.display())]
    BadFile { path: PathBuf, message: String },
    #[error("validation failed: {0}")]
    Validation(#[from] ncdyn_core::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// `0` for help and version requests, `2` usage, `3` missing file,
    /// `4` validation, `5` i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(e) if !e.use_stderr() => 0,
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::FileNotFound(_) => 3,
            CliError::BadFile { .. } | CliError::Validation(_) | CliError::Invalid(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Io(io),
            other => CliError::Invalid(format!("{other:?}")),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
