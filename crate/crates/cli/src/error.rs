use orbit_transfer::Error;
use std::fmt;

/// Failure categories, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Residual(String),
    Diverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Residual(_) => 3,
            CliError::Diverged(_) => 4,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Residual(m) => write!(f, "identity residual failure: {m}"),
            CliError::Diverged(m) => write!(f, "simulation diverged: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Validation { .. } | Error::Json(_) => CliError::Validation(e.to_string()),
            Error::Diverged { .. } => CliError::Diverged(e.to_string()),
            Error::InvalidParameter { .. } | Error::Domain(_) | Error::Io(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
