//! CLI error classes mapped to exit codes: usage errors exit 1, data and
//! computation errors exit 2.

use std::fmt;

#[derive(Debug, Clone)]
pub enum CliError {
    /// Misuse of the command line or configuration: exit code 1.
    Usage(String),
    /// Bad input data or a failed computation: exit code 2.
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<jade_core::Error> for CliError {
    fn from(e: jade_core::Error) -> Self {
        match e {
            jade_core::Error::Unknown(_) => CliError::Usage(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}
