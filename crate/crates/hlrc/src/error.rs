use std::path::Path;

use hlrc_core::code::CodeError;
use hlrc_core::recovery::RecoveryError;
use hlrc_core::sim::SimError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Unreadable or malformed input or output files.
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const SPEC: i32 = 3;
    pub const MISMATCH: i32 = 4;
    pub const RECOVERY: i32 = 5;
    pub const BUDGET: i32 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Format(String),
    #[error("{0}: {1}")]
    Csv(String, csv::Error),
    #[error("{0}")]
    Spec(String),
    #[error("{0}")]
    Recovery(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } | CliError::Format(_) | CliError::Csv(..) => exit::IO,
            CliError::Spec(_) => exit::SPEC,
            CliError::Recovery(_) => exit::RECOVERY,
            CliError::Budget(_) => exit::BUDGET,
        }
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::EnumerationBudgetExceeded { .. } => CliError::Budget(e.to_string()),
            CodeError::Geometry(
                hlrc_core::geometry::GeometryError::EnumerationBudgetExceeded { .. },
            ) => CliError::Budget(e.to_string()),
            other => CliError::Spec(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Spec(e.to_string())
    }
}

impl From<RecoveryError> for CliError {
    fn from(e: RecoveryError) -> Self {
        CliError::Recovery(e.to_string())
    }
}
