use orbifold_core::duval::DuvalError;
use orbifold_core::fibration::FibrationError;
use orbifold_core::isometry::IsometryError;
use orbifold_core::singular::SingularError;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("{message}")]
    NotHopf { message: String, fibrations: Value },
    #[error("{count} mismatched rows:\n{diff}")]
    Mismatch { count: usize, diff: String, report: Value },
    #[error("cache: {0}")]
    Cache(#[from] std::io::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::InvalidSpec(_) => 2,
            CliError::NotHopf { .. } => 3,
            CliError::Mismatch { .. } => 4,
            CliError::Cache(_) | CliError::Internal(_) => 1,
        }
    }

    /// JSON written to stdout alongside the error.
    pub fn payload(&self) -> Option<&Value> {
        match self {
            CliError::NotHopf { fibrations, .. } => Some(fibrations),
            CliError::Mismatch { report, .. } => Some(report),
            _ => None,
        }
    }
}

impl From<DuvalError> for CliError {
    fn from(e: DuvalError) -> CliError {
        match e {
            DuvalError::UnknownFamily(_) | DuvalError::Constraint { .. } => CliError::InvalidSpec(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<IsometryError> for CliError {
    fn from(e: IsometryError) -> CliError {
        match e {
            IsometryError::Duval(d) => d.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<FibrationError> for CliError {
    fn from(e: FibrationError) -> CliError {
        match e {
            FibrationError::Duval(d) => d.into(),
            FibrationError::Isometry(i) => i.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<SingularError> for CliError {
    fn from(e: SingularError) -> CliError {
        CliError::Internal(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::Internal(e.to_string())
    }
}
