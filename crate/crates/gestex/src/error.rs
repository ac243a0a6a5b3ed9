use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
///
/// Variants map onto CLI exit codes: invalid arguments and unsupported sizes
/// exit 2, data problems (missing/corrupt files, degenerate signals) exit 3,
/// checkpoint problems exit 4, training divergence exit 5.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    #[error("data integrity: {0}")]
    DataIntegrity(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("training diverged: {0}")]
    TrainingDiverged(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::UnsupportedSize(_) => 2,
            Error::DegenerateSignal(_) | Error::DataIntegrity(_) | Error::Io { .. } => 3,
            Error::Checkpoint(_) => 4,
            Error::TrainingDiverged(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
