//! CLI error type and the exit-code policy.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical
//! degeneracy (empty network, degenerate validity index).

use modclust_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: missing value in column '{column}'")]
    MissingValue {
        path: String,
        line: usize,
        column: String,
    },

    #[error("edge references unknown unit identifier '{0}'")]
    IdentifierMismatch(String),

    #[error("{0}")]
    Data(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse { .. }
            | CliError::MissingValue { .. }
            | CliError::IdentifierMismatch(_)
            | CliError::Data(_)
            | CliError::Io { .. } => 2,
            CliError::Core(core) => match core {
                CoreError::InvalidConfig(_) => 1,
                CoreError::ZeroStrengthNetwork | CoreError::ZeroCompactness => 3,
                _ => 2,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
