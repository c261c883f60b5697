use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, an unparsable function, or arguments outside a domain.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] fpi_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot read replay file {path}: {reason}")]
    Replay { path: PathBuf, reason: String },

    #[error("output: {0}")]
    Emit(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Replay { .. } => 2,
            CliError::Core(e) if e.is_nonconvergence() => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } | CliError::Emit(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
