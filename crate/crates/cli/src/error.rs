use std::path::PathBuf;

use thiserror::Error;

/// CLI-facing error type; each variant maps onto a distinct exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl From<mpi_core::Error> for CliError {
    fn from(e: mpi_core::Error) -> Self {
        CliError::InvalidInput(e.to_string())
    }
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
