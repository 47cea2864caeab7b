use std::io;
use std::path::PathBuf;

use terralens_core::stimuli::StimulusError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },
    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Generation(#[from] StimulusError),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn malformed(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Malformed { path: path.into(), message: message.to_string() }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed { .. }
            | CliError::Input { .. }
            | CliError::Argument(_)
            | CliError::Generation(StimulusError::InvalidDifficulty(..)) => 2,
            CliError::Output { .. } => 3,
            CliError::Generation(StimulusError::GenerationExhausted(_)) => 4,
            CliError::Generation(_) | CliError::Other(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
