use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    /// Digging exhausted its candidates before reaching the clue target.
    #[error("sudoku digging stuck at {clues} clues (target {target})")]
    DiggingStuck { clues: usize, target: usize },

    /// No feasible hazard map within the resample budget.
    #[error("no feasible hazard map after {attempts} attempts")]
    MapInfeasible { attempts: usize },

    #[error("decode ambiguous: {0}")]
    DecodeAmbiguous(String),

    #[error("replay failed: {0}")]
    Replay(String),

    #[error("non-finite value during integration at step {step}")]
    NonFinite { step: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("png error: {0}")]
    Png(String),

    /// Batch generation stopped early; `completed` records were written.
    #[error("generation aborted after {completed} of {total} instances: {source}")]
    Partial {
        completed: usize,
        total: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
