use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The token string is not a command of the language.
    #[error("not in language: {0}")]
    NotInLanguage(String),

    #[error("unknown action token `{0}`")]
    UnknownAction(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("degenerate split: train has {train} pairs, test has {test}")]
    DegenerateSplit { train: usize, test: usize },

    #[error("{}:{line}: {message}", path.display())]
    FormatViolation {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("manifest mismatch: {0}")]
    ManifestMismatch(String),

    #[error("expected {expected} predictions, found {found}")]
    Alignment { expected: usize, found: usize },

    #[error("examples are oriented {found}, expected {expected}")]
    DirectionMismatch {
        expected: crate::corpus::Direction,
        found: crate::corpus::Direction,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
