use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the pipeline stages.
///
/// Every variant maps onto a stable diagnostic code (see [`Error::code`]) that
/// shows up in reports and in CLI output.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed email address {0:?}")]
    Email(String),
    #[error("unknown {kind} token {token:?}")]
    Enum { kind: &'static str, token: String },
    #[error("term is empty after normalization: {0:?}")]
    EmptyTerm(String),
    #[error("duplicate researcher id {id} ({name})")]
    DuplicateId { id: String, name: String },
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),
    #[error("invalid input: {0}")]
    Format(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Email(_) => "E_EMAIL",
            Error::Enum { .. } => "E_ENUM",
            Error::EmptyTerm(_) => "E_EMPTY_TERM",
            Error::DuplicateId { .. } => "E_DUP_ID",
            Error::DivisionByZero(_) => "E_DIV0",
            Error::Format(_) => "E_FORMAT",
            Error::Io { .. } => "E_IO",
            Error::Csv(_) => "E_CSV",
            Error::Json(_) => "E_FORMAT",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
