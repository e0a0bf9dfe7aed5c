use thiserror::Error;

/// Errors raised by the library.
///
/// `Precondition` covers bad input (non-paving matroid, unequal unions, a
/// set that is not a basis). `Internal` means a construction step that is
/// guaranteed to succeed on valid input did not, i.e. either the input
/// silently violated an assumption or there is a bug; callers treat it as a
/// hard failure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Format(String),

    #[error("fiber size cap of {cap} nodes exceeded")]
    CapExceeded { cap: usize },
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
