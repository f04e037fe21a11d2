use thiserror::Error;

/// Errors raised by the simulator's operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("transform length {0} is not a power of two >= 2")]
    TransformSize(usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("empty input")]
    Empty,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sequences do not overlap after a delay of {0}")]
    NoOverlap(usize),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
