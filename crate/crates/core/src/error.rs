use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A requested time lies outside the span of a grid.
    #[error("time {time} outside grid span [{start}, {end}]")]
    OutOfRange { time: f64, start: f64, end: f64 },
    /// The input does not lie in the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Input data is malformed (non-finite values, length mismatch).
    #[error("invalid data: {0}")]
    Data(String),
    /// A documented precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A parameter is out of its admissible range.
    #[error("invalid parameter {name}: {reason}")]
    Parameter { name: &'static str, reason: String },
    /// The problem is too large for the requested method.
    #[error("size limit exceeded: {0}")]
    Size(String),
    /// Indices of two discrete series do not line up.
    #[error("misaligned series: {0}")]
    Misaligned(String),
    /// Reading or writing a file failed.
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        reason: reason.into(),
    }
}
