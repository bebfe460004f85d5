use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid injection plan: {0}")]
    InvalidPlan(String),

    #[error("size limit exceeded: {what} is {actual}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
