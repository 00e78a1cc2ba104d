use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("limit {requested} exceeds the configured capacity of {capacity}")]
    Capacity { requested: u64, capacity: u64 },

    #[error("n = {n} exceeds the sieve limit {limit}")]
    OutOfTable { n: u64, limit: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown function id `{0}`")]
    UnknownFunction(String),

    #[error("function is not invertible: {0}")]
    NotInvertible(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("zeta has a pole at s = 1")]
    Pole,

    #[error("local factor is not positive at p = 2 (value {0}); logarithm undefined")]
    NonPositiveFactor(f64),

    #[error("degenerate series: {0}")]
    Degenerate(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
