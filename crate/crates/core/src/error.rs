use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied value violates an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Integration or observable evaluation left the physical state space.
    #[error("numerical failure at step {step}: {reason}")]
    Numerical { step: usize, reason: String },

    /// The Liouvillian has more than one eigenvalue within tolerance of zero.
    #[error("steady state is not unique: smallest eigenvalue magnitudes {first:e} and {second:e}")]
    NonUniqueSteadyState { first: f64, second: f64 },

    #[error("configuration error on line {line}: {key}: {message}")]
    Config { line: usize, key: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
