use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input could not be parsed or has the wrong shape.
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("radicand is a perfect square: {0}")]
    RationalInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("mixed radicands: sqrt({0}) and sqrt({1})")]
    MixedRadicands(String, String),

    /// Well-formed input outside the domain of the operation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("prime {p} exceeds the brute-force bound {bound}")]
    BoundExceeded { p: u64, bound: u64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// A cross-check between two independent computations disagreed.
    #[error("invariant check failed: {0}")]
    Invariant(String),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }
}
