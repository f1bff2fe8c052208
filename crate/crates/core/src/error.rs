use thiserror::Error;

/// Errors raised by the library's operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("density matrix has trace {0}, expected 1")]
    InvalidTrace(f64),

    #[error("density matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("dimension {0} is not a power of two")]
    NotQubitRegister(usize),

    #[error("site {site} out of range for {n} qubits")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("site subset must be non-empty")]
    EmptySubset,

    #[error("site {0} listed more than once")]
    DuplicateSite(usize),

    #[error("trajectory needs at least two states, got {0}")]
    TooFewStates(usize),

    #[error("{n} qubits exceeds the dense limit of {max}")]
    TooManyQubits { n: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
