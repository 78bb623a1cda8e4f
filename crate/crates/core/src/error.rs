use thiserror::Error;

#[derive(Debug, Error)]
pub enum MebError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// A numeric parameter fell outside the domain of the operation.
    #[error("{name} out of {range}: got {value}")]
    OutOfRange {
        name: &'static str,
        range: &'static str,
        value: f64,
    },

    #[error("unsupported dimension d={0} for {1}")]
    UnsupportedDimension(usize, &'static str),

    #[error("distribution is not unistochastic-feasible: {0}")]
    Infeasible(String),

    #[error("no phase branch makes the matrix unitary (best residual {0:.3e})")]
    NoUnitaryBranch(f64),

    #[error("phase pairs must be distinct")]
    IdenticalPairs,

    #[error("Gram matrix is not positive definite (smallest eigenvalue {0:.3e})")]
    IndefiniteGram(f64),

    #[error("gamma radicand is not positive: {0}")]
    GammaRadicand(f64),

    #[error("rotation set invalid: {0}")]
    InvalidRotation(String),

    #[error("empty grid")]
    EmptyGrid,

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type MebResult<T> = Result<T, MebError>;
