use thiserror::Error;

/// Errors raised by state construction and tangle computations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("state vector has (near-)zero norm")]
    ZeroState,

    #[error("bad qubit subset: {0}")]
    BadSubset(String),

    #[error("matrix is not unitary within 1e-10")]
    NotUnitary,

    #[error("not a permutation of 1..={0}")]
    BadPermutation(usize),

    #[error("density matrix dimension {got}, expected {expected}")]
    BadDim { expected: usize, got: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("bad qubit index {0}")]
    BadIndex(usize),

    #[error("internal mismatch between algebraic routes: {0}")]
    InternalMismatch(String),

    #[error("bad parameter: {0}")]
    BadParam(String),

    #[error("tangle report was computed for a different state or focus")]
    StaleReport,
}

pub type Result<T> = std::result::Result<T, Error>;
