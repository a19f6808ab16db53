use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 2 (got {0})")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("invalid mixing weights: {0}")]
    InvalidWeights(String),

    #[error("weight rates must sum to zero (sum {0:e})")]
    RateSumNonzero(f64),

    #[error("inconsistent system: right-hand side has a component of norm {0:e} outside the range")]
    InconsistentSystem(f64),

    #[error("kernel-inconsistent tangent: |<i|drho|j>| = {value:e} on kernel pair ({i},{j})")]
    KernelInconsistentTangent { i: usize, j: usize, value: f64 },

    #[error("non-tangent form: {0}")]
    NonTangentForm(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("family evaluation failed: {0}")]
    FamilyEvaluation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
