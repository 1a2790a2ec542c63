use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has zero dimension")]
    EmptyMatrix,

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("operator is not normalized (trace {trace})")]
    NotNormalized { trace: f64 },

    #[error("matrix is not unitary (‖U*U − I‖_F = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("vector has zero norm")]
    ZeroVector,

    #[error("eigensolver failed: {0}")]
    SolverFailure(String),

    #[error("partial fidelity order m = {m} out of range 1..={dim}")]
    BadM { m: usize, dim: usize },

    #[error("zero operator where a nonzero one is required")]
    ZeroOperator,

    #[error("invalid map spec: {0}")]
    BadSpec(String),

    #[error("theorem check failed for map kind {kind} (seed {seed}): {reason}")]
    AssertionFailure {
        kind: String,
        seed: u64,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
