use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("initial mesh level must be >= 1, got {0}")]
    InvalidLevel(usize),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("cell {cell} is not convex; refinement requires convex cells")]
    NonConvexCell { cell: usize },

    #[error("cell {cell} is degenerate (N^T N is singular)")]
    DegenerateCell { cell: usize },

    #[error("zero diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },

    #[error("factorization failed: matrix is not positive definite at pivot {pivot}")]
    NotPositiveDefinite { pivot: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
