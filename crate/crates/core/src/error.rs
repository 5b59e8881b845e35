use thiserror::Error;

/// Errors raised by tensor construction, the multilinear operations and the
/// TNSR/1 reader.
#[derive(Debug, Error)]
pub enum TensorError {
    #[error("tensor order and dimension must both be at least 1 (got order {order}, dim {dim})")]
    InvalidShape { order: usize, dim: usize },

    #[error("tensor with order {order} and dim {dim} is too large to address")]
    TooLarge { order: usize, dim: usize },

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite entry {value} at flat index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("shape mismatch: ({left_order}, {left_dim}) vs ({right_order}, {right_dim})")]
    ShapeMismatch {
        left_order: usize,
        left_dim: usize,
        right_order: usize,
        right_dim: usize,
    },

    #[error("vector length {found} does not match tensor dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Errors from the iterative and dense eigen-solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max |M - M^T| = {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix of order {size} exceeds the dense solver limit {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("empty operator")]
    Empty,

    #[error("vector length {found} does not match operator size {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value encountered in operator output")]
    NonFinite,
}

/// Errors from the ADMM driver.
#[derive(Debug, Error)]
pub enum SolveError {
    #[error(
        "input tensor is not symmetric (max asymmetry {max_asymmetry:e}, tolerance {tolerance:e})"
    )]
    NotSymmetric { max_asymmetry: f64, tolerance: f64 },

    #[error("input tensor is zero")]
    ZeroTensor,

    #[error("tensor order must be at least 2 (got {0})")]
    OrderTooSmall(usize),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("subproblem at iteration {iteration} did not converge (residual {residual:e} after {matvecs} products)")]
    SubproblemNotConverged {
        iteration: usize,
        residual: f64,
        matvecs: usize,
    },

    #[error("spectral failure at iteration {iteration}: {source}")]
    Spectral {
        iteration: usize,
        #[source]
        source: SpectralError,
    },

    #[error(transparent)]
    Tensor(#[from] TensorError),
}
