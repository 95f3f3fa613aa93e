use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix is not upper triangular with positive real diagonal")]
    NotTriangular,

    #[error("non-finite entry in matrix data")]
    NonFinite,

    /// A gamma-type argument left its domain; `index` is 1-based.
    #[error("domain error at index {index}: gamma argument {argument} must be positive")]
    Domain { index: usize, argument: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The evaluation point lies outside the support of the density.
    #[error("outside support: {0}")]
    Support(String),

    #[error("jack engine: {0}")]
    Jack(String),
}

pub type Result<T> = std::result::Result<T, Error>;
