use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not Hermitian positive definite (pivot {pivot} = {value:e})")]
    NotHpd { pivot: usize, value: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("shape mismatch in {context}: {left:?} vs {right:?}")]
    ShapeMismatch {
        context: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("result would hold {entries} entries, above the cap of {cap}")]
    SizeCap { entries: usize, cap: usize },

    #[error("columns are numerically rank deficient at column {column}")]
    RankDeficient { column: usize },

    #[error("a frame needs at least one vector")]
    EmptyFamily,

    #[error("dimensions must be positive")]
    ZeroDimension,

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("family is not a frame (optimal bounds {lower:e}, {upper:e})")]
    NotAFrame { lower: f64, upper: f64 },

    #[error("family is not a normalized tight frame (optimal bounds {lower:e}, {upper:e})")]
    NotNormalizedTight { lower: f64, upper: f64 },

    #[error("scalar must be nonzero")]
    ZeroScalar,

    #[error("operator is not invertible (smallest singular value {sigma_min:e})")]
    NotInvertible { sigma_min: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
