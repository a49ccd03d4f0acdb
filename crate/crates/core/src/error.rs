use thiserror::Error;

/// Errors raised by the nearness toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix data has {len} entries, expected {expected} for a {n}x{n} matrix")]
    Shape { n: usize, len: usize, expected: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("reduced minimum modulus is undefined for the zero operator")]
    UndefinedGamma,

    #[error("not a partial isometry: |XX*X - X| = {residual:e}")]
    NotPartialIsometry { residual: f64 },

    #[error("not an orthogonal projection: residual {residual:e}")]
    NotProjection { residual: f64 },

    #[error("function is undefined at singular value {at}")]
    FunctionUndefined { at: f64 },

    #[error("second-form bound requires dim ker(S) >= dim ran(S)^perp, got {kernel} < {cokernel}")]
    BoundPrecondition { kernel: usize, cokernel: usize },

    #[error("index constraint violated: j(V*V, X*X) = {j} > 0")]
    IndexConstraint { j: i64 },

    #[error("zero partial isometry has no triangle-equality test")]
    ZeroIsometry,

    #[error("rank {k} out of range for dimension {n}")]
    RankOutOfRange { n: usize, k: usize },

    #[error("invalid campaign configuration: {0}")]
    InvalidConfig(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
