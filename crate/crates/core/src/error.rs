use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("dimension mismatch: expected length {expected}, got {actual}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub actual: usize,
}

impl DimensionMismatch {
    pub fn check(expected: usize, actual: usize) -> Result<(), Self> {
        if expected == actual {
            Ok(())
        } else {
            Err(Self { expected, actual })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix dimension must be at least 1")]
    Empty,
    #[error("entry ({row}, {col}) out of range for dimension {n}")]
    OutOfRange { row: usize, col: usize, n: usize },
    #[error("duplicate entry ({row}, {col})")]
    Duplicate { row: usize, col: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("malformed compressed-row arrays: {0}")]
    MalformedCsr(String),
    #[error("complex matrix cannot be applied on the real path")]
    ComplexOnRealPath,
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
}

/// Failures of the complex symmetric Lanczos process.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LanczosError {
    #[error("right-hand side is zero")]
    ZeroRhs,
    /// `|bᵀb|` vanishes relative to `‖b‖₂²`.
    #[error("bilinear breakdown at initialization: |b^T b| / ||b||^2 = {ratio:e}")]
    InitialBreakdown { ratio: f64 },
    /// `|ṽᵀṽ|` vanishes while `ṽ` itself does not.
    #[error("serious breakdown at step {step}: |v^T v| / ||v||^2 = {ratio:e}")]
    SeriousBreakdown { step: usize, ratio: f64 },
    #[error("Lanczos process already terminated")]
    Terminated,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Per-shift breakdown of the projected least-squares update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum BreakdownKind {
    #[error("Lanczos serious breakdown")]
    Lanczos,
    /// `t_{n,n} = 0` when forming a Givens rotation.
    #[error("zero pivot in Givens rotation at step {step}")]
    Rotation { step: usize },
    /// `t_{n,n} = 0` after bidiagonal elimination (`T_n + σI` singular).
    #[error("zero pivot in bidiagonal elimination at step {step}")]
    Pivot { step: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("max_iter must be at least 1")]
    BadMaxIter,
    #[error("shift set is empty")]
    NoShifts,
    #[error(transparent)]
    Lanczos(#[from] LanczosError),
    #[error(transparent)]
    Breakdown(#[from] BreakdownKind),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}
