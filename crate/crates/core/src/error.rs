use thiserror::Error;

/// Errors produced by the toolkit.
///
/// Pointwise failures carry the linear grid index of the first offending
/// point (lowest index wins).
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} must be even and at least 4")]
    InvalidGrid(usize),

    #[error("non-finite sample at linear index {index}")]
    NonFinite { index: usize },

    #[error("field has {got} samples, grid needs {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{op} is undefined for forms of degree {degree}")]
    DegreeOutOfRange { op: &'static str, degree: usize },

    #[error("wedge of degrees {left} and {right} exceeds the top degree")]
    DegreeOverflow { left: usize, right: usize },

    #[error("operands live on different grids")]
    GridMismatch,

    #[error("form is not closed: residual {residual:e} exceeds {tol:e}")]
    NotClosed { residual: f64, tol: f64 },

    #[error("intersection matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    GramNotPositive { min_eigenvalue: f64 },

    #[error("sigma is not positive definite at linear index {index}")]
    SigmaNotPositive { index: usize },

    #[error("matrix is not unimodular: det = {det}")]
    NotUnimodular { det: f64 },

    #[error("coframe is degenerate at linear index {index} (|det F| = {det:e})")]
    FrameDegenerate { index: usize, det: f64 },

    #[error("triple is not hypersymplectic: {reason}")]
    NotVerified { reason: String },

    #[error("symmetric part of B is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    BhatNotPositive { min_eigenvalue: f64 },

    #[error("coefficient matrix M is not positive definite at x0 index {index}")]
    MNotPositive { index: usize },

    #[error("structural data is negatively oriented; swap the first two forms first")]
    NegativeOrientation,

    #[error("metric is not positive definite at linear index {index}")]
    MetricNotPositive { index: usize },

    #[error("random triple generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("malformed field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
