use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {dim}: must be at least {min}")]
    InvalidDimension { dim: usize, min: usize },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("not trace preserving: residual {residual:.3e} at entry ({row}, {col})")]
    NotTracePreserving { residual: f64, row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(ParamViolation),

    #[error("malformed file: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The clause of the channel-family parameter contract that was violated.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamViolation {
    Dimension { d: usize },
    Length { expected: usize, found: usize },
    OutOfRange { index: usize, value: f64 },
    Distinctness { spread: f64 },
}

impl std::fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamViolation::Dimension { d } => write!(f, "dimension d = {d} must be at least 3"),
            ParamViolation::Length { expected, found } => {
                write!(f, "x has length {found}, expected d - 1 = {expected}")
            }
            ParamViolation::OutOfRange { index, value } => {
                write!(f, "x_{index} = {value} outside the open interval (0, 1)")
            }
            ParamViolation::Distinctness { spread } => write!(
                f,
                "distinctness violated: max |x_i - x_j| = {spread:.3e} is not above 1e-12"
            ),
        }
    }
}
