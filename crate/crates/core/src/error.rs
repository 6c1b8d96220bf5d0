use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("unsupported root system {kind}{rank}")]
    UnsupportedRootSystem { kind: String, rank: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionError { expected: usize, found: usize },
    #[error("dimension {0} is not supported by this operation")]
    UnsupportedDimension(usize),
    #[error("phi + rho is singular: it is orthogonal to the root {root}")]
    NotRegular { root: String },
    #[error("weight is not integral: {0}")]
    NotIntegral(String),
    #[error("element is not central: {0}")]
    NotCentral(String),
    #[error("parameter {0} lies outside [0, 1]")]
    RangeError(f64),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("evaluation curve is not closed (residual {residual:.3e})")]
    LoopNotClosed { residual: f64 },
    #[error("at least {min} steps are required, got {got}")]
    TooFewSteps { min: usize, got: usize },
    #[error("estimated integration error {est_error:.3e} at {steps} steps exceeds the tolerance")]
    PrecisionWarning { est_error: f64, steps: usize },
    #[error("consistency failure: {0}")]
    ConsistencyFailure(String),
    #[error("cap surface integral did not converge (estimated error {est_error:.3e})")]
    CapError { est_error: f64 },
    #[error("operator does not preserve the section space: {0}")]
    ClosureError(String),
    #[error("lift cannot be used here: {0}")]
    LiftError(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
