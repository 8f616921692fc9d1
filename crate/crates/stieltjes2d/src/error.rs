use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate integrator: |delta11 g| = {0:e} is below the threshold")]
    DegenerateIntegrator(f64),
    #[error("node ({0}, {1}) lies outside the rectangle")]
    NodeOutOfDomain(f64, f64),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("not converged: {0}")]
    Unconverged(String),
    #[error("invalid certificate: {0}")]
    Certificate(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
