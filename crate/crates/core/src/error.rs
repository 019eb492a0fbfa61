use thiserror::Error;

use crate::seqmodel::FiberId;

#[derive(Debug, Error)]
pub enum ProjError {
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("ambiguous spectral cut: eigenvalue {eigenvalue} lies within {tol:e} of endpoint {endpoint}")]
    AmbiguousCut { eigenvalue: f64, endpoint: f64, tol: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not a projection: {0}")]
    NotProjection(String),

    #[error("matrix is not hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("near-degenerate pair: eigenvalue {value:e} of pqp is neither generic nor within tolerance of 0 or 1")]
    NearDegenerate { value: f64 },

    #[error("closure undecidable in model: {0}")]
    ClosureUndecidable(String),

    #[error("no state families available: {0}")]
    NoStateFamilies(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("witness rejected at fiber {fiber}: compression margin {margin:e}")]
    WitnessRejected { fiber: FiberId, margin: f64 },

    #[error("model inconsistency: lower bound {lower} exceeds upper bound {upper}")]
    Inconsistent { lower: f64, upper: f64 },

    #[error("unknown catalog id `{0}`")]
    UnknownId(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("not supported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("config parse error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, ProjError>;
