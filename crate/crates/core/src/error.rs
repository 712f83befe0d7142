use thiserror::Error;

/// Errors raised by the library. Numerical diagnostics that are not fatal
/// (an apparent non-elliptic map, a rejected sample) are reported in the
/// corresponding report structs instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("point is outside the domain: {0}")]
    OutsideDomain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("degenerate map: {0}")]
    Degenerate(String),

    #[error("map cannot be lifted: {0}")]
    NotLiftable(String),

    #[error("map is not expandable: {0}")]
    NonExpandable(String),

    #[error("no in-domain preimage within step bound {bound} (best step {best_step:?})")]
    NoBackwardStep { bound: f64, best_step: Option<f64> },

    #[error("Newton solver did not converge (residual {residual:e} after {iterations} iterations)")]
    SolverFailure { residual: f64, iterations: usize },

    #[error("orbit too short: {len} points, need at least {needed}")]
    OrbitTooShort { len: usize, needed: usize },

    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("export failed: {0}")]
    Export(String),
}

pub type Result<T> = std::result::Result<T, Error>;
