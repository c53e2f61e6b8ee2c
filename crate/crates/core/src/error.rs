use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("iteration count must be at least 1")]
    ZeroIterations,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid objective: {0}")]
    InvalidObjective(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("region is empty (no feasible point in the unit box)")]
    InfeasibleRegion,

    #[error("origin is not feasible; use the min-infinity-norm start")]
    OriginInfeasible,

    #[error("numeric instability in simplex: pivot magnitude {pivot:e} below 1e-10")]
    NumericInstability { pivot: f64 },

    #[error("simplex exceeded {0} pivots")]
    PivotLimit(usize),

    #[error("non-finite {what} at iteration {iteration}, iterate {point}")]
    NonFinite {
        what: &'static str,
        iteration: usize,
        /// JSON-serialized offending iterate.
        point: String,
    },

    #[error("iterate {iteration} left the feasible region (residual {residual:e})")]
    FeasibilityViolated { iteration: usize, residual: f64 },

    #[error("oracle precondition: {0}")]
    Oracle(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
