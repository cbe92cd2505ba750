use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("covariance determinant {det} violates the uncertainty bound 1/4")]
    UncertaintyViolation { det: f64 },

    /// The radicand of ν(t) went negative beyond rounding. Always a bug.
    #[error("nu(t) radicand {radicand:e} is negative at t = {t}")]
    InternalConsistency { t: f64, radicand: f64 },

    #[error("characteristic time is undefined without dissipation (k = 0)")]
    UndefinedTime,

    #[error("{what}: {requested} exceeds the limit of {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("truncation dimension {dim} is too small: {detail}")]
    DimensionTooSmall { dim: usize, detail: String },

    #[error("integration failed at t = {t}: {reason}")]
    IntegrationFailure { t: f64, reason: String },

    #[error("density matrix eigenvalue {eigenvalue:e} is below -1e-9")]
    NotPositive { eigenvalue: f64 },

    #[error("snapshot format: {0}")]
    Snapshot(String),
}
