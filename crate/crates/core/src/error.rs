use thiserror::Error;

use crate::lp::LpStatus;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input (dimension mismatch, bad text, empty sample).
    #[error("input error: {0}")]
    Input(String),

    /// A construction or learner parameter outside its valid region.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A configured size cap would be exceeded.
    #[error("resource limit: {what} = {requested} exceeds cap {cap}")]
    Resource {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    /// The LP solver broke down numerically or hit its iteration limit.
    #[error("solver error ({status:?}): {detail}")]
    Solver { status: LpStatus, detail: String },

    /// The learner's linear program has no feasible point.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
