use thiserror::Error;

use crate::model::ElementSet;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The instance or mapping cannot be covered as requested.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("sampler distributions are not exactly evaluable; use saa_solve or Monte Carlo evaluation")]
    NotExactlyEvaluable,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("linear program: {0}")]
    Lp(#[from] LpError),

    #[error("submodular minimization did not converge after {iterations} iterations (best value {best_value})")]
    NonConvergence { iterations: usize, best: ElementSet, best_value: f64 },

    #[error("cutting-plane loop hit its cap of {rounds} rounds (last master value {value}, {cuts} cuts)")]
    CuttingPlaneLimit { rounds: usize, value: f64, cuts: usize },

    #[error("randomized rounding gave up after {attempts} attempts")]
    RetryLimit { attempts: usize },

    #[error("search space of {size} exceeds the cap of {cap}")]
    TooLarge { size: f64, cap: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("infeasible")]
    Infeasible,
    #[error("unbounded")]
    Unbounded,
    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),
    #[error("malformed program: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
