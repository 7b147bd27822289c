use thiserror::Error;

/// Errors produced by the solvers and model builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pool has zero mass")]
    EmptyPool,

    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: String,
    },

    #[error("invalid threshold {0}")]
    InvalidThreshold(f64),

    #[error("{what} did not converge (best residual {best_residual:e})")]
    NoConvergence {
        what: String,
        best_residual: f64,
        /// Best iterate found before the budget ran out, when one exists.
        best: Vec<f64>,
    },

    #[error("degenerate system: {0}")]
    DegenerateSystem(String),

    #[error("no sharing rule on the wage grid satisfies participation")]
    Infeasible,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
