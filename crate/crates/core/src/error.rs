use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::problem::{OptHistory, Violation};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("unknown condition `{0}`")]
    UnknownCondition(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{} constraint error(s); first: {}", .0.len(), .0.first().map(|v| v.message.as_str()).unwrap_or(""))]
    Constraint(Vec<Violation>),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("linear solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("newton iteration failed at t = {time:e} s after {iterations} iterations")]
    Newton { time: f64, iterations: usize },

    #[error("simulation failed: {0}")]
    Simulation(String),

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("optimization aborted after {} iteration(s): {source}", .history.iterations)]
    Interrupted { history: Box<OptHistory>, source: Box<Error> },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
