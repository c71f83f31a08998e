use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the region where an operation is defined (horizon, wedge, sign).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error(
        "differentiation of order {order} failed: residual {residual:e} exceeds {tolerance:e}"
    )]
    Differentiation {
        order: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error(
        "integration failed at step {step}: fixed-point iteration did not converge in \
         {iterations} iterations (last update {last_update:e})"
    )]
    Integration {
        step: usize,
        iterations: usize,
        last_update: f64,
    },

    #[error("solver did not converge in {iterations} iterations (residual history: {history:?})")]
    Solver { iterations: usize, history: Vec<f64> },

    #[error("experiment error: {0}")]
    Experiment(String),

    #[error("fit error: {0}")]
    Fit(String),
}

impl Error {
    /// True for errors caused by the caller's configuration rather than numerics.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            Error::Configuration(_) | Error::Precondition(_) | Error::Domain(_)
        )
    }
}
