use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration (bad margin parameters, malformed grids, ...).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Data does not satisfy an operation's preconditions.
    #[error("data error: {0}")]
    Data(String),

    /// An iterative solver failed; carries the last iterate (intercept
    /// first, then coefficients) and the gradient sup-norm at that point.
    #[error("solver did not converge after {iterations} iterations (gradient sup-norm {gradient_norm:.3e})")]
    NoConvergence {
        iterations: usize,
        gradient_norm: f64,
        last_iterate: Vec<f64>,
    },

    /// Numerical failure (Cholesky breakdown, non-finite intermediate, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A resampling fold cannot be evaluated without stratification.
    #[error("fold {fold} of repetition {rep} has single-class training data; use stratified folds")]
    StratificationRequired { rep: usize, fold: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
