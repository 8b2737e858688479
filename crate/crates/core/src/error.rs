use thiserror::Error;

/// Errors produced by the solver, samplers and bound evaluators.
#[derive(Debug, Error)]
pub enum QuenchError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Signalled when a state reaches the quench threshold; carries the time
    /// of the last valid state.
    #[error("solution quenched at t = {t}")]
    Quenched { t: f64 },

    #[error("singular tridiagonal system: zero pivot at row {row}")]
    SingularSystem { row: usize },

    #[error("non-finite state encountered at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("root bracketing failed on [{lo}, {hi}]: {context}")]
    BracketingFailed { lo: f64, hi: f64, context: String },

    #[error("iteration failed to converge: {0}")]
    ConvergenceFailure(&'static str),

    #[error("horizon too short: {0}")]
    HorizonTooShort(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QuenchError>;

impl QuenchError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        QuenchError::InvalidArgument(msg.into())
    }
}
