use thiserror::Error;

/// Errors raised by the wavelab operators and builders.
#[derive(Debug, Error)]
pub enum WavelabError {
    #[error("capacity exceeded: {cells} cells requested, cap is {cap}")]
    Capacity { cells: u128, cap: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("unsupported construction: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a module basis: residual vanished at generator {index}")]
    NotModuleBasis { index: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, WavelabError>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(WavelabError::Input(msg.into()))
}
