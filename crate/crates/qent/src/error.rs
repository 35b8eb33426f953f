use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension cap exceeded: total dimension {got} > cap {cap}")]
    DimensionCap { got: usize, cap: usize },

    #[error("non-finite amplitudes at flow iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error("search budget exhausted, best value found {best}")]
    BudgetExhausted { best: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status for the CLI: 1 validation, 2 numerical, 3 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonFinite { .. } => 2,
            Error::BudgetExhausted { .. } => 3,
            _ => 1,
        }
    }
}
