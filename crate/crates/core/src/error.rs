use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: usize, message: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate branch: {0}")]
    DegenerateBranch(String),
    #[error("pairing budget exceeded: {required} pairings required, budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
