use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("model file: {0}")]
    Parse(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Engine(formap::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Engine(formap::Error::BudgetExceeded { .. }) => 3,
            CliError::Engine(formap::Error::Parse { .. } | formap::Error::Unsupported(_) | formap::Error::Precondition(_)) => 2,
            CliError::Engine(_) => 1,
        }
    }
}

impl From<formap::Error> for CliError {
    fn from(e: formap::Error) -> Self {
        match e {
            formap::Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Engine(other),
        }
    }
}
