use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or a configuration outside the budgets; reported with usage.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Compute(#[from] wmds_core::Error),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl From<String> for CliError {
    fn from(msg: String) -> Self {
        CliError::Usage(msg)
    }
}
