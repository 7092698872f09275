use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Limit(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Limit(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Limit(_) => "resource-limit",
        }
    }

    /// Wraps an engine error, naming what was being computed.
    pub fn engine(what: &str, err: frobenius_core::Error) -> Self {
        match err {
            frobenius_core::Error::ResourceLimit(msg) => CliError::Limit(format!("{what}: {msg}")),
            other => CliError::Input(format!("{what}: {other}")),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
