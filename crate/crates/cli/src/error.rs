use frontal_core::Error;

/// Failure of one command, carrying its exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Unresolved(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Unresolved(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let text = e.to_string();
        match e {
            Error::WitnessUnavailable(_)
            | Error::WitnessInvalid(_)
            | Error::AlphaUnresolved { .. }
            | Error::Inflection(_) => CliError::Unresolved(text),
            Error::Parse(_) | Error::InvalidParameter(_) => CliError::Usage(text),
            _ => CliError::Validation(text),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
