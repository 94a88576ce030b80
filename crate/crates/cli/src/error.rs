use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] partsep::Error),

    #[error("cannot read input {0}")]
    Input(String),

    #[error("invalid arguments: {0}")]
    Usage(String),

    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn csv(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }

    /// 1 for computational or capacity failures, 2 for bad input.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Core(e) if !e.is_validation() => ExitCode::from(1),
            CliError::Output(_) => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }
}
