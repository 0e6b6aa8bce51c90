use coreset_core::CoresetError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input, configuration or parameters; exit status 2.
    #[error("{0}")]
    Validation(String),
    /// Everything else; exit status 1.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    /// Wraps a library error with the stage it came from.
    pub fn core(stage: &str, e: CoresetError) -> Self {
        let msg = format!("{stage}: {e}");
        match e {
            CoresetError::TypeInfeasible { .. } => CliError::Runtime(msg),
            _ => CliError::Validation(msg),
        }
    }

    pub fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        CliError::Runtime(format!("{}: {e}", path.display()))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// `.stage("decompose")` on library results.
pub trait StageExt<T> {
    fn stage(self, stage: &str) -> CliResult<T>;
}

impl<T> StageExt<T> for coreset_core::Result<T> {
    fn stage(self, stage: &str) -> CliResult<T> {
        self.map_err(|e| CliError::core(stage, e))
    }
}
