use poncelet_core::GeometryError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("pair construction failed: {0}")]
    Construction(#[source] GeometryError),
    #[error("verification failed")]
    VerifyFailed,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 = property failure, 2 = invalid input, 3 = pair construction failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::InvalidSpec(_) => 2,
            CliError::Construction(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
