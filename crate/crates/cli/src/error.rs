use std::io;
use std::path::Path;

use modelsync_core::{CodeError, CorrectionError, LlmError, PlantUmlError};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_TRANSPORT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Model { path: String, source: Box<PlantUmlError> },
    #[error("{path}: {source}")]
    Code { path: String, source: Box<CodeError> },
    #[error("sync failed: {0}")]
    Sync(Box<CorrectionError>),
    #[error("{0}")]
    Llm(Box<LlmError>),
    #[error("{0}")]
    Usage(String),
}

impl From<CorrectionError> for CliError {
    fn from(e: CorrectionError) -> Self {
        CliError::Sync(Box::new(e))
    }
}

impl From<LlmError> for CliError {
    fn from(e: LlmError) -> Self {
        CliError::Llm(Box::new(e))
    }
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Config(_) | CliError::Usage(_) => EXIT_IO,
            CliError::Model { .. } | CliError::Code { .. } => EXIT_PARSE,
            CliError::Sync(_) => EXIT_FINDINGS,
            CliError::Llm(_) => EXIT_TRANSPORT,
        }
    }
}
