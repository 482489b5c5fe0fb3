use std::io;

use nupair_core::ErrorKind;
use thiserror::Error;

use crate::specfile::SpecFileError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] nupair_core::Error),
    #[error("spec file: {0}")]
    SpecFile(#[from] SpecFileError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// 2 spec error, 3 hypothesis violation, 4 complexity cap, 1 i/o.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Spec => 2,
                ErrorKind::Hypothesis => 3,
                ErrorKind::Complexity => 4,
            },
            CliError::SpecFile(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}
