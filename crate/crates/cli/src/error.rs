use std::fmt;
use std::path::Path;

use phaseland::Error;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(Error),
}

impl CliError {
    pub const USAGE: u8 = 1;
    pub const IO: u8 = 2;
    pub const NUMERICAL: u8 = 3;

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::InvalidParameter(_)) => Self::USAGE,
            CliError::Io(_) | CliError::Core(Error::Parse { .. }) => Self::IO,
            CliError::Core(_) => Self::NUMERICAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
