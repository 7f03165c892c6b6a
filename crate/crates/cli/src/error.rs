use std::fmt;
use std::path::Path;

use fibertap_core::Error;

/// Process exit status of a failed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Config = 2,
    Io = 3,
    Numeric = 4,
    NoSilentFrames = 5,
}

#[derive(Debug)]
pub struct CliError {
    pub status: ExitStatus,
    pub message: String,
}

impl CliError {
    pub fn new(status: ExitStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    pub fn code(&self) -> i32 {
        self.status as i32
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Config { .. } | Error::ConfigParse(_) => ExitStatus::Config,
            Error::Io(_) | Error::Wav(_) | Error::Csv { .. } => ExitStatus::Io,
            Error::Estimation(_) => ExitStatus::NoSilentFrames,
            _ => ExitStatus::Numeric,
        };
        Self::new(status, e.to_string())
    }
}

/// Errors while reading or writing `path`; malformed files count as IO errors.
pub fn file_error(path: &Path) -> impl FnOnce(Error) -> CliError + '_ {
    move |e| {
        let mut err = CliError::from(e);
        if err.status == ExitStatus::Numeric {
            err.status = ExitStatus::Io;
        }
        err.message = format!("{}: {}", path.display(), err.message);
        err
    }
}

pub type CliResult<T> = Result<T, CliError>;
