use std::fmt;
use std::path::Path;

use hhlbnn_core::Error;

/// Failure classes with distinct process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable input, malformed file, or invalid parameter (exit 2).
    Input(String),
    /// A computation could not be carried out (exit 3).
    Numerical(String),
    /// The run completed but missed a requested threshold (exit 4).
    Threshold(String),
    /// Filesystem or output failure (exit 1).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Threshold(_) => 4,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Threshold(m) => write!(f, "threshold not met: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Io { .. } => CliError::Io(msg),
            Error::Singular(_)
            | Error::NonUnitary { .. }
            | Error::ZeroClockValue { .. }
            | Error::DegenerateSuccess(_)
            | Error::InconsistentOverlap { .. }
            | Error::Stage { .. } => CliError::Numerical(msg),
            Error::Csv(_) | Error::Json(_) => CliError::Io(msg),
            _ => CliError::Input(msg),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
