use std::fmt;

/// Failure modes of a command, each mapped to a process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unparseable input, or a preset that cannot serve the request.
    Usage(String),
    /// The input is well formed but lies outside the numerical domain.
    Domain(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Domain(msg) => write!(f, "numerical domain error: {msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<bp_core::Error> for CliError {
    fn from(e: bp_core::Error) -> Self {
        use bp_core::Error::*;
        match e {
            DimensionMismatch(_) | Unsupported(_) | DimensionGuard { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
