use std::fmt;

use chanlab_dns::DnsError;

/// Process exit codes.
pub const EXIT_DIVERGED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config files or inputs.
    Usage(String),
    /// A simulation blew up.
    Diverged(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Diverged(_) => EXIT_DIVERGED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Diverged(m) => f.write_str(m),
        }
    }
}

impl From<DnsError> for CliError {
    fn from(e: DnsError) -> Self {
        match e {
            DnsError::Diverged { .. } => CliError::Diverged(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<chanlab_core::Error> for CliError {
    fn from(e: chanlab_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}
