use std::path::PathBuf;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PRECONDITION: i32 = 3;
    pub const VERIFICATION: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flag values or malformed input.
    #[error("{0}")]
    Usage(String),
    /// Valid input that the requested operation cannot accept.
    #[error("{0}")]
    Precondition(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] crate::edgelist::ParseError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(crate::edgelist::ParseError::Read { .. }) => exit::IO,
            CliError::Usage(_) | CliError::Parse(_) => exit::USAGE,
            CliError::Precondition(_) => exit::PRECONDITION,
            CliError::Io { .. } => exit::IO,
        }
    }
}
