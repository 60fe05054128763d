use qrenorm_core::Error;

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN_HOLE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Hole(String),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Hole(_) => EXIT_DOMAIN_HOLE,
            CliError::Core(Error::DomainHole { .. }) => EXIT_DOMAIN_HOLE,
            CliError::Core(Error::InvalidArgument(_) | Error::Parse(_)) => EXIT_USAGE,
            CliError::Core(_) | CliError::Io(_) => EXIT_FAIL,
        }
    }
}
