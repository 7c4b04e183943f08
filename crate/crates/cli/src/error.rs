use std::fmt;

/// Failure of a CLI run, carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad or missing arguments.
    Usage(String),
    Core(wipeplan::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use wipeplan::Error;
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => match e {
                Error::Parameter(_) => 1,
                Error::Invariant(_) => 3,
                Error::Parse { .. }
                | Error::EmptyInput(_)
                | Error::InvalidCloud(_)
                | Error::InvalidPose(_)
                | Error::Io { .. }
                | Error::Json { .. }
                | Error::Csv(_) => 2,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<wipeplan::Error> for CliError {
    fn from(e: wipeplan::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
