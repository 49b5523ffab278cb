use heisen_core::HeisenError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] HeisenError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// `2` for malformed input, `1` for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::UnknownKey(_) | CliError::Usage(_) => 2,
            CliError::Core(HeisenError::Parse { .. }) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}
