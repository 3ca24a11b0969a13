use thiserror::Error;

/// Errors of the command-line layer: input problems wrap the core errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("malformed JSON: {0}")]
    Parse(String),
    #[error("malformed instance: {0}")]
    Schema(String),
    #[error("expected a {expected} instance, got a {found} instance")]
    KindMismatch { expected: &'static str, found: &'static str },
    #[error("profile {profile} not reached after {attempts} attempts")]
    ProfileUnreachable { profile: String, attempts: usize },
    #[error("tolerance must be a positive finite number, got {0}")]
    InvalidTolerance(String),
    #[error("unknown {what} {name:?}")]
    Unknown { what: &'static str, name: String },
    #[error(transparent)]
    Core(#[from] covrep_core::Error),
}

pub type CliResult<T> = Result<T, CliError>;
