use thiserror::Error;

/// Errors surfaced by the CLI, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or configuration (exit 2).
    #[error("usage error: {0}")]
    Usage(String),

    /// Domain error in the computation (exit 1).
    #[error("{0}")]
    Domain(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<landau_rel::Error> for CliError {
    fn from(e: landau_rel::Error) -> Self {
        use landau_rel::Error as E;
        match e {
            E::InvalidConfig(_) | E::Truncation { .. } | E::ParseRational { .. } => CliError::Usage(e.to_string()),
            E::Domain(_) | E::DivisionByZero(_) => CliError::Domain(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
