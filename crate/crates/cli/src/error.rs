use std::fmt;

/// A failed command, classified by exit status.
#[derive(Debug)]
pub enum CliError {
    /// The request itself is invalid (exit 2).
    Usage(String),
    /// A numerical or I/O failure (exit 1).
    Failure(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid request: {m}"),
            CliError::Failure(e) => write!(f, "{e:#}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<facet_heights::Error> for CliError {
    fn from(e: facet_heights::Error) -> Self {
        use facet_heights::Error as E;
        match e {
            E::Domain(_) | E::AmbiguousRegime(_) | E::RegimeMismatch(_) | E::InvalidEnsemble(_) => {
                CliError::Usage(e.to_string())
            }
            E::Convergence { .. } | E::Internal(_) => CliError::Failure(e.into()),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Failure(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failure(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failure(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
