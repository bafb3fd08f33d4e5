use thiserror::Error;

/// Failures surfaced by the command-line front end, each with its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Verify(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Verify(_) => 4,
            CliError::Io { .. } | CliError::Numeric(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Domain(_) => "domain",
            CliError::Verify(_) => "verify",
            CliError::Io { .. } => "io",
            CliError::Numeric(_) => "numeric",
        }
    }

    /// One-line JSON diagnostic for stderr.
    pub fn diagnostic(&self) -> String {
        serde_json::json!({
            "status": "error",
            "kind": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        })
        .to_string()
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<tubebound::Error> for CliError {
    fn from(e: tubebound::Error) -> Self {
        use tubebound::Error as E;
        match e {
            E::Domain(_) | E::FocalRadius { .. } => CliError::Domain(e.to_string()),
            E::InvalidInput(_) => CliError::Config(e.to_string()),
            E::Solver(_) | E::Inconsistency(_) => CliError::Numeric(e.to_string()),
        }
    }
}
