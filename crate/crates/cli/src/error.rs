use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] horodyn::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// 4 for rejected input, 5 for budget overruns, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use horodyn::Error as E;
        match self {
            CliError::Config(_) | CliError::Json { .. } => 4,
            CliError::Core(e) => match e {
                E::Input(_)
                | E::Parse { .. }
                | E::UnsupportedSubgroup { .. }
                | E::InsufficientPrefix { .. }
                | E::Depth { .. }
                | E::Reducible(_) => 4,
                E::Resource { .. } => 5,
                _ => 1,
            },
            CliError::Io { .. } | CliError::Csv(_) => 1,
        }
    }

    /// Stable identifier printed next to the message.
    pub fn code(&self) -> &'static str {
        use horodyn::Error as E;
        match self {
            CliError::Config(_) => "config",
            CliError::Json { .. } => "json",
            CliError::Io { .. } => "io",
            CliError::Csv(_) => "csv",
            CliError::Core(e) => match e {
                E::Input(_) => "input",
                E::Parse { .. } => "parse",
                E::Resource { .. } => "resource",
                E::UnsupportedSubgroup { .. } => "unsupported-subgroup",
                E::InsufficientPrefix { .. } => "insufficient-prefix",
                E::Depth { .. } => "depth",
                E::NoWitness { .. } => "no-witness",
                E::Reducible(_) => "reducible",
                E::NoConvergence { .. } => "no-convergence",
                E::Unstable { .. } => "unstable",
                E::Exhausted(_) => "exhausted",
                E::Consistency(_) => "consistency",
            },
        }
    }
}
