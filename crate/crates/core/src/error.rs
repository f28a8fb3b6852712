use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("cannot parse {what} `{text}`: {reason}")]
    Parse {
        what: &'static str,
        text: String,
        reason: String,
    },

    #[error("memory budget of {budget_mib} MiB exceeded at {stage}")]
    Resource { budget_mib: u64, stage: String },

    #[error("subgroup `{subgroup}` is not supported on group `{group}`")]
    UnsupportedSubgroup { group: String, subgroup: String },

    #[error("prefix of length {have} is too short, need {need}")]
    InsufficientPrefix { have: usize, need: usize },

    #[error("depth {given} is below the required {required}")]
    Depth { given: usize, required: usize },

    #[error("no connecting word from `{from}` to `{to}`")]
    NoWitness { from: String, to: String },

    #[error("input is not irreducible: {0}")]
    Reducible(String),

    #[error("power iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("patch set still changing at radius {radius}: {detail}")]
    Unstable { radius: usize, detail: String },

    #[error("search exhausted: {0}")]
    Exhausted(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(what: &'static str, text: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            text: text.to_string(),
            reason: reason.into(),
        }
    }
}
