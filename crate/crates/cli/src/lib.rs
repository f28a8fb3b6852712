//! Experiment registry, configuration and report emission for the
//! `horodyn` command-line tool.

pub mod commands;
pub mod config;
pub mod emit;
pub mod error;
pub mod experiments;
pub mod report;
pub mod tolerances;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use experiments::{run_experiment, Experiment, ExperimentRegistry};
pub use report::{Method, Outcome, Report};
