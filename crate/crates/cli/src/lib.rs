//! Command implementations behind the `ffmwrc` binary.

use thiserror::Error;

pub mod commands;
pub mod config;

pub use commands::{
    cmd_codecheck, cmd_compare, cmd_region, cmd_simulate, sibling, ComparisonReport, MembershipReport,
    RegionSelector, SimulationReport,
};
pub use config::{NoiseSpec, OutputPaths, RunConfig, Scenario};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("I/O error: {0}")]
    Io(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("infeasible rates: {0}")]
    Infeasible(String),
    #[error("resource limit: {0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl From<ffmwrc_core::Error> for CliError {
    fn from(e: ffmwrc_core::Error) -> Self {
        match e {
            ffmwrc_core::Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}
