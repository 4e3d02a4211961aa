//! Experiment runner: builds a factoring instance, evolves it with or
//! without counterdiabatic driving, and reports measurement statistics,
//! gate counts and sweeps.

mod config;
mod preset;
mod run;

pub use config::{Encoding, ExperimentConfig, Method};
pub use preset::Preset;
pub use run::{
    plan, render_cd, render_equations, render_hamiltonian, run, sweep, sweep_csv, target_state, Encoded, Instance, RunOutput,
    SweepRow,
};

use adcd_cd::CdError;
use adcd_circuits::CircuitError;
use adcd_encoding::EncodingError;
use adcd_sim::SimError;
use adcd_table::TableError;

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("infeasible instance: {0}")]
    Infeasible(String),
    #[error("size cap exceeded: {0}")]
    Cap(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Io(_) => EXIT_INVALID,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::Cap(_) => EXIT_CAP,
        }
    }
}

impl From<EncodingError> for CliError {
    fn from(e: EncodingError) -> Self {
        match e {
            EncodingError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<TableError> for CliError {
    fn from(e: TableError) -> Self {
        match e {
            TableError::Infeasible(_) => CliError::Infeasible(e.to_string()),
            TableError::TooManyVariables(_) => CliError::Cap(e.to_string()),
            TableError::Encoding(inner) => inner.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::TooManyQubits { .. } => CliError::Cap(e.to_string()),
            SimError::Cd(inner) => inner.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<CdError> for CliError {
    fn from(e: CdError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::Sim(inner) => inner.into(),
            CircuitError::Cd(inner) => inner.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
