//! Dense statevector engine for digitized annealing with counterdiabatic
//! terms: Pauli exponentials, first-order product formulas, an adaptive
//! integrator used as a reference, and measurement statistics.

mod evolve;
mod measure;
mod state;

pub use evolve::{exact_evolve, ordered_terms, trotter_evolve, Sampling, TrotterPlan, EXACT_MAX_QUBITS, EXACT_TOL};
pub use measure::{argmax_index, measure, sample_counts, success_probability, ExperimentResult};
pub use state::StateVector;

use adcd_cd::CdError;
use adcd_pauli::Complex64;

/// Largest register the dense engine allocates.
pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("{n} qubits exceeds the cap of {cap}")]
    TooManyQubits { n: usize, cap: usize },
    #[error("basis index {index} out of range for {n} qubits")]
    BasisIndex { index: u64, n: usize },
    #[error("amplitude count {0} is not a power of two")]
    Dimension(usize),
    #[error("register mismatch: state has {state} qubits, operator {operator}")]
    RegisterMismatch { state: usize, operator: usize },
    #[error("exponent term must have unit coefficient, got {0}")]
    NonUnitCoefficient(Complex64),
    #[error("Δt = {dt} does not divide T = {total}")]
    InvalidPlan { total: f64, dt: f64 },
    #[error("Hamiltonian term with complex coefficient: {0}")]
    NotHermitian(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error(transparent)]
    Cd(#[from] CdError),
}

pub type Result<T> = std::result::Result<T, SimError>;
