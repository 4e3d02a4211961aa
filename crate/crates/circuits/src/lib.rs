//! Gate-level compilation of digitized annealing schedules: Pauli
//! exponentials as basis changes, CNOT ladders and Z rotations, gate
//! counting, circuit simulation and OpenQASM 2.0 output.

mod circuit;
mod compile;
mod qasm;

pub use circuit::{Component, Gate, GateCircuit, GateMeta};
pub use compile::{compile_plan, compile_string, compile_term, GateCounts};
pub use qasm::emit_qasm;

use adcd_cd::CdError;
use adcd_pauli::{Complex64, PauliError};
use adcd_sim::SimError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitIndex { qubit: usize, n: usize },
    #[error("CNOT control and target coincide on qubit {0}")]
    SameQubit(usize),
    #[error("register mismatch: circuit has {circuit} qubits, state {state}")]
    RegisterMismatch { circuit: usize, state: usize },
    #[error("term must have unit coefficient, got {0}")]
    NonUnitCoefficient(Complex64),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Cd(#[from] CdError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

pub type Result<T> = std::result::Result<T, CircuitError>;
