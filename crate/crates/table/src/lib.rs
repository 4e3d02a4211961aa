//! Multiplication-table encoding: column equations with carries, logical
//! preprocessing, and the reduced cost Hamiltonian.

mod equations;
mod preprocess;

use adcd_encoding::{BinaryPolynomial, EncodingError, IsingHamiltonian, Var};

pub use equations::{build_table_equations, Assignment, EquationSystem};
pub use preprocess::preprocess;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("N = {0} must be odd")]
    EvenN(u64),
    #[error("bit lengths must be at least 2, got ({0}, {1})")]
    InvalidBits(u32, u32),
    #[error("infeasible constraint: {0} = 0")]
    Infeasible(String),
    #[error("reduction did not reach a fixpoint")]
    NoFixpoint,
    #[error("{0} variables is too many to enumerate")]
    TooManyVariables(usize),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

pub type Result<T> = std::result::Result<T, TableError>;

/// Factor bit lengths of the worked instances.
pub fn known_bit_lengths(n: u64) -> Option<(u32, u32)> {
    match n {
        21 => Some((2, 3)),
        35 => Some((3, 3)),
        91 => Some((3, 4)),
        217 => Some((3, 5)),
        235 => Some((3, 6)),
        2479 => Some((7, 6)),
        _ => None,
    }
}

/// `f = Σ qᵢ²` over the remaining constraints.
pub fn cost_polynomial(sys: &EquationSystem) -> BinaryPolynomial {
    sys.constraints.iter().fold(BinaryPolynomial::zero(), |acc, q| acc.add(&q.square()))
}

/// Maps `q ↦ (1 − σᶻ)/2` with `order[k]` on qubit `k + 1`.
pub fn polynomial_to_hamiltonian(f: &BinaryPolynomial, order: &[Var]) -> Result<IsingHamiltonian> {
    Ok(IsingHamiltonian::from_polynomial(f, order)?)
}

/// Full table pipeline for one instance.
#[derive(Debug, Clone)]
pub struct TableProblem {
    pub original: EquationSystem,
    pub reduced: EquationSystem,
    pub order: Vec<Var>,
    pub cost: BinaryPolynomial,
    pub hamiltonian: IsingHamiltonian,
}

impl TableProblem {
    pub fn new(n: u64, bits_x: u32, bits_y: u32) -> Result<Self> {
        let original = build_table_equations(n, bits_x, bits_y)?;
        let reduced = preprocess(&original)?;
        let order = reduced.survivors();
        let cost = cost_polynomial(&reduced);
        let hamiltonian = polynomial_to_hamiltonian(&cost, &order)?;
        Ok(TableProblem { original, reduced, order, cost, hamiltonian })
    }

    pub fn qubits(&self) -> usize {
        self.order.len()
    }

    /// Survivor assignment encoded by a basis index.
    pub fn assignment(&self, index: u64) -> Assignment {
        self.order.iter().enumerate().map(|(k, v)| (*v, index >> k & 1 == 1)).collect()
    }

    /// Factors for a basis index, if its back-substitution is binary.
    pub fn decode_index(&self, index: u64) -> Option<(u64, u64)> {
        let full = self.reduced.complete(&self.assignment(index))?;
        Some(self.reduced.factors(&full))
    }
}
