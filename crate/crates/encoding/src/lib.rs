//! Factoring instances as binary polynomials and diagonal Ising Hamiltonians.

mod direct;
mod ising;
mod poly;

pub use direct::{build_direct_hamiltonian, factor_register_sizes, FactorizationInstance, Sizing, DEFAULT_QUBIT_CAP};
pub use ising::{basis_label, exact_ground_states, parse_basis_label, IsingHamiltonian, EXHAUSTIVE_CAP};
pub use poly::{BinaryPolynomial, Monomial, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodingError {
    #[error("N = {0} must be odd")]
    EvenN(u64),
    #[error("N = {0} is too small")]
    TooSmall(u64),
    #[error("bit lengths must be at least 2, got ({0}, {1})")]
    InvalidBits(u32, u32),
    #[error("{n} qubits exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("label has {got} bits, instance has {expected}")]
    LabelLength { got: usize, expected: usize },
    #[error("invalid basis label {0:?}")]
    BadLabel(String),
    #[error("variable {0} has no qubit")]
    UnmappedVariable(Var),
    #[error("site {site} out of range 1..={n}")]
    SiteOutOfRange { site: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, EncodingError>;
