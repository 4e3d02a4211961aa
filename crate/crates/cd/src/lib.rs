//! Annealing schedule, interpolated Hamiltonian and variational
//! counterdiabatic gauge potentials.
//!
//! All gauge potentials are taken with respect to `λ`; the driving term is
//! `λ̇ A_λ`. The action is `Tr(G²)/2ⁿ` with `G = ∂_λH + i[A_λ, H]`.

mod gauge;
mod model;
mod problem;
mod schedule;

pub use gauge::{
    action, fit_nc1_constants, g_operator, gauge_potential, local_basis, local_cd, local_gauge_potential,
    minimize_action, nc1_generic_channels, nc1_generic_gauge_potential, nc_gauge_potential, nc_operators,
    pool_channels, pool_gauge_potential, sample_coefficients, total_hamiltonian, CdKind, CdSample, GaugePotential,
};
pub use model::CdModel;
pub use problem::{AnnealingProblem, LocalWeighting, DEFAULT_HX};
pub use schedule::Schedule;

use adcd_pauli::PauliError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CdError {
    #[error("total time must be positive and finite, got {0}")]
    InvalidTotalTime(f64),
    #[error("t = {t} outside [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },
    #[error("expansion order must be at least 1, got {0}")]
    InvalidOrder(usize),
    #[error("unknown CD variant {0:?}")]
    UnknownKind(String),
    #[error("normal equations: {0}")]
    Solve(String),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

pub type Result<T> = std::result::Result<T, CdError>;
