use std::cell::RefCell;

use adcd_cd::{AnnealingProblem, CdKind, CdModel, Schedule};
use adcd_pauli::{Complex64, PauliString, PauliSum};
use ode_solvers::{Dopri5, DVector, OutputType, System};

use crate::{Result, SimError, StateVector};

/// Largest register accepted by [`exact_evolve`].
pub const EXACT_MAX_QUBITS: usize = 10;

/// Tolerance of the adaptive integrator in [`exact_evolve`].
pub const EXACT_TOL: f64 = 1e-10;

/// Where in each step the Hamiltonian is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampling {
    /// `t_j = jΔt`.
    #[default]
    Endpoint,
    /// `t_j = (j − ½)Δt`.
    Midpoint,
}

/// First-order product formula with `M` steps of size `Δt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterPlan {
    total: f64,
    dt: f64,
    steps: usize,
    pub sampling: Sampling,
}

impl TrotterPlan {
    pub fn new(total: f64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) || !(total.is_finite() && total >= 0.0) {
            return Err(SimError::InvalidPlan { total, dt });
        }
        let m = (total / dt).round();
        if (m * dt - total).abs() > 1e-9 * dt.max(total) {
            return Err(SimError::InvalidPlan { total, dt });
        }
        Ok(TrotterPlan { total, dt, steps: m as usize, sampling: Sampling::Endpoint })
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Evaluation time of step `j` in `1..=M`.
    pub fn sample_time(&self, j: usize) -> f64 {
        let t = match self.sampling {
            Sampling::Endpoint => j as f64 * self.dt,
            Sampling::Midpoint => (j as f64 - 0.5) * self.dt,
        };
        t.min(self.total)
    }
}

/// Real coefficient of a Hermitian term.
fn real_coeff(s: &PauliString, c: &Complex64) -> Result<f64> {
    if c.im.abs() > 1e-10 * c.norm().max(1.0) {
        return Err(SimError::NotHermitian(format!("{c} on {s:?}")));
    }
    Ok(c.re)
}

/// Terms of one step in application order: diagonal terms by ascending
/// locality, then single-site X fields, then everything else. The identity
/// term comes first and only contributes a global phase.
pub fn ordered_terms(h: &PauliSum) -> Result<Vec<(PauliString, f64)>> {
    let mut diag = Vec::new();
    let mut field = Vec::new();
    let mut rest = Vec::new();
    let mut identity = Vec::new();
    for (s, c) in h.iter() {
        let c = real_coeff(s, c)?;
        if s.is_identity() {
            identity.push((*s, c));
        } else if s.is_diagonal() {
            diag.push((*s, c));
        } else if s.weight() == 1 && s.y_count() == 0 {
            field.push((*s, c));
        } else {
            rest.push((*s, c));
        }
    }
    diag.sort_by_key(|(s, _)| (s.weight(), *s));
    Ok(identity.into_iter().chain(diag).chain(field).chain(rest).collect())
}

/// Step Hamiltonian `H(t_j)`; `None` when `T = 0`.
fn schedule_for(total: f64) -> Result<Option<Schedule>> {
    if total == 0.0 {
        return Ok(None);
    }
    Ok(Some(Schedule::new(total)?))
}

/// `Π_j Π_k exp(−i H_k(t_j) Δt)` applied to `|+⟩^⊗n`.
pub fn trotter_evolve(problem: &AnnealingProblem, kind: CdKind, plan: &TrotterPlan, hardware: bool) -> Result<StateVector> {
    let mut state = StateVector::plus_state(problem.n())?;
    let Some(schedule) = schedule_for(plan.total())? else { return Ok(state) };
    let model = CdModel::new(problem, kind)?;
    for j in 1..=plan.steps() {
        let h = model.hamiltonian(&schedule, plan.sample_time(j), hardware)?;
        for (s, c) in ordered_terms(&h)? {
            state.apply_string_exponential(c * plan.dt(), &s);
        }
    }
    Ok(state)
}

/// `P|b⟩ = k (−1)^{|b ∧ z|} |b ⊕ x⟩`.
#[derive(Debug, Clone, Copy)]
struct Flat {
    x: usize,
    z: usize,
    k: Complex64,
}

fn flatten(sum: &PauliSum, keep: impl Fn(&PauliString) -> bool) -> Vec<Flat> {
    sum.iter()
        .filter(|(s, _)| keep(s))
        .map(|(s, c)| Flat { x: s.x_mask() as usize, z: s.z_mask() as usize, k: c * Complex64::i().powu(s.y_count()) })
        .collect()
}

fn sign(b: usize, z: usize) -> f64 {
    if (b & z).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

struct Schrodinger<'a> {
    model: CdModel<'a>,
    schedule: Schedule,
    hardware: bool,
    n: usize,
    /// Diagonal of `H_f`.
    energies: Vec<f64>,
    /// Ansatz operators, when they do not depend on `λ`.
    basis: Option<Vec<Vec<Flat>>>,
    error: &'a RefCell<Option<SimError>>,
}

impl Schrodinger<'_> {
    fn cd_terms(&self, lambda: f64, dot: f64) -> Result<Vec<(f64, Vec<Flat>)>> {
        if dot == 0.0 {
            return Ok(Vec::new());
        }
        let coefficients = self.model.coefficients(lambda)?;
        let keep = |s: &PauliString| !self.hardware || s.weight() <= 1;
        Ok(match &self.basis {
            Some(b) => coefficients.into_iter().zip(b.iter().cloned()).collect(),
            None => {
                let b = self.model.basis(lambda)?;
                coefficients.into_iter().zip(b.iter().map(|o| flatten(o, keep))).collect()
            }
        })
    }
}

impl System<f64, DVector<f64>> for Schrodinger<'_> {
    fn system(&self, t: f64, y: &DVector<f64>, dy: &mut DVector<f64>) {
        dy.fill(0.0);
        let (lambda, dot) = match self.schedule.eval(t) {
            Ok(v) => v,
            Err(e) => {
                self.error.borrow_mut().get_or_insert(e.into());
                return;
            }
        };
        let cd = match self.cd_terms(lambda, dot) {
            Ok(v) => v,
            Err(e) => {
                self.error.borrow_mut().get_or_insert(e);
                return;
            }
        };
        let dim = 1usize << self.n;
        let amp = |b: usize| Complex64::new(y[2 * b], y[2 * b + 1]);
        let field = (1.0 - lambda) * self.model.problem().hx();
        for b in 0..dim {
            let mut acc = amp(b) * (lambda * self.energies[b]);
            for j in 0..self.n {
                acc += amp(b ^ (1 << j)) * field;
            }
            for (alpha, ops) in &cd {
                let w = alpha * dot;
                for f in ops {
                    // ⟨b|P|b ⊕ x⟩ = k (−1)^{|(b ⊕ x) ∧ z|}
                    let src = b ^ f.x;
                    acc += amp(src) * f.k * (w * sign(src, f.z));
                }
            }
            // −i H ψ
            dy[2 * b] = acc.im;
            dy[2 * b + 1] = -acc.re;
        }
    }
}

/// Integrates `i∂ₜψ = H(t)ψ` from `|+⟩^⊗n` with an adaptive 5th-order
/// Dormand–Prince method at tolerance [`EXACT_TOL`].
pub fn exact_evolve(problem: &AnnealingProblem, kind: CdKind, total: f64, hardware: bool) -> Result<StateVector> {
    let n = problem.n();
    if n > EXACT_MAX_QUBITS {
        return Err(SimError::TooManyQubits { n, cap: EXACT_MAX_QUBITS });
    }
    let start = StateVector::plus_state(n)?;
    let Some(schedule) = schedule_for(total)? else { return Ok(start) };
    let y0 = DVector::from_iterator(2 << n, start.amplitudes().iter().flat_map(|a| [a.re, a.im]));
    let error = RefCell::new(None);
    let model = CdModel::new(problem, kind)?;
    let keep = |s: &PauliString| !hardware || s.weight() <= 1;
    let basis = model.fixed_basis().map(|b| b.iter().map(|o| flatten(o, keep)).collect());
    let energies = (0..1u64 << n).map(|b| problem.ising().energy_f64(b)).collect();
    let sys = Schrodinger { model, schedule, hardware, n, energies, basis, error: &error };
    let mut solver = Dopri5::from_param(
        sys,
        0.0,
        total,
        total,
        y0,
        EXACT_TOL,
        EXACT_TOL,
        0.9,
        0.04,
        0.2,
        10.0,
        total,
        0.0,
        50_000_000,
        u32::MAX,
        OutputType::Sparse,
    );
    let outcome = solver.integrate();
    if let Some(e) = error.borrow_mut().take() {
        return Err(e);
    }
    outcome.map_err(|e| SimError::Integration(e.to_string()))?;
    let y = solver.y_out().last().ok_or_else(|| SimError::Integration("no output".into()))?;
    let state = StateVector::from_amplitudes((0..1usize << n).map(|b| Complex64::new(y[2 * b], y[2 * b + 1])).collect())?;
    let drift = (state.norm() - 1.0).abs();
    if drift > 1e-8 {
        return Err(SimError::Integration(format!("norm drift {drift:e}")));
    }
    Ok(state)
}
