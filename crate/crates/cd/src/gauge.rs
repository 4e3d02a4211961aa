use std::fmt;
use std::str::FromStr;

use adcd_pauli::{Complex64, Pauli, PauliSum, PauliTerm};
use nalgebra::{DMatrix, DVector};

use crate::problem::{single, AnnealingProblem, LocalWeighting};
use crate::model::CdModel;
use crate::schedule::Schedule;
use crate::{CdError, Result};

/// Gauge-potential ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CdKind {
    None,
    /// `Σ αⱼ σⱼʸ` with one coefficient per site.
    Local,
    /// Nested-commutator expansion of the given order.
    Nc(usize),
    /// First-order commutator split into one channel per interaction order.
    Nc1Generic,
    /// Tied `{Y, Z|Y, X|Y}` operator pool.
    Pool,
}

impl fmt::Display for CdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CdKind::None => write!(f, "none"),
            CdKind::Local => write!(f, "local"),
            CdKind::Nc(l) => write!(f, "nc{l}"),
            CdKind::Nc1Generic => write!(f, "nc1-generic"),
            CdKind::Pool => write!(f, "pool"),
        }
    }
}

impl FromStr for CdKind {
    type Err = CdError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "none" => return Ok(CdKind::None),
            "local" => return Ok(CdKind::Local),
            "pool" => return Ok(CdKind::Pool),
            "nc1-generic" | "nc1g" | "generic" => return Ok(CdKind::Nc1Generic),
            "nc" => return Ok(CdKind::Nc(1)),
            _ => {}
        }
        match lower.strip_prefix("nc").map(str::parse::<usize>) {
            Some(Ok(l)) if l >= 1 => Ok(CdKind::Nc(l)),
            _ => Err(CdError::UnknownKind(s.to_string())),
        }
    }
}

/// Optimal coefficients of an ansatz and the assembled `A_λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugePotential {
    pub coefficients: Vec<f64>,
    pub operator: PauliSum,
    /// Indices of basis operators with no effect on the action.
    pub inactive: Vec<usize>,
}

fn i_commutator(a: &PauliSum, b: &PauliSum) -> PauliSum {
    a.commutator(b).expect("uniform register").scale(Complex64::i())
}

/// `G_λ = ∂_λH + i[A, H]` at `λ`.
pub fn g_operator(problem: &AnnealingProblem, a: &PauliSum, lambda: f64) -> Result<PauliSum> {
    let h = problem.h_ad(lambda);
    Ok(problem.d_lambda_h().add(&a.commutator(&h)?.scale(Complex64::i()))?)
}

/// `S = Tr(G_λ²)/2ⁿ`.
pub fn action(problem: &AnnealingProblem, a: &PauliSum, lambda: f64) -> Result<f64> {
    Ok(g_operator(problem, a, lambda)?.norm_sq())
}

/// Minimizes the action over `A = Σ αₖ Oₖ` for Hermitian `Oₖ`.
///
/// The normal equations are solved with an SVD pseudo-inverse, so
/// degenerate directions get the minimum-norm coefficient.
pub fn minimize_action(problem: &AnnealingProblem, basis: &[PauliSum], lambda: f64) -> Result<GaugePotential> {
    let n = problem.n();
    let h = problem.h_ad(lambda);
    let dh = problem.d_lambda_h();
    let v: Vec<PauliSum> = basis.iter().map(|o| i_commutator(o, &h)).collect();
    let norms: Vec<f64> = v.iter().map(|p| p.norm_sq().sqrt()).collect();
    let scale = norms.iter().cloned().fold(0.0, f64::max);
    let inactive: Vec<usize> = (0..basis.len()).filter(|&k| norms[k] <= 1e-12 * scale.max(1.0)).collect();
    let active: Vec<usize> = (0..basis.len()).filter(|k| !inactive.contains(k)).collect();
    let m = active.len();
    let mut coefficients = vec![0.0; basis.len()];
    if m > 0 {
        let unit: Vec<PauliSum> = active.iter().map(|&k| v[k].scale_re(1.0 / norms[k])).collect();
        let gram = DMatrix::from_fn(m, m, |r, c| unit[r].hs_inner(&unit[c]).expect("uniform register").re);
        let rhs = DVector::from_fn(m, |r, _| -unit[r].hs_inner(&dh).expect("uniform register").re);
        let svd = gram.svd(true, true);
        let eps = 1e-12 * svd.singular_values.max();
        let x = svd.solve(&rhs, eps).map_err(|e| CdError::Solve(e.to_string()))?;
        for (r, &k) in active.iter().enumerate() {
            coefficients[k] = x[r] / norms[k];
        }
    }
    let mut operator = PauliSum::zero(n);
    for (o, a) in basis.iter().zip(&coefficients) {
        operator = operator.add(&o.scale_re(*a))?;
    }
    Ok(GaugePotential { coefficients, operator, inactive })
}

/// Closed-form local coefficients `αⱼ = (hⱼᶻ ∂hⱼˣ − hⱼˣ ∂hⱼᶻ)/Rⱼ` with
/// `Rⱼ = 2(hₓ² + hⱼᶻ² + Σ_{S∋j} w_S c_S²)` over interaction terms containing `j`,
/// with `w_S` set by the problem's [`LocalWeighting`].
pub fn local_cd(problem: &AnnealingProblem, lambda: f64) -> Vec<f64> {
    let hx = (1.0 - lambda) * problem.hx();
    let dhx = -problem.hx();
    (1..=problem.n())
        .map(|j| {
            let hz = lambda * problem.field(j);
            let dhz = problem.field(j);
            let bit = 1u64 << (j - 1);
            let inter: f64 = problem
                .couplings()
                .iter()
                .filter(|(m, _)| m & bit != 0)
                .map(|(m, c)| {
                    let w = match problem.local_weighting() {
                        LocalWeighting::Locality => m.count_ones() as f64,
                        LocalWeighting::Uniform => 1.0,
                    };
                    w * (lambda * c).powi(2)
                })
                .sum();
            let r = 2.0 * (hx * hx + hz * hz + inter);
            if r < 1e-12 {
                0.0
            } else {
                (hz * dhx - hx * dhz) / r
            }
        })
        .collect()
}

/// `σⱼʸ` for every site.
pub fn local_basis(problem: &AnnealingProblem) -> Vec<PauliSum> {
    let n = problem.n();
    (1..=n).map(|j| PauliSum::from(single(n, j, Pauli::Y, 1.0))).collect()
}

pub fn local_gauge_potential(problem: &AnnealingProblem, lambda: f64) -> GaugePotential {
    let coefficients = local_cd(problem, lambda);
    let n = problem.n();
    let operator = PauliSum::from_terms(
        n,
        coefficients.iter().enumerate().map(|(k, a)| single(n, k + 1, Pauli::Y, *a)),
    )
    .expect("uniform register");
    GaugePotential { coefficients, operator, inactive: Vec::new() }
}

/// `Oₖ = i Cₖ` with `C₁ = [H, ∂H]` and `Cₖ₊₁ = [H, [H, Cₖ]]`.
pub fn nc_operators(problem: &AnnealingProblem, l: usize, lambda: f64) -> Result<Vec<PauliSum>> {
    if l == 0 {
        return Err(CdError::InvalidOrder(l));
    }
    let h = problem.h_ad(lambda);
    let mut c = h.commutator(&problem.d_lambda_h())?;
    let mut out = Vec::with_capacity(l);
    for k in 0..l {
        if k > 0 {
            c = h.commutator(&h.commutator(&c)?)?;
        }
        out.push(c.scale(Complex64::i()));
    }
    Ok(out)
}

/// `A^(l) = i Σₖ αₖ Cₖ` with variationally optimal `αₖ`.
pub fn nc_gauge_potential(problem: &AnnealingProblem, l: usize, lambda: f64) -> Result<GaugePotential> {
    let basis = nc_operators(problem, l, lambda)?;
    minimize_action(problem, &basis, lambda)
}

/// `i[H, ∂H]` grouped by the interaction order of the `H_f` term it comes
/// from; the channels sum to the first nested commutator.
pub fn nc1_generic_channels(problem: &AnnealingProblem) -> Vec<PauliSum> {
    let field = problem.h_initial();
    let hf = problem.h_final();
    (1..=problem.ising().max_locality())
        .map(|k| {
            let part = hf.filter(|s| s.weight() == k);
            i_commutator(field, &part)
        })
        .filter(|c| !c.is_empty())
        .collect()
}

pub fn nc1_generic_gauge_potential(problem: &AnnealingProblem, lambda: f64) -> Result<GaugePotential> {
    minimize_action(problem, &nc1_generic_channels(problem), lambda)
}

/// `Σ h̃ᵢᶻ σᵢʸ`, `Σ J̃ᵢⱼ (σᵢᶻσⱼʸ + σᵢʸσⱼᶻ)` and `Σ J̃ᵢⱼ (σᵢˣσⱼʸ + σᵢʸσⱼˣ)`.
pub fn pool_channels(problem: &AnnealingProblem) -> Vec<PauliSum> {
    let n = problem.n();
    let term = |ops: &[(usize, Pauli)], c: f64| {
        PauliTerm::on_sites(n, ops, Complex64::new(c, 0.0)).expect("site within register")
    };
    let mut y = PauliSum::zero(n);
    for j in 1..=n {
        y.add_term(&single(n, j, Pauli::Y, problem.field(j))).expect("uniform register");
    }
    let mut zy = PauliSum::zero(n);
    let mut xy = PauliSum::zero(n);
    for &(mask, c) in problem.couplings().iter().filter(|(m, _)| m.count_ones() == 2) {
        let i = mask.trailing_zeros() as usize + 1;
        let j = 63 - mask.leading_zeros() as usize + 1;
        for (a, b) in [(Pauli::Z, Pauli::Y), (Pauli::Y, Pauli::Z)] {
            zy.add_term(&term(&[(i, a), (j, b)], c)).expect("uniform register");
        }
        for (a, b) in [(Pauli::X, Pauli::Y), (Pauli::Y, Pauli::X)] {
            xy.add_term(&term(&[(i, a), (j, b)], c)).expect("uniform register");
        }
    }
    vec![y, zy, xy]
}

pub fn pool_gauge_potential(problem: &AnnealingProblem, lambda: f64) -> Result<GaugePotential> {
    minimize_action(problem, &pool_channels(problem), lambda)
}

/// Optimal gauge potential of the given ansatz, `None` for [`CdKind::None`].
pub fn gauge_potential(problem: &AnnealingProblem, kind: CdKind, lambda: f64) -> Result<Option<GaugePotential>> {
    Ok(match kind {
        CdKind::None => None,
        CdKind::Local => Some(local_gauge_potential(problem, lambda)),
        CdKind::Nc(l) => Some(nc_gauge_potential(problem, l, lambda)?),
        CdKind::Nc1Generic => Some(nc1_generic_gauge_potential(problem, lambda)?),
        CdKind::Pool => Some(pool_gauge_potential(problem, lambda)?),
    })
}

/// `H(t) = H_ad(t) + λ̇(t) A_λ`. With `hardware` set only the single-site
/// part of `A_λ` is kept.
pub fn total_hamiltonian(
    problem: &AnnealingProblem,
    kind: CdKind,
    schedule: &Schedule,
    t: f64,
    hardware: bool,
) -> Result<PauliSum> {
    CdModel::new(problem, kind)?.hamiltonian(schedule, t, hardware)
}

/// One row of a sampled CD coefficient table.
#[derive(Debug, Clone, PartialEq)]
pub struct CdSample {
    pub t: f64,
    pub lambda: f64,
    pub lambda_dot: f64,
    pub coefficients: Vec<f64>,
}

/// Coefficients at `count + 1` evenly spaced times in `[0, T]`.
pub fn sample_coefficients(
    problem: &AnnealingProblem,
    kind: CdKind,
    schedule: &Schedule,
    count: usize,
) -> Result<Vec<CdSample>> {
    let count = count.max(1);
    let model = CdModel::new(problem, kind)?;
    (0..=count)
        .map(|k| {
            let t = schedule.total() * k as f64 / count as f64;
            let (lambda, lambda_dot) = schedule.eval(t)?;
            let coefficients = model.coefficients(lambda)?;
            Ok(CdSample { t, lambda, lambda_dot, coefficients })
        })
        .collect()
}

/// Fits `α₁(λ) = a / [hₓ²(1 − λ)² + b λ²]` to first-order coefficients by
/// linear least squares on `1/α₁`; returns `(a, b)`.
pub fn fit_nc1_constants(problem: &AnnealingProblem, lambdas: &[f64]) -> Result<(f64, f64)> {
    let hx2 = problem.hx() * problem.hx();
    let rows = lambdas.len();
    let mut design = DMatrix::zeros(rows, 2);
    let mut target = DVector::zeros(rows);
    for (r, &lambda) in lambdas.iter().enumerate() {
        let alpha = nc_gauge_potential(problem, 1, lambda)?.coefficients[0];
        design[(r, 0)] = hx2 * (1.0 - lambda).powi(2);
        design[(r, 1)] = lambda * lambda;
        target[r] = 1.0 / alpha;
    }
    let sol = design.svd(true, true).solve(&target, 1e-14).map_err(|e| CdError::Solve(e.to_string()))?;
    let a = 1.0 / sol[0];
    Ok((a, sol[1] * a))
}
