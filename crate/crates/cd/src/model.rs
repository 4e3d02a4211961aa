use adcd_pauli::{Complex64, PauliString, PauliSum};
use nalgebra::{DMatrix, DVector};

use crate::gauge::{
    local_basis, local_cd, minimize_action, nc1_generic_channels, nc_operators, pool_channels, CdKind, GaugePotential,
};
use crate::problem::AnnealingProblem;
use crate::schedule::Schedule;
use crate::{CdError, Result};

/// Commutator data of an ansatz whose operators do not depend on `λ`.
#[derive(Debug, Clone)]
struct FixedBasis {
    basis: Vec<PauliSum>,
    /// `Re⟨i[Oⱼ, A], i[Oₖ, B]⟩` for `A, B ∈ {H_i, H_f}`.
    gram_ii: DMatrix<f64>,
    gram_if: DMatrix<f64>,
    gram_ff: DMatrix<f64>,
    /// `Re⟨i[Oⱼ, A], ∂_λH⟩`.
    rhs_i: DVector<f64>,
    rhs_f: DVector<f64>,
}

/// Per-problem cache for evaluating a CD ansatz at many times.
#[derive(Debug, Clone)]
pub struct CdModel<'a> {
    problem: &'a AnnealingProblem,
    kind: CdKind,
    fixed: Option<FixedBasis>,
}

fn gram(a: &[PauliSum], b: &[PauliSum]) -> DMatrix<f64> {
    DMatrix::from_fn(a.len(), b.len(), |r, c| a[r].hs_inner(&b[c]).expect("uniform register").re)
}

impl<'a> CdModel<'a> {
    pub fn new(problem: &'a AnnealingProblem, kind: CdKind) -> Result<Self> {
        let basis = match kind {
            CdKind::None | CdKind::Local => None,
            // i[H, ∂H] = h̃ₓ i[Σσˣ, H_f] for every λ
            CdKind::Nc(1) => Some(nc_operators(problem, 1, 0.5)?),
            CdKind::Nc(_) => None,
            CdKind::Nc1Generic => Some(nc1_generic_channels(problem)),
            CdKind::Pool => Some(pool_channels(problem)),
        };
        let fixed = basis.map(|basis| {
            let ic = |o: &PauliSum, h: &PauliSum| o.commutator(h).expect("uniform register").scale(Complex64::i());
            let vi: Vec<PauliSum> = basis.iter().map(|o| ic(o, problem.h_initial())).collect();
            let vf: Vec<PauliSum> = basis.iter().map(|o| ic(o, problem.h_final())).collect();
            let dh = [problem.d_lambda_h()];
            FixedBasis {
                gram_ii: gram(&vi, &vi),
                gram_if: gram(&vi, &vf),
                gram_ff: gram(&vf, &vf),
                rhs_i: gram(&vi, &dh).column(0).into_owned(),
                rhs_f: gram(&vf, &dh).column(0).into_owned(),
                basis,
            }
        });
        Ok(CdModel { problem, kind, fixed })
    }

    pub fn kind(&self) -> CdKind {
        self.kind
    }

    pub fn problem(&self) -> &AnnealingProblem {
        self.problem
    }

    /// Optimal coefficients at `λ`; empty for [`CdKind::None`].
    pub fn coefficients(&self, lambda: f64) -> Result<Vec<f64>> {
        match (&self.fixed, self.kind) {
            (_, CdKind::None) => Ok(Vec::new()),
            (_, CdKind::Local) => Ok(local_cd(self.problem, lambda)),
            (Some(fb), _) => solve_fixed(fb, lambda),
            (None, CdKind::Nc(l)) => Ok(minimize_action(self.problem, &nc_operators(self.problem, l, lambda)?, lambda)?.coefficients),
            (None, _) => unreachable!("fixed-basis kinds are cached"),
        }
    }

    /// Ansatz operators when they do not depend on `λ`.
    pub fn fixed_basis(&self) -> Option<Vec<PauliSum>> {
        match (&self.fixed, self.kind) {
            (_, CdKind::None) => Some(Vec::new()),
            (_, CdKind::Local) => Some(local_basis(self.problem)),
            (Some(fb), _) => Some(fb.basis.clone()),
            (None, _) => None,
        }
    }

    /// Ansatz operators at `λ`.
    pub fn basis(&self, lambda: f64) -> Result<Vec<PauliSum>> {
        Ok(match (&self.fixed, self.kind) {
            (_, CdKind::None) => Vec::new(),
            (_, CdKind::Local) => local_basis(self.problem),
            (Some(fb), _) => fb.basis.clone(),
            (None, CdKind::Nc(l)) => nc_operators(self.problem, l, lambda)?,
            (None, _) => unreachable!("fixed-basis kinds are cached"),
        })
    }

    pub fn gauge_potential(&self, lambda: f64) -> Result<Option<GaugePotential>> {
        if self.kind == CdKind::None {
            return Ok(None);
        }
        let coefficients = self.coefficients(lambda)?;
        let basis = self.basis(lambda)?;
        let mut operator = PauliSum::zero(self.problem.n());
        for (o, a) in basis.iter().zip(&coefficients) {
            operator = operator.add(&o.scale_re(*a))?;
        }
        let inactive = match &self.fixed {
            Some(fb) => (0..basis.len()).filter(|&k| fb_norm(fb, k, lambda) <= 1e-12 * fb_scale(fb, lambda)).collect(),
            None => Vec::new(),
        };
        Ok(Some(GaugePotential { coefficients, operator, inactive }))
    }

    /// `H_ad(t) + λ̇(t) A_λ`, keeping only single-site CD terms when
    /// `hardware` is set.
    pub fn hamiltonian(&self, schedule: &Schedule, t: f64, hardware: bool) -> Result<PauliSum> {
        let (lambda, dot) = schedule.eval(t)?;
        let h = self.problem.h_ad(lambda);
        if dot == 0.0 {
            return Ok(h);
        }
        let Some(gp) = self.gauge_potential(lambda)? else { return Ok(h) };
        let mut a = gp.operator;
        if hardware {
            a = a.filter(|s| s.weight() <= 1);
        }
        Ok(h.add(&a.scale_re(dot))?)
    }

    /// Unmerged `(pattern, coefficient)` list of `H(t)`, for repeated
    /// application to states.
    pub fn hamiltonian_terms(&self, schedule: &Schedule, t: f64, hardware: bool) -> Result<Vec<(PauliString, Complex64)>> {
        let (lambda, dot) = schedule.eval(t)?;
        let mut out: Vec<(PauliString, Complex64)> = Vec::new();
        let mut push = |sum: &PauliSum, k: f64, cd: bool| {
            if k != 0.0 {
                let keep = |s: &PauliString| !(cd && hardware) || s.weight() <= 1;
                out.extend(sum.iter().filter(|(s, _)| keep(s)).map(|(s, c)| (*s, c * k)));
            }
        };
        push(self.problem.h_initial(), 1.0 - lambda, false);
        push(self.problem.h_final(), lambda, false);
        if dot != 0.0 && self.kind != CdKind::None {
            let coefficients = self.coefficients(lambda)?;
            for (o, a) in self.basis(lambda)?.iter().zip(&coefficients) {
                push(o, dot * a, true);
            }
        }
        Ok(out)
    }
}

fn fb_norm(fb: &FixedBasis, k: usize, lambda: f64) -> f64 {
    let (a, b) = (1.0 - lambda, lambda);
    (a * a * fb.gram_ii[(k, k)] + 2.0 * a * b * fb.gram_if[(k, k)] + b * b * fb.gram_ff[(k, k)]).max(0.0).sqrt()
}

fn fb_scale(fb: &FixedBasis, lambda: f64) -> f64 {
    (0..fb.basis.len()).map(|k| fb_norm(fb, k, lambda)).fold(1.0, f64::max)
}

fn solve_fixed(fb: &FixedBasis, lambda: f64) -> Result<Vec<f64>> {
    let (a, b) = (1.0 - lambda, lambda);
    let full = &fb.gram_ii * (a * a) + (&fb.gram_if + fb.gram_if.transpose()) * (a * b) + &fb.gram_ff * (b * b);
    let rhs = -(&fb.rhs_i * a + &fb.rhs_f * b);
    let k = fb.basis.len();
    let norms: Vec<f64> = (0..k).map(|j| fb_norm(fb, j, lambda)).collect();
    let scale = fb_scale(fb, lambda);
    let active: Vec<usize> = (0..k).filter(|&j| norms[j] > 1e-12 * scale).collect();
    let mut out = vec![0.0; k];
    if active.is_empty() {
        return Ok(out);
    }
    let m = active.len();
    let g = DMatrix::from_fn(m, m, |r, c| full[(active[r], active[c])] / (norms[active[r]] * norms[active[c]]));
    let r = DVector::from_fn(m, |r, _| rhs[active[r]] / norms[active[r]]);
    let svd = g.svd(true, true);
    let eps = 1e-12 * svd.singular_values.max();
    let x = svd.solve(&r, eps).map_err(|e| CdError::Solve(e.to_string()))?;
    for (r, &j) in active.iter().enumerate() {
        out[j] = x[r] / norms[j];
    }
    Ok(out)
}
