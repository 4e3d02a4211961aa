use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use adcd_cd::{AnnealingProblem, CdKind, CdModel, Schedule};
use adcd_pauli::{Complex64, Pauli, PauliString, PauliTerm};
use adcd_sim::{ordered_terms, TrotterPlan};
use serde::{Deserialize, Serialize};

use crate::circuit::{Component, Gate, GateCircuit, GateMeta};
use crate::{CircuitError, Result};

/// Gates for `exp(−iθP)`: basis change per site, CNOT ladder onto the
/// highest active qubit, `RZ(2θ)`, then the inverses. The identity gives
/// no gates.
pub fn compile_string(theta: f64, p: &PauliString) -> Vec<Gate> {
    let sites = p.sites();
    if sites.is_empty() {
        return Vec::new();
    }
    let mut basis = Vec::new();
    for &s in &sites {
        let q = s - 1;
        match p.get(s) {
            Pauli::X => basis.push(Gate::H(q)),
            Pauli::Y => basis.push(Gate::Rx(q, FRAC_PI_2)),
            _ => {}
        }
    }
    let ladder: Vec<Gate> =
        sites.windows(2).map(|w| Gate::Cnot { control: w[0] - 1, target: w[1] - 1 }).collect();
    let last = *sites.last().expect("nonempty support") - 1;
    let mut out = basis.clone();
    out.extend(ladder.iter().copied());
    out.push(Gate::Rz(last, 2.0 * theta));
    out.extend(ladder.iter().rev().copied());
    out.extend(basis.iter().map(Gate::inverse));
    out
}

/// Fragment for `exp(−iθP)` with a unit-coefficient term; the identity
/// compiles to a global phase `−θ` and no gates.
pub fn compile_term(theta: f64, term: &PauliTerm) -> Result<GateCircuit> {
    if term.coeff != Complex64::new(1.0, 0.0) {
        return Err(CircuitError::NonUnitCoefficient(term.coeff));
    }
    let mut c = GateCircuit::new(term.n());
    push_string(&mut c, theta, &term.string, 0)?;
    Ok(c)
}

fn component_of(p: &PauliString) -> Component {
    // H_ad is real, every gauge-potential pattern carries an odd number of Y
    if p.y_count() % 2 == 1 {
        Component::Counterdiabatic
    } else {
        Component::Adiabatic
    }
}

fn push_string(c: &mut GateCircuit, theta: f64, p: &PauliString, step: usize) -> Result<()> {
    if p.is_identity() {
        c.add_phase(-theta);
        return Ok(());
    }
    let meta = GateMeta { source: p.label(c.n()), step, component: component_of(p) };
    for g in compile_string(theta, p) {
        c.push(g, meta.clone())?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GateCounts {
    pub total: usize,
    pub by_kind: BTreeMap<String, usize>,
    /// Index 0 is the preparation layer.
    pub by_step: Vec<usize>,
    pub by_component: BTreeMap<String, usize>,
}

impl GateCounts {
    pub fn of(circuit: &GateCircuit) -> Self {
        let mut counts = GateCounts::default();
        for (g, meta) in circuit.gates() {
            counts.total += 1;
            *counts.by_kind.entry(g.name().to_string()).or_insert(0) += 1;
            *counts.by_component.entry(meta.component.to_string()).or_insert(0) += 1;
            if counts.by_step.len() <= meta.step {
                counts.by_step.resize(meta.step + 1, 0);
            }
            counts.by_step[meta.step] += 1;
        }
        counts
    }

    pub fn kind(&self, name: &str) -> usize {
        self.by_kind.get(name).copied().unwrap_or(0)
    }

    pub fn cnots(&self) -> usize {
        self.kind("cx")
    }
}

/// Hadamard layer followed by every Trotter step of the plan, in the same
/// term order as the statevector engine.
pub fn compile_plan(problem: &AnnealingProblem, kind: CdKind, plan: &TrotterPlan, hardware: bool) -> Result<(GateCircuit, GateCounts)> {
    let n = problem.n();
    let mut c = GateCircuit::new(n);
    for q in 0..n {
        let meta = GateMeta { source: "H".into(), step: 0, component: Component::Preparation };
        c.push(Gate::H(q), meta)?;
    }
    if plan.steps() > 0 {
        let schedule = Schedule::new(plan.total())?;
        let model = CdModel::new(problem, kind)?;
        for j in 1..=plan.steps() {
            let h = model.hamiltonian(&schedule, plan.sample_time(j), hardware)?;
            for (s, coeff) in ordered_terms(&h)? {
                push_string(&mut c, coeff * plan.dt(), &s, j)?;
            }
        }
    }
    let counts = GateCounts::of(&c);
    Ok((c, counts))
}
