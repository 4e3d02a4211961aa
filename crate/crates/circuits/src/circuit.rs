use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use adcd_pauli::Complex64;
use adcd_sim::StateVector;
use serde::{Deserialize, Serialize};

use crate::{CircuitError, Result};

/// Native gate set; qubit `q` is register bit `q`, i.e. site `q + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    /// `exp(−iθX/2)`
    Rx(usize, f64),
    /// `exp(−iθZ/2)`
    Rz(usize, f64),
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::Rx(..) => "rx",
            Gate::Rz(..) => "rz",
            Gate::Cnot { .. } => "cx",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    /// Inverse gate.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Rx(q, t) => Gate::Rx(q, -t),
            Gate::Rz(q, t) => Gate::Rz(q, -t),
            g => g,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "h q[{q}]"),
            Gate::Rx(q, t) => write!(f, "rx({}) q[{q}]", angle(t)),
            Gate::Rz(q, t) => write!(f, "rz({}) q[{q}]", angle(t)),
            Gate::Cnot { control, target } => write!(f, "cx q[{control}],q[{target}]"),
        }
    }
}

/// Shortest round-trip decimal, always with a fractional point.
fn angle(t: f64) -> String {
    let s = format!("{t:?}");
    match s.find('e') {
        Some(k) if !s[..k].contains('.') => format!("{}.0{}", &s[..k], &s[k..]),
        _ => s,
    }
}

/// Which part of the Hamiltonian a gate implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    /// Hadamard layer preparing `|+⟩^⊗n`.
    Preparation,
    /// `H_ad = (1 − λ) H_i + λ H_f`.
    Adiabatic,
    /// `λ̇ A_λ`.
    Counterdiabatic,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::Preparation => "preparation",
            Component::Adiabatic => "adiabatic",
            Component::Counterdiabatic => "counterdiabatic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateMeta {
    /// Pauli label the gate helps implement, highest site leftmost.
    pub source: String,
    /// Trotter step, 0 for the preparation layer.
    pub step: usize,
    pub component: Component,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GateCircuit {
    n: usize,
    gates: Vec<(Gate, GateMeta)>,
    /// Accumulated phase `φ` of `e^{iφ}` from identity terms.
    global_phase: f64,
}

impl GateCircuit {
    pub fn new(n: usize) -> Self {
        GateCircuit { n, gates: Vec::new(), global_phase: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[(Gate, GateMeta)] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn add_phase(&mut self, phi: f64) {
        self.global_phase += phi;
    }

    pub fn push(&mut self, gate: Gate, meta: GateMeta) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.n {
                return Err(CircuitError::QubitIndex { qubit: q, n: self.n });
            }
        }
        if let Gate::Cnot { control, target } = gate {
            if control == target {
                return Err(CircuitError::SameQubit(control));
            }
        }
        self.gates.push((gate, meta));
        Ok(())
    }

    /// Appends `other`, which must act on the same register.
    pub fn extend(&mut self, other: GateCircuit) -> Result<()> {
        if other.n != self.n {
            return Err(CircuitError::RegisterMismatch { circuit: self.n, state: other.n });
        }
        self.gates.extend(other.gates);
        self.global_phase += other.global_phase;
        Ok(())
    }

    /// Applies the circuit, including its global phase, to `state`.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.n() != self.n {
            return Err(CircuitError::RegisterMismatch { circuit: self.n, state: state.n() });
        }
        let mut amps = state.amplitudes().to_vec();
        for (g, _) in &self.gates {
            apply_gate(&mut amps, g);
        }
        let phase = Complex64::from_polar(1.0, self.global_phase);
        amps.iter_mut().for_each(|a| *a *= phase);
        Ok(StateVector::from_amplitudes(amps)?)
    }

    /// Output state for input `|0…0⟩`.
    pub fn run(&self) -> Result<StateVector> {
        self.apply(&StateVector::basis(self.n, 0)?)
    }
}

fn apply_1q(amps: &mut [Complex64], q: usize, m: [[Complex64; 2]; 2]) {
    let bit = 1usize << q;
    for b in 0..amps.len() {
        if b & bit == 0 {
            let (a0, a1) = (amps[b], amps[b | bit]);
            amps[b] = m[0][0] * a0 + m[0][1] * a1;
            amps[b | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

pub(crate) fn apply_gate(amps: &mut [Complex64], gate: &Gate) {
    let r = |x: f64| Complex64::new(x, 0.0);
    match *gate {
        Gate::H(q) => apply_1q(amps, q, [[r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)], [r(FRAC_1_SQRT_2), r(-FRAC_1_SQRT_2)]]),
        Gate::Rx(q, t) => {
            let (s, c) = (t / 2.0).sin_cos();
            let ms = Complex64::new(0.0, -s);
            apply_1q(amps, q, [[r(c), ms], [ms, r(c)]]);
        }
        Gate::Rz(q, t) => {
            let z = Complex64::new(0.0, 0.0);
            apply_1q(amps, q, [[Complex64::from_polar(1.0, -t / 2.0), z], [z, Complex64::from_polar(1.0, t / 2.0)]]);
        }
        Gate::Cnot { control, target } => {
            let (c, t) = (1usize << control, 1usize << target);
            for b in 0..amps.len() {
                if b & c != 0 && b & t == 0 {
                    amps.swap(b, b | t);
                }
            }
        }
    }
}
