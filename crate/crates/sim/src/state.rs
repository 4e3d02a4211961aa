use adcd_pauli::{Complex64, PauliString, PauliSum, PauliTerm};

use crate::{Result, SimError, MAX_QUBITS};

/// Dense register; bit `k` of a basis index is qubit `k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(SimError::TooManyQubits { n, cap: MAX_QUBITS });
    }
    Ok(())
}

impl StateVector {
    /// `(|0⟩ + |1⟩)^⊗n / 2^{n/2}`.
    pub fn plus_state(n: usize) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(StateVector { n, amps: vec![a; dim] })
    }

    pub fn basis(n: usize, index: u64) -> Result<Self> {
        check_size(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        let slot = amps.get_mut(index as usize).ok_or(SimError::BasisIndex { index, n })?;
        *slot = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(SimError::Dimension(dim));
        }
        let n = dim.trailing_zeros() as usize;
        check_size(n)?;
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps[index as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let k = self.norm().recip();
        self.amps.iter_mut().for_each(|a| *a *= k);
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, k: Complex64) {
        self.amps.iter_mut().for_each(|a| *a *= k);
    }

    /// Applies `exp(−iθP)` for a unit-coefficient Pauli term.
    pub fn apply_pauli_exponential(&mut self, theta: f64, term: &PauliTerm) -> Result<()> {
        if term.coeff != Complex64::new(1.0, 0.0) {
            return Err(SimError::NonUnitCoefficient(term.coeff));
        }
        self.check_register(term.n())?;
        self.apply_string_exponential(theta, &term.string);
        Ok(())
    }

    /// `exp(−iθP) = cos θ − i sin θ P` with
    /// `P|b⟩ = i^{#Y} (−1)^{|b ∧ z|} |b ⊕ x⟩`.
    pub fn apply_string_exponential(&mut self, theta: f64, p: &PauliString) {
        let (x, z) = (p.x_mask() as usize, p.z_mask() as usize);
        let (s, c) = theta.sin_cos();
        if x == 0 {
            let plus = Complex64::new(c, -s);
            let minus = Complex64::new(c, s);
            for (b, a) in self.amps.iter_mut().enumerate() {
                *a *= if (b & z).count_ones() % 2 == 0 { plus } else { minus };
            }
            return;
        }
        let phase = Complex64::i().powu(p.y_count());
        // −i sin θ · i^{#Y}
        let k = Complex64::new(0.0, -s) * phase;
        let pivot = 1usize << (usize::BITS - 1 - x.leading_zeros());
        for b in 0..self.amps.len() {
            if b & pivot != 0 {
                continue;
            }
            let f = b ^ x;
            let sign = |idx: usize| if (idx & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            let (ab, af) = (self.amps[b], self.amps[f]);
            self.amps[b] = ab * c + k * sign(f) * af;
            self.amps[f] = af * c + k * sign(b) * ab;
        }
    }

    /// `H|ψ⟩`.
    pub fn apply_sum(&self, h: &PauliSum) -> Result<StateVector> {
        self.check_register(h.n())?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (p, cf) in h.iter() {
            let (x, z) = (p.x_mask() as usize, p.z_mask() as usize);
            let k = cf * Complex64::i().powu(p.y_count());
            for (b, a) in self.amps.iter().enumerate() {
                let sign = if (b & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                out[b ^ x] += k * sign * a;
            }
        }
        Ok(StateVector { n: self.n, amps: out })
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn expectation(&self, h: &PauliSum) -> Result<Complex64> {
        Ok(self.inner(&self.apply_sum(h)?))
    }

    fn check_register(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(SimError::RegisterMismatch { state: self.n, operator: n });
        }
        Ok(())
    }
}
