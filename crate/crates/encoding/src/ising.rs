use std::collections::BTreeMap;

use adcd_pauli::{Complex64, PauliString, PauliSum, PauliTerm};
use num_traits::{ToPrimitive, Zero};

use crate::poly::{BinaryPolynomial, Rational, Var};
use crate::{EncodingError, Result};

/// Largest register that exhaustive diagonal scans accept.
pub const EXHAUSTIVE_CAP: usize = 24;

/// Diagonal Hamiltonian `Σ c_S Π_{i∈S} σᵢᶻ` with exact coefficients,
/// keyed by Z-mask (bit `k` is qubit `k + 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsingHamiltonian {
    n: usize,
    terms: BTreeMap<u64, Rational>,
}

impl IsingHamiltonian {
    pub fn zero(n: usize) -> Self {
        IsingHamiltonian { n, terms: BTreeMap::new() }
    }

    /// Builds from `(sites, coefficient)` pairs with 1-based sites.
    pub fn from_terms<I: IntoIterator<Item = (Vec<usize>, Rational)>>(n: usize, terms: I) -> Result<Self> {
        let mut h = IsingHamiltonian::zero(n);
        for (sites, c) in terms {
            let mut mask = 0u64;
            for s in sites {
                if s == 0 || s > n {
                    return Err(EncodingError::SiteOutOfRange { site: s, n });
                }
                mask ^= 1 << (s - 1);
            }
            h.add(mask, c);
        }
        Ok(h)
    }

    fn add(&mut self, mask: u64, c: Rational) {
        let e = self.terms.entry(mask).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    /// Maps `q ↦ (1 − σᶻ)/2` with `order[k]` placed on qubit `k + 1`.
    pub fn from_polynomial(f: &BinaryPolynomial, order: &[Var]) -> Result<Self> {
        let qubit: BTreeMap<Var, usize> = order.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let mut h = IsingHamiltonian::zero(order.len());
        for (m, c) in f.terms() {
            let mut bits = Vec::with_capacity(m.degree());
            for v in m.vars() {
                bits.push(*qubit.get(v).ok_or(EncodingError::UnmappedVariable(*v))?);
            }
            let scale = *c / Rational::from_integer(1i128 << bits.len());
            // Π (1 − Zᵢ)/2 = 2⁻ᵏ Σ_S (−1)^{|S|} Z_S
            for subset in 0u64..(1u64 << bits.len()) {
                let mut mask = 0u64;
                for (k, b) in bits.iter().enumerate() {
                    if subset >> k & 1 == 1 {
                        mask |= 1 << b;
                    }
                }
                let sign = if subset.count_ones() % 2 == 0 { scale } else { -scale };
                h.add(mask, sign);
            }
        }
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Rational)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn coeff(&self, sites: &[usize]) -> Rational {
        let mask = sites.iter().fold(0u64, |m, s| m ^ (1 << (s - 1)));
        self.terms.get(&mask).copied().unwrap_or_else(Rational::zero)
    }

    pub fn identity_coeff(&self) -> Rational {
        self.coeff(&[])
    }

    /// Terms acting on exactly `k` sites, as `(sites, coefficient)`.
    pub fn by_locality(&self, k: u32) -> Vec<(Vec<usize>, f64)> {
        self.terms
            .iter()
            .filter(|(m, _)| m.count_ones() == k)
            .map(|(m, c)| (PauliString::from_masks(0, *m).sites(), to_f64(c)))
            .collect()
    }

    pub fn max_locality(&self) -> u32 {
        self.terms.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    pub fn to_pauli_sum(&self) -> PauliSum {
        let terms = self.terms.iter().map(|(m, c)| {
            PauliTerm::new(self.n, PauliString::from_masks(0, *m), Complex64::new(to_f64(c), 0.0))
                .expect("mask within register")
        });
        PauliSum::from_terms(self.n, terms).expect("uniform register")
    }

    /// Exact diagonal entry for basis index `index`.
    pub fn energy(&self, index: u64) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| if (m & index).count_ones() % 2 == 0 { *c } else { -*c })
            .sum()
    }

    pub fn energy_f64(&self, index: u64) -> f64 {
        to_f64(&self.energy(index))
    }

    pub fn diagonal(&self) -> Result<Vec<f64>> {
        if self.n > EXHAUSTIVE_CAP {
            return Err(EncodingError::CapExceeded { n: self.n, cap: EXHAUSTIVE_CAP });
        }
        Ok((0..1u64 << self.n).map(|i| self.energy_f64(i)).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Text form, one `"coeff label"` line per term in canonical order.
    pub fn render(&self) -> String {
        self.to_pauli_sum().render()
    }
}

pub(crate) fn to_f64(c: &Rational) -> f64 {
    c.to_f64().expect("finite rational")
}

/// Label of basis index `index` with qubit `n` leftmost.
pub fn basis_label(index: u64, n: usize) -> String {
    (0..n).rev().map(|k| if index >> k & 1 == 1 { '1' } else { '0' }).collect()
}

/// Inverse of [`basis_label`].
pub fn parse_basis_label(label: &str) -> Option<u64> {
    let label = label.trim_start_matches('|').trim_end_matches('⟩').trim_end_matches('>');
    if label.is_empty() || label.len() > 63 {
        return None;
    }
    label.chars().try_fold(0u64, |acc, ch| match ch {
        '0' => Some(acc << 1),
        '1' => Some(acc << 1 | 1),
        _ => None,
    })
}

/// Minimum diagonal energy and every basis index attaining it.
pub fn exact_ground_states(h: &IsingHamiltonian) -> Result<(Rational, Vec<u64>)> {
    if h.n > EXHAUSTIVE_CAP {
        return Err(EncodingError::CapExceeded { n: h.n, cap: EXHAUSTIVE_CAP });
    }
    let mut best: Option<Rational> = None;
    let mut arg = Vec::new();
    for i in 0..1u64 << h.n {
        let e = h.energy(i);
        match best {
            Some(b) if e > b => {}
            Some(b) if e == b => arg.push(i),
            _ => {
                best = Some(e);
                arg = vec![i];
            }
        }
    }
    Ok((best.unwrap_or_else(Rational::zero), arg))
}
