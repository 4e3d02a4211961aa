use crate::ising::IsingHamiltonian;
use crate::poly::{BinaryPolynomial, Rational, Var};
use crate::{EncodingError, Result};

pub const DEFAULT_QUBIT_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sizing {
    /// Register sizes from the general bound on N.
    FormulaBound,
    /// Bit lengths of the two factors.
    KnownLengths { bits_x: u32, bits_y: u32 },
}

/// `N` with register sizing. Only the least significant bit of each factor
/// is fixed; the unknown bits `x₁…`, `y₁…` are placed on qubits in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorizationInstance {
    pub n: u64,
    pub sizing: Sizing,
    pub cap: usize,
}

fn bit_length(v: u64) -> u32 {
    64 - v.leading_zeros()
}

/// Unknown-bit counts `(n_x, n_y) = (m(⌊√N⌋_odd) − 1, m(⌊N/3⌋) − 1)`.
pub fn factor_register_sizes(n: u64) -> Result<(u32, u32)> {
    if n % 2 == 0 {
        return Err(EncodingError::EvenN(n));
    }
    if n < 9 {
        return Err(EncodingError::TooSmall(n));
    }
    let mut root = n.isqrt();
    if root % 2 == 0 {
        root -= 1;
    }
    Ok((bit_length(root) - 1, bit_length(n / 3) - 1))
}

impl FactorizationInstance {
    pub fn new(n: u64, sizing: Sizing) -> Result<Self> {
        if n % 2 == 0 {
            return Err(EncodingError::EvenN(n));
        }
        if n <= 3 {
            return Err(EncodingError::TooSmall(n));
        }
        match sizing {
            Sizing::FormulaBound => {
                factor_register_sizes(n)?;
            }
            Sizing::KnownLengths { bits_x, bits_y } => {
                if bits_x < 2 || bits_y < 2 {
                    return Err(EncodingError::InvalidBits(bits_x, bits_y));
                }
            }
        }
        Ok(FactorizationInstance { n, sizing, cap: DEFAULT_QUBIT_CAP })
    }

    pub fn known(n: u64, bits_x: u32, bits_y: u32) -> Result<Self> {
        Self::new(n, Sizing::KnownLengths { bits_x, bits_y })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Unknown bits in each register.
    pub fn unknowns(&self) -> (u32, u32) {
        match self.sizing {
            Sizing::FormulaBound => factor_register_sizes(self.n).expect("validated on construction"),
            Sizing::KnownLengths { bits_x, bits_y } => (bits_x - 1, bits_y - 1),
        }
    }

    pub fn qubits(&self) -> usize {
        let (nx, ny) = self.unknowns();
        (nx + ny) as usize
    }

    pub fn var_order(&self) -> Vec<Var> {
        let (nx, ny) = self.unknowns();
        (1..=nx).map(Var::X).chain((1..=ny).map(Var::Y)).collect()
    }

    pub fn x_poly(&self) -> BinaryPolynomial {
        register_poly(self.unknowns().0, Var::X)
    }

    pub fn y_poly(&self) -> BinaryPolynomial {
        register_poly(self.unknowns().1, Var::Y)
    }

    /// `(N − x·y)²` over the unknown bits.
    pub fn cost(&self) -> BinaryPolynomial {
        let n = BinaryPolynomial::constant(Rational::from_integer(self.n as i128));
        n.sub(&self.x_poly().mul(&self.y_poly())).square()
    }

    /// Factors encoded by basis index `index`.
    pub fn decode_index(&self, index: u64) -> (u64, u64) {
        let (nx, ny) = self.unknowns();
        let mut x = 1u64;
        let mut y = 1u64;
        for l in 1..=nx {
            x |= (index >> (l - 1) & 1) << l;
        }
        for m in 1..=ny {
            y |= (index >> (nx + m - 1) & 1) << m;
        }
        (x, y)
    }

    /// Decodes a label printed with qubit `n` leftmost.
    pub fn decode_bitstring(&self, label: &str) -> Result<(u64, u64)> {
        let bits = label.trim_start_matches('|').trim_end_matches('⟩').trim_end_matches('>');
        if bits.chars().count() != self.qubits() {
            return Err(EncodingError::LabelLength { got: bits.chars().count(), expected: self.qubits() });
        }
        let index = crate::ising::parse_basis_label(bits).ok_or_else(|| EncodingError::BadLabel(label.into()))?;
        Ok(self.decode_index(index))
    }
}

fn register_poly(unknowns: u32, var: fn(u32) -> Var) -> BinaryPolynomial {
    let mut p = BinaryPolynomial::constant(Rational::from_integer(1));
    for l in 1..=unknowns {
        p = p.add(&BinaryPolynomial::var(var(l)).scale(Rational::from_integer(1i128 << l)));
    }
    p
}

/// Direct encoding `H_f = (N − x·y)²` with `x̂_l = (1 − σᶻ_l)/2`.
pub fn build_direct_hamiltonian(inst: &FactorizationInstance) -> Result<IsingHamiltonian> {
    let n = inst.qubits();
    if n > inst.cap {
        return Err(EncodingError::CapExceeded { n, cap: inst.cap });
    }
    IsingHamiltonian::from_polynomial(&inst.cost(), &inst.var_order())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn register_sizes_from_bound() {
        assert_eq!(factor_register_sizes(217).unwrap(), (3, 6));
        assert_eq!(factor_register_sizes(9).unwrap().0, 1);
        assert!(factor_register_sizes(10).is_err());
        assert!(factor_register_sizes(7).is_err());
    }

    #[test]
    fn all_zero_label_is_one_times_one() {
        let inst = FactorizationInstance::known(217, 3, 5).unwrap();
        assert_eq!(inst.decode_bitstring("000000").unwrap(), (1, 1));
    }

    #[test]
    fn cap_is_enforced() {
        let inst = FactorizationInstance::known(217, 3, 5).unwrap().with_cap(5);
        assert_eq!(build_direct_hamiltonian(&inst), Err(EncodingError::CapExceeded { n: 6, cap: 5 }));
    }
}
