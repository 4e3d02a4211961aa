use std::fmt;

use crate::{PauliError, Result};

pub const MAX_SITES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

/// Operator pattern without coefficient. Field order gives the canonical
/// ordering: by Z-mask first, then X-mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PauliString {
    z: u64,
    x: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { z: 0, x: 0 };

    pub fn from_masks(x: u64, z: u64) -> Self {
        PauliString { z, x }
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Pattern with `op` on the given 1-based sites, identity elsewhere.
    pub fn on_sites(n: usize, ops: &[(usize, Pauli)]) -> Result<Self> {
        if n > MAX_SITES {
            return Err(PauliError::TooManySites(n));
        }
        let mut s = PauliString::IDENTITY;
        for &(site, op) in ops {
            if site == 0 || site > n {
                return Err(PauliError::SiteOutOfRange { site, n });
            }
            s.set(site, op);
        }
        Ok(s)
    }

    /// Parses a label such as `"ZZIIII"`; the leftmost symbol is site `n`.
    pub fn from_label(label: &str) -> Result<Self> {
        let chars: Vec<char> = label.chars().collect();
        let n = chars.len();
        if n > MAX_SITES {
            return Err(PauliError::TooManySites(n));
        }
        let mut s = PauliString::IDENTITY;
        for (k, c) in chars.iter().enumerate() {
            let op = Pauli::from_symbol(*c).ok_or_else(|| PauliError::BadLabel(label.to_string()))?;
            s.set(n - k, op);
        }
        Ok(s)
    }

    pub fn label(&self, n: usize) -> String {
        (1..=n).rev().map(|site| self.get(site).symbol()).collect()
    }

    pub fn get(&self, site: usize) -> Pauli {
        let bit = 1u64 << (site - 1);
        match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn set(&mut self, site: usize, op: Pauli) {
        let bit = 1u64 << (site - 1);
        let (bx, bz) = op.bits();
        self.x = if bx { self.x | bit } else { self.x & !bit };
        self.z = if bz { self.z | bit } else { self.z & !bit };
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Product pattern together with the phase exponent `k` of `iᵏ`.
    pub fn mul(&self, other: &PauliString) -> (PauliString, u32) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // P(x, z) = i^{|x∧z|} XˣZᶻ
        let e = self.y_count() as i64 + other.y_count() as i64 + 2 * (self.z & other.x).count_ones() as i64
            - (x & z).count_ones() as i64;
        (PauliString { z, x }, e.rem_euclid(4) as u32)
    }

    /// Sites `1..=n` carrying a non-identity operator, ascending.
    pub fn sites(&self) -> Vec<usize> {
        let mut s = self.support();
        let mut out = Vec::with_capacity(s.count_ones() as usize);
        while s != 0 {
            out.push(s.trailing_zeros() as usize + 1);
            s &= s - 1;
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = 64 - self.support().leading_zeros() as usize;
        write!(f, "{}", self.label(top.max(1)))
    }
}
