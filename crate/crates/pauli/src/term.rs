use std::fmt;

use num_complex::Complex64;

use crate::{check_sites, format_coeff, Pauli, PauliError, PauliString, Result, MAX_SITES};

const PHASES: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

pub(crate) fn phase(k: u32) -> Complex64 {
    PHASES[(k % 4) as usize]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    n: usize,
    pub string: PauliString,
    pub coeff: Complex64,
}

impl PauliTerm {
    pub fn new(n: usize, string: PauliString, coeff: Complex64) -> Result<Self> {
        if n > MAX_SITES {
            return Err(PauliError::TooManySites(n));
        }
        if n < 64 && string.support() >> n != 0 {
            return Err(PauliError::SiteOutOfRange { site: 64 - string.support().leading_zeros() as usize, n });
        }
        Ok(PauliTerm { n, string, coeff })
    }

    pub fn identity(n: usize, coeff: Complex64) -> Self {
        PauliTerm { n, string: PauliString::IDENTITY, coeff }
    }

    pub fn from_label(label: &str, coeff: Complex64) -> Result<Self> {
        Ok(PauliTerm { n: label.chars().count(), string: PauliString::from_label(label)?, coeff })
    }

    pub fn on_sites(n: usize, ops: &[(usize, Pauli)], coeff: Complex64) -> Result<Self> {
        Ok(PauliTerm { n, string: PauliString::on_sites(n, ops)?, coeff })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> String {
        self.string.label(self.n)
    }

    pub fn ops(&self) -> Vec<Pauli> {
        (1..=self.n).map(|s| self.string.get(s)).collect()
    }

    pub fn mul(&self, other: &PauliTerm) -> Result<PauliTerm> {
        check_sites(self.n, other.n)?;
        let (string, k) = self.string.mul(&other.string);
        Ok(PauliTerm { n: self.n, string, coeff: self.coeff * other.coeff * phase(k) })
    }

    pub fn scale(&self, s: Complex64) -> PauliTerm {
        PauliTerm { coeff: self.coeff * s, ..*self }
    }

    pub fn dagger(&self) -> PauliTerm {
        PauliTerm { coeff: self.coeff.conj(), ..*self }
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", format_coeff(self.coeff), self.label())
    }
}
