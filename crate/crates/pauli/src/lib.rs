//! Pauli strings stored as (X-mask, Z-mask) pairs.
//!
//! Sites are 1-based; bit `k` of either mask refers to site `k + 1`.
//! Rendered strings put the highest site on the left.

mod string;
mod sum;
mod term;

pub use string::{Pauli, PauliString, MAX_SITES};
pub use sum::PauliSum;
pub use term::PauliTerm;

pub use num_complex::Complex64;

/// Coefficients below this magnitude are dropped on canonicalization.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PauliError {
    #[error("site count mismatch: {left} vs {right}")]
    SiteMismatch { left: usize, right: usize },
    #[error("site {site} out of range 1..={n}")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("at most {MAX_SITES} sites supported, got {0}")]
    TooManySites(usize),
    #[error("cannot parse Pauli label {0:?}")]
    BadLabel(String),
    #[error("cannot parse term line {0:?}")]
    BadLine(String),
}

pub type Result<T> = std::result::Result<T, PauliError>;

pub(crate) fn check_sites(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(PauliError::SiteMismatch { left, right })
    }
}

/// Product `a·b`.
pub fn multiply(a: &PauliTerm, b: &PauliTerm) -> Result<PauliTerm> {
    a.mul(b)
}

/// `ab − ba` in canonical form.
pub fn commutator(a: &PauliSum, b: &PauliSum) -> Result<PauliSum> {
    a.commutator(b)
}

/// Normalized Hilbert–Schmidt product `Tr(a†b)/2ⁿ`.
pub fn hs_inner(a: &PauliSum, b: &PauliSum) -> Result<Complex64> {
    a.hs_inner(b)
}

pub(crate) fn format_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{:?}", c.re)
    } else if c.re == 0.0 {
        format!("{:?}i", c.im)
    } else {
        format!("({:?}{}{:?}i)", c.re, if c.im < 0.0 { "-" } else { "+" }, c.im.abs())
    }
}

pub(crate) fn parse_coeff(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if let Ok(re) = s.parse::<f64>() {
        return Some(Complex64::new(re, 0.0));
    }
    let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
    let body = inner.strip_suffix('i')?;
    if let Ok(im) = body.parse::<f64>() {
        return Some(Complex64::new(0.0, im));
    }
    // split at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
    let re = body[..cut].parse::<f64>().ok()?;
    let im = body[cut..].parse::<f64>().ok()?;
    Some(Complex64::new(re, im))
}
