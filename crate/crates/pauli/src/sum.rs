use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::term::phase;
use crate::{check_sites, format_coeff, parse_coeff, PauliError, PauliString, PauliTerm, Result, MAX_SITES, ZERO_TOL};

/// Canonical sum of Pauli terms over a fixed number of sites.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize, coeff: Complex64) -> Self {
        let mut s = PauliSum::zero(n);
        s.add_term_raw(PauliString::IDENTITY, coeff);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = PauliTerm>>(n: usize, terms: I) -> Result<Self> {
        let mut s = PauliSum::zero(n);
        for t in terms {
            s.add_term(&t)?;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, s: &PauliString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or_default()
    }

    /// Coefficient of the pattern given as a label, e.g. `"ZZII"`.
    pub fn coeff_of(&self, label: &str) -> Result<Complex64> {
        Ok(self.coeff(&PauliString::from_label(label)?))
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = PauliTerm> + '_ {
        let n = self.n;
        self.terms.iter().map(move |(s, c)| PauliTerm::identity(n, *c).with_string(*s))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, t: &PauliTerm) -> Result<()> {
        check_sites(self.n, t.n())?;
        self.add_term_raw(t.string, t.coeff);
        Ok(())
    }

    fn add_term_raw(&mut self, s: PauliString, c: Complex64) {
        let e = self.terms.entry(s).or_default();
        *e += c;
        if e.norm() < ZERO_TOL {
            self.terms.remove(&s);
        }
    }

    /// Drops coefficients with magnitude below [`ZERO_TOL`].
    pub fn canonicalize(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() >= ZERO_TOL);
        self
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        check_sites(self.n, other.n)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term_raw(*s, *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PauliSum) -> Result<PauliSum> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, k: Complex64) -> PauliSum {
        let terms = self.terms.iter().map(|(s, c)| (*s, c * k)).collect();
        PauliSum { n: self.n, terms }.canonicalize()
    }

    pub fn scale_re(&self, k: f64) -> PauliSum {
        self.scale(Complex64::new(k, 0.0))
    }

    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        check_sites(self.n, other.n)?;
        let mut out = PauliSum::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (s, k) = a.mul(b);
                out.add_term_raw(s, ca * cb * phase(k));
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &PauliSum) -> Result<PauliSum> {
        check_sites(self.n, other.n)?;
        let mut out = PauliSum::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.commutes_with(b) {
                    continue;
                }
                let (s, k) = a.mul(b);
                out.add_term_raw(s, 2.0 * ca * cb * phase(k));
            }
        }
        Ok(out)
    }

    pub fn hs_inner(&self, other: &PauliSum) -> Result<Complex64> {
        check_sites(self.n, other.n)?;
        let (small, large, flip) =
            if self.len() <= other.len() { (self, other, false) } else { (other, self, true) };
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, c) in &small.terms {
            if let Some(d) = large.terms.get(s) {
                acc += if flip { d.conj() * c } else { c.conj() * d };
            }
        }
        Ok(acc)
    }

    /// `Tr(a†a)/2ⁿ`, the sum of squared coefficient magnitudes.
    pub fn norm_sq(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn dagger(&self) -> PauliSum {
        let terms = self.terms.iter().map(|(s, c)| (*s, c.conj())).collect();
        PauliSum { n: self.n, terms }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|s| s.is_diagonal())
    }

    /// Keeps the terms for which `keep` returns true.
    pub fn filter<F: Fn(&PauliString) -> bool>(&self, keep: F) -> PauliSum {
        let terms = self.terms.iter().filter(|(s, _)| keep(s)).map(|(s, c)| (*s, *c)).collect();
        PauliSum { n: self.n, terms }
    }

    /// One line per term, `"coeff label"`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for t in self.terms() {
            out.push_str(&format!("{} {}\n", format_coeff(t.coeff), t.label()));
        }
        out
    }

    /// Inverse of [`PauliSum::render`]. Empty input needs the site count.
    pub fn parse(text: &str, n: usize) -> Result<PauliSum> {
        if n > MAX_SITES {
            return Err(PauliError::TooManySites(n));
        }
        let mut s = PauliSum::zero(n);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (c, label) = line.rsplit_once(' ').ok_or_else(|| PauliError::BadLine(line.to_string()))?;
            let coeff = parse_coeff(c).ok_or_else(|| PauliError::BadLine(line.to_string()))?;
            let t = PauliTerm::from_label(label, coeff)?;
            s.add_term(&t)?;
        }
        Ok(s)
    }
}

impl PauliTerm {
    pub(crate) fn with_string(mut self, s: PauliString) -> Self {
        self.string = s;
        self
    }
}

impl From<PauliTerm> for PauliSum {
    fn from(t: PauliTerm) -> Self {
        let mut s = PauliSum::zero(t.n());
        s.add_term_raw(t.string, t.coeff);
        s
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
