use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rational = Ratio<i128>;

/// Binary variable of a factoring problem: factor bits and carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(u32),
    Y(u32),
    /// Carry from column `i` into column `j`.
    C(u32, u32),
}

impl Var {
    pub fn is_carry(&self) -> bool {
        matches!(self, Var::C(..))
    }

    pub fn parse(s: &str) -> Option<Var> {
        let (head, rest) = s.split_at(1.min(s.len()));
        match head {
            "x" => rest.parse().ok().map(Var::X),
            "y" => rest.parse().ok().map(Var::Y),
            "c" => {
                let (i, j) = rest.split_once('_')?;
                Some(Var::C(i.parse().ok()?, j.parse().ok()?))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(j) => write!(f, "y{j}"),
            Var::C(i, j) => write!(f, "c{i}_{j}"),
        }
    }
}

/// Product of distinct variables; the empty monomial is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(BTreeSet<Var>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeSet::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(BTreeSet::from([v]))
    }

    pub fn from_vars<I: IntoIterator<Item = Var>>(vars: I) -> Self {
        Monomial(vars.into_iter().collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn single(&self) -> Option<Var> {
        if self.0.len() == 1 {
            self.0.iter().next().copied()
        } else {
            None
        }
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.0.contains(v)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter()
    }

    /// Multilinear product: `v·v = v`.
    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.union(&other.0).copied().collect())
    }

    pub fn without(&self, v: &Var) -> Monomial {
        let mut m = self.0.clone();
        m.remove(v);
        Monomial(m)
    }

    pub fn eval<F: Fn(&Var) -> bool>(&self, value: F) -> bool {
        self.0.iter().all(value)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(Var::to_string).collect();
        f.write_str(&parts.join("*"))
    }
}

/// Multilinear polynomial over binary variables with exact rational
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl BinaryPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c.into());
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(v), Rational::one());
        p
    }

    pub fn monomial(m: Monomial, c: impl Into<Rational>) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).copied().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_linear(&self) -> bool {
        self.degree() <= 1
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars().copied()).collect()
    }

    pub fn add(&self, other: &BinaryPolynomial) -> BinaryPolynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &BinaryPolynomial) -> BinaryPolynomial {
        self.add(&other.scale(-Rational::one()))
    }

    pub fn scale(&self, k: Rational) -> BinaryPolynomial {
        if k.is_zero() {
            return Self::zero();
        }
        BinaryPolynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &BinaryPolynomial) -> BinaryPolynomial {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        out
    }

    pub fn square(&self) -> BinaryPolynomial {
        self.mul(self)
    }

    /// Replaces every occurrence of `v` by `e`.
    pub fn substitute(&self, v: &Var, e: &BinaryPolynomial) -> BinaryPolynomial {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.contains(v) {
                let rest = BinaryPolynomial::monomial(m.without(v), *c);
                for (m2, c2) in &rest.mul(e).terms {
                    out.add_term(m2.clone(), *c2);
                }
            } else {
                out.add_term(m.clone(), *c);
            }
        }
        out
    }

    pub fn eval<F: Fn(&Var) -> bool>(&self, value: F) -> Rational {
        self.terms.iter().filter(|(m, _)| m.eval(&value)).map(|(_, c)| *c).sum()
    }

    pub fn eval_map(&self, assignment: &BTreeMap<Var, bool>) -> Rational {
        self.eval(|v| assignment.get(v).copied().unwrap_or(false))
    }

    /// Attainable range when every monomial is treated as an independent bit.
    pub fn loose_range(&self) -> (Rational, Rational) {
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (m, c) in &self.terms {
            if m.is_one() {
                lo += c;
                hi += c;
            } else if c.is_positive() {
                hi += c;
            } else {
                lo += c;
            }
        }
        (lo, hi)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for BinaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (k, c.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                _ => write!(f, " {sign} ")?,
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}
