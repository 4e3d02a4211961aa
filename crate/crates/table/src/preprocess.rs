//! Fixpoint reduction of column equations by binary logical constraints.
//!
//! Passes run in priority order and the loop restarts after any change:
//!
//! 1. range fixing: with monomials treated as independent bits, a variable
//!    whose value 1 (or a monomial whose value 0) makes 0 unattainable is fixed;
//! 2. aliases: `a − b = 0` and `a + b − 1 = 0` eliminate one variable; an
//!    alias whose substitution would clear the whole system is kept as an
//!    equation, and other constraints it implies are dropped;
//! 3. `a + b − 2c = 0` forces `a = b = c`;
//!
//! and once nothing else applies, carries with unit coefficient in
//! homogeneous linear equations are solved for, keeping the binary guard
//! `e(e − 1) = 0` on the substituted expression.

use adcd_encoding::{BinaryPolynomial, Monomial, Rational, Var};
use num_traits::{One, Signed, Zero};

use crate::equations::EquationSystem;
use crate::{Result, TableError};

const MAX_ACTIONS: usize = 100_000;

/// Preference for keeping a term as the representative of an equality;
/// lower ranks are kept, higher ranks are eliminated first.
fn rank(m: &Monomial) -> (u8, i8, u32, u32) {
    match m.single() {
        Some(Var::Y(j)) => (0, -1, j, 0),
        Some(Var::X(i)) => (0, 0, i, 0),
        Some(Var::C(i, j)) => (1, 0, i, j),
        None => (2, 0, 0, 0),
    }
}

fn var_rank(v: Var) -> (u8, i8, u32, u32) {
    rank(&Monomial::var(v))
}

fn one() -> Rational {
    Rational::one()
}

struct Engine {
    sys: EquationSystem,
}

enum Fix {
    Zero(Var),
    One(Monomial),
}

impl Engine {
    fn apply(&mut self, v: Var, e: BinaryPolynomial, why: &str) {
        self.sys.log.push(format!("{why}: {v} := {e}"));
        for sub in self.sys.substitutions.values_mut() {
            *sub = sub.substitute(&v, &e);
        }
        for q in self.sys.constraints.iter_mut() {
            *q = q.substitute(&v, &e);
        }
        self.sys.constraints.retain(|q| !q.is_zero());
        self.sys.substitutions.insert(v, e);
    }

    fn would_empty(&self, v: &Var, e: &BinaryPolynomial) -> bool {
        self.sys.constraints.iter().all(|q| q.substitute(v, e).is_zero())
    }

    fn dedupe(&mut self) {
        let mut kept: Vec<BinaryPolynomial> = Vec::with_capacity(self.sys.constraints.len());
        for q in self.sys.constraints.drain(..) {
            if q.is_zero() {
                continue;
            }
            let neg = q.scale(-one());
            if !kept.contains(&q) && !kept.contains(&neg) {
                kept.push(q);
            }
        }
        self.sys.constraints = kept;
    }

    fn range_fix(&self) -> Result<Option<Fix>> {
        for q in &self.sys.constraints {
            let (lo, hi) = q.loose_range();
            if lo.is_positive() || hi.is_negative() {
                return Err(TableError::Infeasible(q.to_string()));
            }
            let c0 = q.constant_term();
            let terms: Vec<_> = q.terms().filter(|(m, _)| !m.is_one()).collect();
            for (m, c) in &terms {
                if terms.len() == 1 && c0.is_zero() && m.degree() > 1 {
                    break;
                }
                let c = **c;
                if let Some(v) = m.single() {
                    if (c.is_positive() && (lo + c).is_positive()) || (c.is_negative() && (hi + c).is_negative()) {
                        return Ok(Some(Fix::Zero(v)));
                    }
                }
                if (c.is_positive() && (hi - c).is_negative()) || (c.is_negative() && (lo - c).is_positive()) {
                    return Ok(Some(Fix::One((*m).clone())));
                }
            }
        }
        Ok(None)
    }

    /// Substitutions implied by `m₁ − m₂ = 0` or `m₁ + m₂ − 1 = 0`, best first.
    fn alias_candidates(q: &BinaryPolynomial) -> Vec<(Var, BinaryPolynomial)> {
        let c0 = q.constant_term();
        let terms: Vec<_> = q.terms().filter(|(m, _)| !m.is_one()).collect();
        if terms.len() != 2 {
            return Vec::new();
        }
        let ((m1, a), (m2, b)) = (terms[0], terms[1]);
        let mut cands = Vec::new();
        if c0.is_zero() && *a == -*b {
            for (mv, other) in [(m1, m2), (m2, m1)] {
                let Some(v) = mv.single() else { continue };
                if other.contains(&v) {
                    continue;
                }
                if other.single().is_some() || v.is_carry() {
                    cands.push((v, BinaryPolynomial::monomial(other.clone(), one())));
                }
            }
            cands.sort_by_key(|(v, _)| std::cmp::Reverse(var_rank(*v)));
        }
        if !c0.is_zero() && *a == *b && *a == -c0 {
            if let (Some(v1), Some(v2)) = (m1.single(), m2.single()) {
                let (v, o) = if var_rank(v1) > var_rank(v2) { (v1, v2) } else { (v2, v1) };
                cands.push((v, BinaryPolynomial::constant(one()).sub(&BinaryPolynomial::var(o))));
            }
        }
        cands
    }

    fn alias(&self) -> Option<(Var, BinaryPolynomial)> {
        self.sys
            .constraints
            .iter()
            .filter_map(|q| Self::alias_candidates(q).into_iter().next())
            .find(|(v, e)| !self.would_empty(v, e))
    }

    /// Constraints made redundant by an alias that is kept as an equation
    /// because substituting it would leave no constraint at all.
    fn implied(&self) -> Vec<usize> {
        for (k, q) in self.sys.constraints.iter().enumerate() {
            for (v, e) in Self::alias_candidates(q) {
                let hits: Vec<usize> = (0..self.sys.constraints.len())
                    .filter(|&j| j != k && self.sys.constraints[j].substitute(&v, &e).is_zero())
                    .collect();
                if !hits.is_empty() {
                    return hits;
                }
            }
        }
        Vec::new()
    }

    /// Finds `a + b − 2c = 0` (up to sign) with the best representative.
    fn triple(&self) -> Option<(usize, Vec<Monomial>, Monomial)> {
        let mut best: Option<(usize, Vec<Monomial>, Monomial)> = None;
        for (idx, q) in self.sys.constraints.iter().enumerate() {
            if !q.constant_term().is_zero() || q.len() != 3 {
                continue;
            }
            let mut cs: Vec<(Monomial, Rational)> = q.terms().map(|(m, c)| (m.clone(), *c)).collect();
            let fits = |cs: &[(Monomial, Rational)]| cs[1].1 == cs[2].1 && cs[0].1 == -cs[1].1 * Rational::from_integer(2);
            cs.sort_by(|a, b| a.1.cmp(&b.1));
            if !fits(&cs) {
                cs.sort_by(|a, b| b.1.cmp(&a.1));
                if !fits(&cs) {
                    continue;
                }
            }
            let ms: Vec<Monomial> = cs.into_iter().map(|(m, _)| m).collect();
            let r = ms.iter().min_by_key(|m| rank(m)).cloned().expect("three terms");
            if best.as_ref().map_or(true, |(_, _, b)| rank(&r) < rank(b)) {
                best = Some((idx, ms, r));
            }
        }
        best
    }

    fn carry_isolation(&self) -> Option<(usize, Var, BinaryPolynomial)> {
        for (idx, q) in self.sys.constraints.iter().enumerate() {
            if !q.constant_term().is_zero() || !q.is_linear() {
                continue;
            }
            let carry = q
                .terms()
                .filter_map(|(m, c)| m.single().filter(|v| v.is_carry() && c.abs().is_one()).map(|v| (v, *c)))
                .max_by_key(|(v, _)| *v);
            if let Some((v, c)) = carry {
                let rest = q.sub(&BinaryPolynomial::var(v).scale(c));
                return Some((idx, v, rest.scale(-one() / c)));
            }
        }
        None
    }

    fn run(mut self) -> Result<EquationSystem> {
        let mut actions = 0usize;
        loop {
            actions += 1;
            if actions > MAX_ACTIONS {
                return Err(TableError::NoFixpoint);
            }
            self.dedupe();
            if let Some(fix) = self.range_fix()? {
                match fix {
                    Fix::Zero(v) => self.apply(v, BinaryPolynomial::zero(), "range"),
                    Fix::One(m) => {
                        for v in m.vars().copied().collect::<Vec<_>>() {
                            self.apply(v, BinaryPolynomial::constant(one()), "range");
                        }
                    }
                }
                continue;
            }
            if let Some((v, e)) = self.alias() {
                self.apply(v, e, "alias");
                continue;
            }
            let implied = self.implied();
            if !implied.is_empty() {
                for j in implied.into_iter().rev() {
                    let q = self.sys.constraints.remove(j);
                    self.sys.log.push(format!("implied: {q} = 0"));
                }
                continue;
            }
            if let Some((idx, ms, r)) = self.triple() {
                let rep = BinaryPolynomial::monomial(r.clone(), one());
                let mut sub = None;
                let mut extra = Vec::new();
                for m in ms.iter().filter(|m| **m != r) {
                    match m.single() {
                        Some(v) if (v.is_carry() || r.single().is_some()) && !r.contains(&v) && sub.is_none() => {
                            sub = Some((v, rep.clone()));
                        }
                        _ => extra.push(BinaryPolynomial::monomial(m.clone(), one()).sub(&rep)),
                    }
                }
                self.sys.constraints.remove(idx);
                self.sys.constraints.extend(extra);
                if let Some((v, e)) = sub {
                    self.apply(v, e, "equal");
                }
                continue;
            }
            break;
        }
        loop {
            self.dedupe();
            let Some((idx, v, e)) = self.carry_isolation() else { break };
            self.sys.constraints.remove(idx);
            let guard = e.mul(&e.sub(&BinaryPolynomial::constant(one())));
            if !guard.is_zero() {
                self.sys.constraints.push(guard);
            }
            self.apply(v, e, "carry");
        }
        self.dedupe();
        Ok(self.sys)
    }
}

/// Reduces the system while preserving its set of binary solutions.
pub fn preprocess(sys: &EquationSystem) -> Result<EquationSystem> {
    let mut start = sys.clone();
    start.constraints.retain(|q| !q.is_zero());
    Engine { sys: start }.run()
}
