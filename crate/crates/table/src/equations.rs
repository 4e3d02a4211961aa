use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use adcd_encoding::{BinaryPolynomial, Rational, Var};
use num_traits::{One, Zero};

use crate::{Result, TableError};

/// Column equations of the binary multiplication table, each asserted `= 0`,
/// together with the substitutions applied so far.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationSystem {
    pub n: u64,
    pub bits_x: u32,
    pub bits_y: u32,
    pub constraints: Vec<BinaryPolynomial>,
    /// Eliminated variables, each expressed over the surviving ones.
    pub substitutions: BTreeMap<Var, BinaryPolynomial>,
    /// Every variable of the unreduced table.
    pub variables: BTreeSet<Var>,
    /// Human-readable record of reduction steps.
    pub log: Vec<String>,
}

pub type Assignment = BTreeMap<Var, bool>;

fn int(v: i128) -> Rational {
    Rational::from_integer(v)
}

fn bit_length(v: u64) -> u32 {
    64 - v.leading_zeros()
}

/// Factor register with the first and last bit fixed to 1.
fn register(bits: u32, var: fn(u32) -> Var) -> Vec<BinaryPolynomial> {
    (0..bits)
        .map(|i| if i == 0 || i == bits - 1 { BinaryPolynomial::constant(int(1)) } else { BinaryPolynomial::var(var(i)) })
        .collect()
}

/// One equation per column `k`: partial products plus incoming carries minus
/// bit `N_k` minus `Σ 2ʲ c_{k,k+j}`. Column `k` gets the fewest outgoing
/// carries that can hold `(max column sum − N_k)/2`.
pub fn build_table_equations(n: u64, bits_x: u32, bits_y: u32) -> Result<EquationSystem> {
    if n % 2 == 0 {
        return Err(TableError::EvenN(n));
    }
    if bits_x < 2 || bits_y < 2 {
        return Err(TableError::InvalidBits(bits_x, bits_y));
    }
    let xs = register(bits_x, Var::X);
    let ys = register(bits_y, Var::Y);
    let top = (bits_x + bits_y - 2).max(bit_length(n) - 1);
    let mut incoming: BTreeMap<u32, Vec<Var>> = BTreeMap::new();
    let mut constraints = Vec::new();
    let mut variables = BTreeSet::new();
    for k in 0..=top {
        let mut lhs = BinaryPolynomial::zero();
        let mut max_sum = 0i128;
        for i in 0..bits_x {
            if k < i || k - i >= bits_y {
                continue;
            }
            let pp = xs[i as usize].mul(&ys[(k - i) as usize]);
            if !pp.is_zero() {
                max_sum += 1;
            }
            lhs = lhs.add(&pp);
        }
        for c in incoming.get(&k).into_iter().flatten() {
            lhs = lhs.add(&BinaryPolynomial::var(*c));
            max_sum += 1;
        }
        let nk = (n >> k & 1) as i128;
        lhs = lhs.sub(&BinaryPolynomial::constant(int(nk)));
        let need = if max_sum >= nk { (max_sum - nk) / 2 } else { 0 };
        let mut r = 0u32;
        while (1i128 << r) - 1 < need {
            r += 1;
        }
        for j in 1..=r {
            if k + j <= top {
                let c = Var::C(k, k + j);
                incoming.entry(k + j).or_default().push(c);
                lhs = lhs.sub(&BinaryPolynomial::var(c).scale(int(1 << j)));
            }
        }
        variables.extend(lhs.vars());
        constraints.push(lhs);
    }
    // factor bits that only appear in vanishing columns still belong to the system
    variables.extend((1..bits_x.saturating_sub(1)).map(Var::X));
    variables.extend((1..bits_y.saturating_sub(1)).map(Var::Y));
    Ok(EquationSystem {
        n,
        bits_x,
        bits_y,
        constraints,
        substitutions: BTreeMap::new(),
        variables,
        log: Vec::new(),
    })
}

impl EquationSystem {
    /// Variables that were not eliminated, in qubit order.
    pub fn survivors(&self) -> Vec<Var> {
        self.variables.iter().filter(|v| !self.substitutions.contains_key(v)).copied().collect()
    }

    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.constraints.iter().all(|q| q.eval_map(a).is_zero())
    }

    /// Extends an assignment of survivors through the substitutions; `None`
    /// when some eliminated variable would not be 0 or 1.
    pub fn complete(&self, survivors: &Assignment) -> Option<Assignment> {
        let mut full = survivors.clone();
        for (v, e) in &self.substitutions {
            let val = e.eval_map(survivors);
            if val.is_zero() {
                full.insert(*v, false);
            } else if val.is_one() {
                full.insert(*v, true);
            } else {
                return None;
            }
        }
        Some(full)
    }

    pub fn factors(&self, full: &Assignment) -> (u64, u64) {
        let read = |bits: u32, var: fn(u32) -> Var| {
            (0..bits).fold(0u64, |acc, i| {
                let bit = i == 0 || i == bits - 1 || full.get(&var(i)).copied().unwrap_or(false);
                acc | (bit as u64) << i
            })
        };
        (read(self.bits_x, Var::X), read(self.bits_y, Var::Y))
    }

    /// Every assignment of the survivors satisfying all constraints.
    pub fn brute_force(&self) -> Result<Vec<Assignment>> {
        let vars = self.survivors();
        if vars.len() > 24 {
            return Err(TableError::TooManyVariables(vars.len()));
        }
        let mut out = Vec::new();
        for bits in 0u64..1 << vars.len() {
            let a: Assignment = vars.iter().enumerate().map(|(k, v)| (*v, bits >> k & 1 == 1)).collect();
            if self.satisfied_by(&a) {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// Same solutions, in the same order, as [`EquationSystem::brute_force`], found by a
    /// depth-first search that prunes partial assignments whose loose
    /// constraint ranges exclude 0.
    pub fn solutions(&self) -> Result<Vec<Assignment>> {
        let vars = self.survivors();
        if vars.len() > 63 {
            return Err(TableError::TooManyVariables(vars.len()));
        }
        let index: BTreeMap<Var, usize> = vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let compiled: Vec<Vec<(u64, i128)>> = self
            .constraints
            .iter()
            .map(|q| {
                let scale = q.terms().fold(1i128, |acc, (_, c)| lcm(acc, *c.denom()));
                q.terms()
                    .map(|(m, c)| {
                        let mask = m.vars().fold(0u64, |acc, v| acc | 1 << index[v]);
                        (mask, (c * Rational::from_integer(scale)).to_integer())
                    })
                    .collect()
            })
            .collect();
        let mut found = Vec::new();
        search(&compiled, vars.len(), 0, 0, &mut |bits| found.push(bits));
        found.sort_unstable();
        Ok(found.into_iter().map(|bits| vars.iter().enumerate().map(|(k, v)| (*v, bits >> k & 1 == 1)).collect()).collect())
    }

    /// Line-oriented `lhs = 0` listing.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for q in &self.constraints {
            let _ = writeln!(s, "{q} = 0");
        }
        s
    }

    pub fn render_substitutions(&self) -> String {
        let mut s = String::new();
        for (v, e) in &self.substitutions {
            let _ = writeln!(s, "{v} := {e}");
        }
        s
    }
}

fn lcm(a: i128, b: i128) -> i128 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// `depth` variables are assigned; `bits` holds their values.
fn search<F: FnMut(u64)>(constraints: &[Vec<(u64, i128)>], n: usize, depth: usize, bits: u64, emit: &mut F) {
    let assigned = if depth == 64 { u64::MAX } else { (1u64 << depth) - 1 };
    for q in constraints {
        let (mut lo, mut hi) = (0i128, 0i128);
        for &(mask, c) in q {
            if mask & assigned & !bits != 0 {
                continue; // some factor is 0
            }
            if mask & !assigned == 0 {
                lo += c;
                hi += c;
            } else if c > 0 {
                hi += c;
            } else {
                lo += c;
            }
        }
        if lo > 0 || hi < 0 {
            return;
        }
    }
    if depth == n {
        emit(bits);
        return;
    }
    search(constraints, n, depth + 1, bits, emit);
    search(constraints, n, depth + 1, bits | 1 << depth, emit);
}
