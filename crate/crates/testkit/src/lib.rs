//! Dense reference implementations built from explicit 2×2 matrices.
//!
//! Labels follow the display convention: the leftmost symbol acts on the
//! highest qubit, which is the most significant bit of the basis index.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_2x2(symbol: char) -> CMat {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match symbol {
        'I' => CMat::from_row_slice(2, 2, &[l, o, o, l]),
        'X' => CMat::from_row_slice(2, 2, &[o, l, l, o]),
        'Y' => CMat::from_row_slice(2, 2, &[o, -i, i, o]),
        'Z' => CMat::from_row_slice(2, 2, &[l, o, o, -l]),
        other => panic!("not a Pauli symbol: {other}"),
    }
}

pub fn dense_label(label: &str) -> CMat {
    label.chars().fold(CMat::identity(1, 1), |acc, ch| acc.kronecker(&pauli_2x2(ch)))
}

pub fn dense_sum(n: usize, terms: &[(String, Complex64)]) -> CMat {
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    for (label, coeff) in terms {
        assert_eq!(label.len(), n);
        m += dense_label(label) * *coeff;
    }
    m
}

/// `Tr(a†b)/dim`.
pub fn hs(a: &CMat, b: &CMat) -> Complex64 {
    (a.adjoint() * b).trace() / c(a.nrows() as f64, 0.0)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// `exp(−i·t·h)` by the matrix exponential.
pub fn expm_i(h: &CMat, t: f64) -> CMat {
    (h * c(0.0, -t)).exp()
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn plus_state(n: usize) -> CVec {
    let dim = 1usize << n;
    CVec::from_element(dim, c(1.0 / (dim as f64).sqrt(), 0.0))
}

pub fn overlap_sq(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}

pub fn random_label<R: Rng>(rng: &mut R, n: usize) -> String {
    (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)]).collect()
}

pub fn random_coeff<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

pub fn random_terms<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<(String, Complex64)> {
    (0..count).map(|_| (random_label(rng, n), random_coeff(rng))).collect()
}

/// Fixed-step classical RK4 on `dψ/dt = −i H(t) ψ`, used as a coarse
/// cross-check independent of the library integrator.
pub fn rk4_evolve<F: Fn(f64) -> CMat>(h: F, psi0: &CVec, t_final: f64, steps: usize) -> CVec {
    let dt = t_final / steps as f64;
    let mi = c(0.0, -1.0);
    let mut psi = psi0.clone();
    for k in 0..steps {
        let t = k as f64 * dt;
        let h0 = h(t);
        let hm = h(t + dt / 2.0);
        let h1 = h(t + dt);
        let k1 = &h0 * &psi * mi;
        let k2 = &hm * (&psi + &k1 * c(dt / 2.0, 0.0)) * mi;
        let k3 = &hm * (&psi + &k2 * c(dt / 2.0, 0.0)) * mi;
        let k4 = &h1 * (&psi + &k3 * c(dt, 0.0)) * mi;
        psi += (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * c(dt / 6.0, 0.0);
    }
    psi
}
