use adcd_cd::*;
use adcd_encoding::{IsingHamiltonian, Rational};
use adcd_pauli::{Complex64, PauliString, PauliSum};
use adcd_table::TableProblem;
use adcd_testkit::{c, dense_label, CMat};
use nalgebra::SymmetricEigen;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn problem_2479() -> AnnealingProblem {
    let tp = TableProblem::new(2479, 7, 6).unwrap();
    AnnealingProblem::new(tp.hamiltonian, DEFAULT_HX)
}

fn dense(sum: &PauliSum) -> CMat {
    let dim = 1usize << sum.n();
    let mut m = CMat::zeros(dim, dim);
    for (s, cf) in sum.iter() {
        m += dense_label(&s.label(sum.n())) * *cf;
    }
    m
}

fn random_problem(rng: &mut StdRng, n: usize) -> AnnealingProblem {
    let mut terms = Vec::new();
    for mask in 1u64..1 << n {
        if mask.count_ones() <= 4 && rng.gen_bool(0.6) {
            let sites = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect();
            terms.push((sites, Rational::new(rng.gen_range(-8..=8), 4)));
        }
    }
    let hx = -rng.gen_range(0.25..2.5);
    AnnealingProblem::new(IsingHamiltonian::from_terms(n, terms).unwrap(), hx).with_local_weighting(LocalWeighting::Uniform)
}

/// Gauge potential from the instantaneous eigenbasis, for nondegenerate spectra.
fn spectral_gauge(problem: &AnnealingProblem, lambda: f64) -> CMat {
    let h = dense(&problem.h_ad(lambda));
    let dh = dense(&problem.d_lambda_h());
    let eig = SymmetricEigen::new(h);
    let v = &eig.eigenvectors;
    let dh_e = v.adjoint() * dh * v;
    let dim = dh_e.nrows();
    let mut a = CMat::zeros(dim, dim);
    for m in 0..dim {
        for n in 0..dim {
            if m != n {
                a[(m, n)] = c(0.0, 1.0) * dh_e[(m, n)] / (eig.eigenvalues[n] - eig.eigenvalues[m]);
            }
        }
    }
    v * a * v.adjoint()
}

fn dense_action(problem: &AnnealingProblem, a: &CMat, lambda: f64) -> f64 {
    let h = dense(&problem.h_ad(lambda));
    let g = dense(&problem.d_lambda_h()) + (a * &h - &h * a) * c(0.0, 1.0);
    let dim = g.nrows() as f64;
    (g.adjoint() * &g).trace().re / dim
}

#[test]
fn zero_potential_action_is_norm_of_derivative() {
    let p = problem_2479();
    let dh = p.d_lambda_h();
    let expected: f64 = dh.iter().map(|(_, cf)| cf.norm_sqr()).sum();
    for lambda in [0.0, 0.3, 1.0] {
        let s = action(&p, &PauliSum::zero(4), lambda).unwrap();
        assert!((s - expected).abs() < 1e-12);
    }
}

#[test]
fn first_order_structure_matches_closed_form_listing() {
    let p = problem_2479();
    let hx = p.hx();
    for lambda in [0.1, 0.5, 0.9] {
        let gp = nc_gauge_potential(&p, 1, lambda).unwrap();
        let a1 = gp.coefficients[0];
        let mut expected = PauliSum::zero(4);
        for (mask, cf) in p.ising().terms().filter(|(m, _)| *m != 0) {
            let cf: f64 = num_traits::ToPrimitive::to_f64(&cf).unwrap();
            for k in 0..4 {
                if mask >> k & 1 == 1 {
                    // one σʸ inserted at site k, σᶻ elsewhere in the support
                    let s = PauliString::from_masks(1 << k, mask);
                    let t = adcd_pauli::PauliTerm::new(4, s, Complex64::new(2.0 * a1 * hx * cf, 0.0)).unwrap();
                    expected.add_term(&t).unwrap();
                }
            }
        }
        let diff = gp.operator.sub(&expected).unwrap();
        assert!(diff.norm_sq() < 1e-24, "λ = {lambda}: {}", diff.render());
    }
}

#[test]
fn total_hamiltonian_matches_dense_assembly() {
    let p = problem_2479();
    let schedule = Schedule::new(0.3).unwrap();
    let t = 0.15;
    let (lambda, dot) = schedule.eval(t).unwrap();
    let a1 = nc_gauge_potential(&p, 1, lambda).unwrap().coefficients[0];
    let mut want = CMat::zeros(16, 16);
    for j in 0..4 {
        let mut x = ['I'; 4];
        x[3 - j] = 'X';
        want += dense_label(&x.iter().collect::<String>()) * c((1.0 - lambda) * p.hx(), 0.0);
    }
    for (mask, cf) in p.ising().terms() {
        let cf: f64 = num_traits::ToPrimitive::to_f64(&cf).unwrap();
        let label: String = (0..4).rev().map(|k| if mask >> k & 1 == 1 { 'Z' } else { 'I' }).collect();
        want += dense_label(&label) * c(lambda * cf, 0.0);
        for k in 0..4 {
            if mask >> k & 1 == 1 {
                let with_y: String = (0..4)
                    .rev()
                    .map(|q| if q == k { 'Y' } else if mask >> q & 1 == 1 { 'Z' } else { 'I' })
                    .collect();
                want += dense_label(&with_y) * c(dot * 2.0 * a1 * p.hx() * cf, 0.0);
            }
        }
    }
    let got = dense(&total_hamiltonian(&p, CdKind::Nc(1), &schedule, t, false).unwrap());
    assert!(adcd_testkit::max_abs_diff(&got, &want) < 1e-12);
}

#[test]
fn first_order_constants_for_2479() {
    let p = problem_2479();
    let (a, b) = fit_nc1_constants(&p, &[0.1, 0.5, 0.9]).unwrap();
    assert!((a.abs() - 0.0830).abs() < 1e-3, "a = {a}");
    assert!((b - 5.0112).abs() < 1e-3, "b = {b}");
    for lambda in [0.1, 0.5, 0.9] {
        let alpha = nc_gauge_potential(&p, 1, lambda).unwrap().coefficients[0];
        let model = a / ((1.0 - lambda).powi(2) + b * lambda * lambda);
        assert!((alpha - model).abs() < 1e-9);
    }
}

#[test]
fn action_hierarchy_on_2479() {
    let p = problem_2479();
    for k in 1..10 {
        let lambda = k as f64 / 10.0;
        let s = |a: &PauliSum| action(&p, a, lambda).unwrap();
        let none = s(&PauliSum::zero(4));
        let nc: Vec<f64> = (1..=4).map(|l| s(&nc_gauge_potential(&p, l, lambda).unwrap().operator)).collect();
        let pool = s(&pool_gauge_potential(&p, lambda).unwrap().operator);
        let generic = s(&nc1_generic_gauge_potential(&p, lambda).unwrap().operator);
        let local = s(&local_gauge_potential(&p, lambda).operator);
        assert!(local <= none + 1e-12);
        assert!(nc[0] <= none + 1e-12);
        assert!(generic <= nc[0] + 1e-12);
        assert!(pool <= nc[0] + 1e-12, "λ = {lambda}: pool {pool} nc1 {}", nc[0]);
        for l in 0..3 {
            assert!(nc[l + 1] <= nc[l] + 1e-9 * nc[l], "λ = {lambda}, l = {}", l + 1);
        }
    }
}

#[test]
fn single_qubit_local_is_exact() {
    let ising = IsingHamiltonian::from_terms(1, vec![(vec![1], Rational::new(3, 2))]).unwrap();
    let p = AnnealingProblem::new(ising, -0.8);
    for lambda in [0.05, 0.4, 0.77] {
        let exact = spectral_gauge(&p, lambda);
        let y = adcd_testkit::pauli_2x2('Y');
        let exact_y = (&exact * &y).trace().re / 2.0;
        let alpha = local_cd(&p, lambda)[0];
        assert!((alpha - exact_y).abs() < 1e-12);
        // two-level formula −(1/2)(hₓ ∂h_z − h_z ∂hₓ)/(hₓ² + h_z²)
        let (hx, hz) = ((1.0 - lambda) * -0.8, lambda * 1.5);
        let (dhx, dhz) = (0.8, 1.5);
        assert!((alpha + 0.5 * (hx * dhz - hz * dhx) / (hx * hx + hz * hz)).abs() < 1e-12);
        let s_local = action(&p, &local_gauge_potential(&p, lambda).operator, lambda).unwrap();
        assert!((s_local - dense_action(&p, &exact, lambda)).abs() < 1e-12);
        // only the eigenbasis-diagonal part of ∂H survives
        let h = dense(&p.h_ad(lambda));
        let eig = SymmetricEigen::new(h);
        let dh_e = eig.eigenvectors.adjoint() * dense(&p.d_lambda_h()) * &eig.eigenvectors;
        let residue = (dh_e[(0, 0)].re.powi(2) + dh_e[(1, 1)].re.powi(2)) / 2.0;
        assert!((s_local - residue).abs() < 1e-12);
    }
}

#[test]
fn nested_commutators_approach_exact_gauge_on_two_qubits() {
    let ising = IsingHamiltonian::from_terms(
        2,
        vec![(vec![1], Rational::new(1, 1)), (vec![2], Rational::new(-3, 4)), (vec![1, 2], Rational::new(1, 2))],
    )
    .unwrap();
    let p = AnnealingProblem::new(ising, -1.0);
    let lambda = 0.6;
    let exact = dense_action(&p, &spectral_gauge(&p, lambda), lambda);
    let mut prev = f64::INFINITY;
    for l in 1..=6 {
        let s = action(&p, &nc_gauge_potential(&p, l, lambda).unwrap().operator, lambda).unwrap();
        assert!(s <= prev + 1e-9 && s >= exact - 1e-9, "l = {l}: {s} vs exact {exact}");
        prev = s;
    }
    assert!((prev - exact).abs() < 1e-6 * exact.max(1.0), "{prev} vs {exact}");
}

#[test]
fn pool_without_couplings_reduces_to_uniform_y() {
    let ising = IsingHamiltonian::from_terms(3, vec![(vec![1], Rational::from_integer(1)), (vec![3], Rational::from_integer(2))])
        .unwrap();
    let p = AnnealingProblem::new(ising, -1.0);
    let gp = pool_gauge_potential(&p, 0.4).unwrap();
    assert_eq!(gp.inactive, vec![1, 2]);
    assert!(gp.operator.iter().all(|(s, _)| s.weight() == 1 && s.y_count() == 1));
}

#[test]
fn endpoints_recover_bare_hamiltonians() {
    let p = problem_2479();
    let schedule = Schedule::new(0.3).unwrap();
    for kind in [CdKind::None, CdKind::Local, CdKind::Nc(2), CdKind::Nc1Generic, CdKind::Pool] {
        let h0 = total_hamiltonian(&p, kind, &schedule, 0.0, false).unwrap();
        assert_eq!(&h0, p.h_initial());
        let h1 = total_hamiltonian(&p, kind, &schedule, 0.3, false).unwrap();
        assert!(h1.sub(p.h_final()).unwrap().norm_sq() < 1e-24);
    }
    let mid = total_hamiltonian(&p, CdKind::None, &schedule, 0.1, false).unwrap();
    let (lambda, _) = schedule.eval(0.1).unwrap();
    assert_eq!(mid, p.h_ad(lambda));
}

#[test]
fn hardware_mode_keeps_single_site_terms() {
    let p = problem_2479();
    let schedule = Schedule::new(0.3).unwrap();
    let full = total_hamiltonian(&p, CdKind::Nc(1), &schedule, 0.1, false).unwrap();
    let hw = total_hamiltonian(&p, CdKind::Nc(1), &schedule, 0.1, true).unwrap();
    let (lambda, _) = schedule.eval(0.1).unwrap();
    let cd_hw = hw.sub(&p.h_ad(lambda)).unwrap();
    assert!(!cd_hw.is_empty());
    assert!(cd_hw.iter().all(|(s, _)| s.weight() == 1 && s.y_count() == 1));
    assert!(full.len() > hw.len());
}

#[test]
fn hermitian_at_random_samples() {
    let mut rng = StdRng::seed_from_u64(11);
    let kinds = [CdKind::None, CdKind::Local, CdKind::Nc(1), CdKind::Nc(2), CdKind::Nc1Generic, CdKind::Pool];
    for k in 0..1000 {
        let n = rng.gen_range(1..=4);
        let p = random_problem(&mut rng, n);
        let schedule = Schedule::new(rng.gen_range(0.01..2.0)).unwrap();
        let t = rng.gen_range(0.0..=schedule.total());
        let h = total_hamiltonian(&p, kinds[k % kinds.len()], &schedule, t, rng.gen_bool(0.2)).unwrap();
        assert!(h.is_hermitian(1e-12));
    }
}

#[test]
fn coefficient_samples_cover_the_schedule() {
    let p = problem_2479();
    let schedule = Schedule::new(0.3).unwrap();
    let rows = sample_coefficients(&p, CdKind::Nc(1), &schedule, 30).unwrap();
    assert_eq!(rows.len(), 31);
    assert_eq!(rows[0].lambda, 0.0);
    assert!((rows[30].lambda - 1.0).abs() < 1e-15);
    assert!(rows.iter().all(|r| r.coefficients.len() == 1));
}

#[test]
fn kind_names_roundtrip() {
    for kind in [CdKind::None, CdKind::Local, CdKind::Nc(1), CdKind::Nc(3), CdKind::Nc1Generic, CdKind::Pool] {
        assert_eq!(kind.to_string().parse::<CdKind>().unwrap(), kind);
    }
    assert!("nc0".parse::<CdKind>().is_err());
    assert!("spline".parse::<CdKind>().is_err());
    assert!(matches!(nc_operators(&problem_2479(), 0, 0.5), Err(CdError::InvalidOrder(0))));
}

fn basis_for(p: &AnnealingProblem, kind: CdKind, lambda: f64) -> Vec<PauliSum> {
    match kind {
        CdKind::Local => local_basis(p),
        CdKind::Nc(l) => nc_operators(p, l, lambda).unwrap(),
        CdKind::Nc1Generic => nc1_generic_channels(p),
        CdKind::Pool => pool_channels(p),
        CdKind::None => Vec::new(),
    }
}

fn assemble(n: usize, basis: &[PauliSum], coeffs: &[f64]) -> PauliSum {
    basis.iter().zip(coeffs).fold(PauliSum::zero(n), |acc, (o, a)| acc.add(&o.scale_re(*a)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn coefficients_are_stationary(seed in any::<u64>(), n in 1usize..=4, lambda in 0.02f64..0.98) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_problem(&mut rng, n);
        for kind in [CdKind::Local, CdKind::Nc(1), CdKind::Nc(2), CdKind::Nc(3), CdKind::Nc1Generic, CdKind::Pool] {
            let gp = gauge_potential(&p, kind, lambda).unwrap().unwrap();
            let basis = basis_for(&p, kind, lambda);
            let s0 = action(&p, &gp.operator, lambda).unwrap();
            let h = p.h_ad(lambda);
            for k in 0..basis.len() {
                let vk = basis[k].commutator(&h).unwrap().norm_sq().sqrt();
                for delta in [1e-3, -1e-3] {
                    let mut a = gp.coefficients.clone();
                    a[k] += delta;
                    let s = action(&p, &assemble(n, &basis, &a), lambda).unwrap();
                    prop_assert!(s >= s0 - 1e-12 * s0.max(1.0), "{kind} k={k}: {s} < {s0}");
                }
                if vk > 0.0 {
                    // gradient along the unit-norm direction of i[Oₖ, H]
                    let step = 1e-4 / vk;
                    let mut plus = gp.coefficients.clone();
                    let mut minus = gp.coefficients.clone();
                    plus[k] += step;
                    minus[k] -= step;
                    let sp = action(&p, &assemble(n, &basis, &plus), lambda).unwrap();
                    let sm = action(&p, &assemble(n, &basis, &minus), lambda).unwrap();
                    let grad = (sp - sm) / 2e-4;
                    prop_assert!(grad.abs() < 1e-8 * s0.max(1.0), "{kind} k={k}: gradient {grad}");
                }
            }
        }
    }

    #[test]
    fn local_closed_form_equals_generic_minimum(seed in any::<u64>(), n in 1usize..=4, lambda in 0.0f64..=1.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_problem(&mut rng, n);
        let generic = minimize_action(&p, &local_basis(&p), lambda).unwrap();
        let closed = local_cd(&p, lambda);
        for (g, c) in generic.coefficients.iter().zip(&closed) {
            prop_assert!((g - c).abs() < 1e-10, "{g} vs {c}");
        }
    }
}

#[test]
fn locality_weighting_scales_interaction_terms() {
    let p = problem_2479();
    assert_eq!(p.local_weighting(), LocalWeighting::Locality);
    let u = p.clone().with_local_weighting(LocalWeighting::Uniform);
    let lambda = 0.6;
    let (hx, dhx) = ((1.0 - lambda) * p.hx(), -p.hx());
    for j in 1..=4 {
        let hz = lambda * p.field(j);
        let bit = 1u64 << (j - 1);
        let sum = |w: &dyn Fn(u64) -> f64| -> f64 {
            p.couplings().iter().filter(|(m, _)| m & bit != 0).map(|(m, c)| w(*m) * (lambda * c).powi(2)).sum()
        };
        let num = hz * dhx - hx * p.field(j);
        let weighted = num / (2.0 * (hx * hx + hz * hz + sum(&|m| m.count_ones() as f64)));
        let uniform = num / (2.0 * (hx * hx + hz * hz + sum(&|_| 1.0)));
        assert!((local_cd(&p, lambda)[j - 1] - weighted).abs() < 1e-14);
        assert!((local_cd(&u, lambda)[j - 1] - uniform).abs() < 1e-14);
    }
    // the locality weights are not the action minimizer once couplings exist
    let s = |q: &AnnealingProblem| action(q, &local_gauge_potential(q, lambda).operator, lambda).unwrap();
    assert!(s(&u) < s(&p));
    assert_eq!(LocalWeighting::Uniform.to_string().parse::<LocalWeighting>().unwrap(), LocalWeighting::Uniform);
}

#[test]
fn weightings_agree_without_couplings() {
    let ising = IsingHamiltonian::from_terms(3, vec![(vec![1], Rational::new(3, 2)), (vec![3], Rational::from_integer(-2))]).unwrap();
    let p = AnnealingProblem::new(ising, -0.7);
    let u = p.clone().with_local_weighting(LocalWeighting::Uniform);
    assert_eq!(local_cd(&p, 0.3), local_cd(&u, 0.3));
}

#[test]
fn cached_model_matches_direct_minimization() {
    let mut rng = StdRng::seed_from_u64(5);
    let mut problems: Vec<AnnealingProblem> = (0..30).map(|k| random_problem(&mut rng, 1 + k % 4)).collect();
    problems.push(problem_2479());
    for p in &problems {
        for kind in [CdKind::Local, CdKind::Nc(1), CdKind::Nc(2), CdKind::Nc1Generic, CdKind::Pool] {
            let model = CdModel::new(p, kind).unwrap();
            for lambda in [0.0, 0.13, 0.5, 0.92, 1.0] {
                let direct = gauge_potential(p, kind, lambda).unwrap().unwrap();
                let cached = model.gauge_potential(lambda).unwrap().unwrap();
                let diff = direct.operator.sub(&cached.operator).unwrap().norm_sq().sqrt();
                let scale = direct.operator.norm_sq().sqrt().max(1.0);
                assert!(diff < 1e-9 * scale, "{kind} λ={lambda}: {diff}");
            }
        }
    }
}

#[test]
fn term_list_sums_to_total_hamiltonian() {
    let p = problem_2479();
    let schedule = Schedule::new(0.3).unwrap();
    for kind in [CdKind::None, CdKind::Local, CdKind::Nc(1), CdKind::Pool] {
        for hardware in [false, true] {
            let model = CdModel::new(&p, kind).unwrap();
            for t in [0.0, 0.07, 0.2] {
                let mut sum = PauliSum::zero(4);
                for (s, cf) in model.hamiltonian_terms(&schedule, t, hardware).unwrap() {
                    sum.add_term(&adcd_pauli::PauliTerm::new(4, s, cf).unwrap()).unwrap();
                }
                let want = model.hamiltonian(&schedule, t, hardware).unwrap();
                assert!(sum.sub(&want).unwrap().norm_sq() < 1e-20);
            }
        }
    }
}
