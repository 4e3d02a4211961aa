use std::f64::consts::FRAC_PI_2;

use adcd_cd::{AnnealingProblem, CdKind, DEFAULT_HX};
use adcd_circuits::*;
use adcd_encoding::{build_direct_hamiltonian, exact_ground_states, FactorizationInstance};
use adcd_pauli::{Complex64, PauliString, PauliTerm};
use adcd_sim::{success_probability, trotter_evolve, StateVector, TrotterPlan};
use adcd_table::{known_bit_lengths, TableProblem};
use adcd_testkit::{c, dense_label, expm_i, overlap_sq, pauli_2x2, random_label, CMat, CVec};
use proptest::prelude::*;

fn table_problem(n: u64, hx: f64) -> AnnealingProblem {
    let (bx, by) = known_bit_lengths(n).unwrap();
    AnnealingProblem::new(TableProblem::new(n, bx, by).unwrap().hamiltonian, hx)
}

fn direct_problem(n: u64, bx: u32, by: u32) -> AnnealingProblem {
    let inst = FactorizationInstance::known(n, bx, by).unwrap();
    AnnealingProblem::new(build_direct_hamiltonian(&inst).unwrap(), DEFAULT_HX)
}

fn kron_at(n: usize, q: usize, m: &CMat) -> CMat {
    // qubit q is bit q, the rightmost tensor factor is qubit 0
    let mut out = CMat::identity(1, 1);
    for k in (0..n).rev() {
        let f = if k == q { m.clone() } else { CMat::identity(2, 2) };
        out = out.kronecker(&f);
    }
    out
}

fn rotation(symbol: char, theta: f64) -> CMat {
    expm_i(&pauli_2x2(symbol), theta / 2.0)
}

/// Dense unitary of a gate, built independently of the library kernels.
fn dense_gate(n: usize, g: &Gate) -> CMat {
    match *g {
        Gate::H(q) => kron_at(n, q, &((pauli_2x2('X') + pauli_2x2('Z')) * c(0.5f64.sqrt(), 0.0))),
        Gate::Rx(q, t) => kron_at(n, q, &rotation('X', t)),
        Gate::Rz(q, t) => kron_at(n, q, &rotation('Z', t)),
        Gate::Cnot { control, target } => {
            let dim = 1usize << n;
            let mut m = CMat::zeros(dim, dim);
            for b in 0..dim {
                let out = if b >> control & 1 == 1 { b ^ (1 << target) } else { b };
                m[(out, b)] = c(1.0, 0.0);
            }
            m
        }
    }
}

fn dense_circuit(n: usize, gates: &[Gate]) -> CMat {
    gates.iter().fold(CMat::identity(1 << n, 1 << n), |acc, g| dense_gate(n, g) * acc)
}

/// Equal up to a global phase.
fn same_up_to_phase(a: &CMat, b: &CMat, tol: f64) -> bool {
    let k = (0..a.nrows()).flat_map(|r| (0..a.ncols()).map(move |c| (r, c))).max_by(|x, y| b[*x].norm().total_cmp(&b[*y].norm())).unwrap();
    let phase = a[k] / b[k];
    (phase.norm() - 1.0).abs() < tol && (a - b * phase).iter().all(|z| z.norm() < tol)
}

/// Minimal OpenQASM 2.0 reader for the subset the emitter writes.
fn parse_qasm(text: &str) -> (usize, Vec<Gate>, usize) {
    let mut n = 0;
    let mut gates = Vec::new();
    let mut measured = 0;
    let qubit = |s: &str| -> usize { s.trim().trim_start_matches("q[").trim_end_matches(']').parse().unwrap() };
    for line in text.lines() {
        let line = line.trim().trim_end_matches(';');
        if line.is_empty() || line.starts_with("OPENQASM") || line.starts_with("include") || line.starts_with("creg") {
            continue;
        }
        if let Some(rest) = line.strip_prefix("qreg q[") {
            n = rest.trim_end_matches(']').parse().unwrap();
        } else if line.starts_with("measure") {
            measured += 1;
        } else if let Some(rest) = line.strip_prefix("h ") {
            gates.push(Gate::H(qubit(rest)));
        } else if let Some(rest) = line.strip_prefix("cx ") {
            let (a, b) = rest.split_once(',').unwrap();
            gates.push(Gate::Cnot { control: qubit(a), target: qubit(b) });
        } else {
            let (head, q) = line.split_once(") ").unwrap();
            let (name, angle) = head.split_once('(').unwrap();
            let t: f64 = angle.parse().unwrap();
            gates.push(match name {
                "rx" => Gate::Rx(qubit(q), t),
                "rz" => Gate::Rz(qubit(q), t),
                other => panic!("unknown gate {other}"),
            });
        }
    }
    (n, gates, measured)
}

fn string(label: &str) -> PauliString {
    PauliString::from_label(label).unwrap()
}

#[test]
fn zz_exponential_is_cnot_rz_cnot() {
    let theta = 0.37;
    let gates = compile_string(theta, &string("ZZ"));
    assert_eq!(gates, vec![Gate::Cnot { control: 0, target: 1 }, Gate::Rz(1, 2.0 * theta), Gate::Cnot { control: 0, target: 1 }]);
    assert!(same_up_to_phase(&dense_circuit(2, &gates), &expm_i(&dense_label("ZZ"), theta), 1e-12));
}

#[test]
fn single_y_is_conjugated_rz() {
    let theta = -0.81;
    let gates = compile_string(theta, &string("Y"));
    assert_eq!(gates, vec![Gate::Rx(0, FRAC_PI_2), Gate::Rz(0, 2.0 * theta), Gate::Rx(0, -FRAC_PI_2)]);
    assert!(same_up_to_phase(&dense_circuit(1, &gates), &expm_i(&dense_label("Y"), theta), 1e-12));
}

#[test]
fn four_local_z_string() {
    let theta = 1.23;
    let gates = compile_string(theta, &string("ZZZZ"));
    assert_eq!(gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count(), 6);
    assert_eq!(gates.iter().filter(|g| matches!(g, Gate::Rz(..))).count(), 1);
    assert_eq!(gates.len(), 7);
    let diff = dense_circuit(4, &gates) - expm_i(&dense_label("ZZZZ"), theta);
    assert!(diff.iter().all(|z| z.norm() < 1e-10));
}

#[test]
fn identity_term_is_a_phase() {
    let c0 = compile_term(0.4, &PauliTerm::identity(3, c(1.0, 0.0))).unwrap();
    assert!(c0.is_empty());
    assert!((c0.global_phase() + 0.4).abs() < 1e-15);
    let psi = StateVector::plus_state(3).unwrap();
    let out = c0.apply(&psi).unwrap();
    assert!((out.inner(&psi) - Complex64::from_polar(1.0, 0.4)).norm() < 1e-15);
    assert!(compile_term(0.4, &PauliTerm::from_label("XZ", c(2.0, 0.0)).unwrap()).is_err());
}

#[test]
fn invalid_gates_rejected() {
    let mut circuit = GateCircuit::new(2);
    let meta = GateMeta { source: "ZZ".into(), step: 1, component: Component::Adiabatic };
    assert!(matches!(circuit.push(Gate::H(2), meta.clone()), Err(CircuitError::QubitIndex { .. })));
    assert!(matches!(circuit.push(Gate::Cnot { control: 1, target: 1 }, meta), Err(CircuitError::SameQubit(1))));
}

#[test]
fn zero_steps_is_hadamard_layer() {
    let p = table_problem(2479, DEFAULT_HX);
    let (circuit, counts) = compile_plan(&p, CdKind::Nc(1), &TrotterPlan::new(0.0, 0.1).unwrap(), false).unwrap();
    assert_eq!(circuit.len(), 4);
    assert!(circuit.gates().iter().all(|(g, m)| matches!(g, Gate::H(_)) && m.component == Component::Preparation));
    assert_eq!(counts.by_step, vec![4]);
    assert!(circuit.run().unwrap().distance(&StateVector::plus_state(4).unwrap()) < 1e-15);
}

#[test]
fn two_step_circuit_for_35_matches_statevector() {
    let p = table_problem(35, -2.0);
    let plan = TrotterPlan::new(0.002, 0.001).unwrap();
    for kind in [CdKind::Nc(1), CdKind::Pool, CdKind::Nc(2)] {
        let (circuit, counts) = compile_plan(&p, kind, &plan, false).unwrap();
        let psi = trotter_evolve(&p, kind, &plan, false).unwrap();
        assert!(circuit.run().unwrap().distance(&psi) < 1e-10, "{kind}");
        assert_eq!(counts.by_step.len(), 3);
        assert!(counts.by_component["counterdiabatic"] > 0);
        assert_eq!(counts.by_step.iter().sum::<usize>(), counts.total);
    }
}

#[test]
fn regression_instances_match_statevector() {
    let problems = [
        direct_problem(21, 2, 3),
        direct_problem(91, 3, 4),
        direct_problem(217, 3, 5),
        table_problem(35, -2.0),
        table_problem(235, -2.0),
        table_problem(2479, DEFAULT_HX),
    ];
    for p in &problems {
        assert!(p.n() <= 8);
        for kind in [CdKind::None, CdKind::Local, CdKind::Nc(1), CdKind::Nc1Generic, CdKind::Pool] {
            for hardware in [false, true] {
                let plan = TrotterPlan::new(0.03, 0.01).unwrap();
                let (circuit, _) = compile_plan(p, kind, &plan, hardware).unwrap();
                let psi = trotter_evolve(p, kind, &plan, hardware).unwrap();
                let f = circuit.run().unwrap().inner(&psi).norm_sqr();
                assert!(f > 1.0 - 1e-9, "n = {}, {kind}: {f}", p.n());
            }
        }
    }
}

#[test]
fn hardware_mode_drops_multi_site_cd_gates() {
    let p = table_problem(2479, DEFAULT_HX);
    let plan = TrotterPlan::new(0.3, 0.1).unwrap();
    let (full, full_counts) = compile_plan(&p, CdKind::Pool, &plan, false).unwrap();
    let (hw, hw_counts) = compile_plan(&p, CdKind::Pool, &plan, true).unwrap();
    assert!(hw_counts.by_component["counterdiabatic"] < full_counts.by_component["counterdiabatic"]);
    assert_eq!(hw_counts.by_component["adiabatic"], full_counts.by_component["adiabatic"]);
    for (g, m) in hw.gates() {
        if m.component == Component::Counterdiabatic {
            assert!(!matches!(g, Gate::Cnot { .. }));
        }
    }
    assert!(full.len() > hw.len());
}

#[test]
fn empty_circuit_qasm() {
    let text = emit_qasm(&GateCircuit::new(1));
    assert_eq!(text, "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\n");
}

#[test]
fn cnot_rz_cnot_qasm() {
    let mut circuit = GateCircuit::new(2);
    let meta = GateMeta { source: "ZZ".into(), step: 1, component: Component::Adiabatic };
    for g in compile_string(0.25, &string("ZZ")) {
        circuit.push(g, meta.clone()).unwrap();
    }
    let text = emit_qasm(&circuit);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with("OPENQASM") && !l.starts_with("include") && !l.contains("reg") && !l.starts_with("measure")).collect();
    assert_eq!(body, vec!["cx q[0],q[1];", "rz(0.5) q[1];", "cx q[0],q[1];"]);
}

#[test]
fn qasm_round_trip_reproduces_state() {
    let p = table_problem(2479, DEFAULT_HX);
    let plan = TrotterPlan::new(0.3, 0.1).unwrap();
    for kind in [CdKind::Nc(1), CdKind::Pool] {
        let (circuit, _) = compile_plan(&p, kind, &plan, false).unwrap();
        let text = emit_qasm(&circuit);
        assert_eq!(text, emit_qasm(&compile_plan(&p, kind, &plan, false).unwrap().0));
        let (n, gates, measured) = parse_qasm(&text);
        assert_eq!((n, measured, gates.len()), (4, 4, circuit.len()));
        let mut zero = CVec::zeros(16);
        zero[0] = c(1.0, 0.0);
        let out = dense_circuit(n, &gates) * zero;
        let psi = trotter_evolve(&p, kind, &plan, false).unwrap();
        assert!(overlap_sq(out.as_slice(), psi.amplitudes()) > 1.0 - 1e-10);
    }
}

#[test]
fn tiny_angles_stay_parseable() {
    let mut circuit = GateCircuit::new(1);
    let meta = GateMeta { source: "Z".into(), step: 1, component: Component::Adiabatic };
    circuit.push(Gate::Rz(0, 1e-7), meta.clone()).unwrap();
    circuit.push(Gate::Rx(0, -2.5e-12), meta).unwrap();
    let text = emit_qasm(&circuit);
    assert!(text.contains("rz(1.0e-7) q[0];"));
    let (_, gates, _) = parse_qasm(&text);
    assert_eq!(gates, circuit.gates().iter().map(|(g, _)| *g).collect::<Vec<_>>());
}

/// Fewest gates over doubling ladders of `T` and `M` reaching `target`.
fn cheapest(p: &AnnealingProblem, kind: CdKind, totals: &[f64], max_steps: usize, target: f64) -> Option<(usize, f64, usize, f64)> {
    let ground = exact_ground_states(p.ising()).unwrap().1;
    let mut best: Option<(usize, f64, usize, f64)> = None;
    for &t in totals {
        let mut m = 1;
        while m <= max_steps {
            let plan = TrotterPlan::new(t, t / m as f64).unwrap();
            let s = success_probability(&trotter_evolve(p, kind, &plan, false).unwrap(), &ground);
            if s >= target {
                let gates = compile_plan(p, kind, &plan, false).unwrap().1.total;
                if best.map_or(true, |b| gates < b.0) {
                    best = Some((gates, t, m, s));
                }
                break;
            }
            m *= 2;
        }
    }
    best
}

#[test]
fn cd_needs_fewer_gates_at_matched_success() {
    let p = direct_problem(21, 2, 3);
    let with_cd = cheapest(&p, CdKind::Local, &[0.01, 0.05, 0.1], 64, 0.9).expect("local CD reaches 0.9");
    let totals: Vec<f64> = (0..8).map(|k| 2f64.powi(k)).collect();
    let without = cheapest(&p, CdKind::None, &totals, 4096, 0.9).expect("slow annealing reaches 0.9");
    assert!(with_cd.0 < without.0, "CD {with_cd:?} vs bare {without:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn string_synthesis_matches_dense_exponential(seed in any::<u64>(), theta in -3.0f64..3.0) {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let n = 1 + (seed % 4) as usize;
        let label = random_label(&mut rng, n);
        let p = string(&label);
        let gates = compile_string(theta, &p);
        let k = p.weight() as usize;
        let cnots = gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count();
        let rz = gates.iter().filter(|g| matches!(g, Gate::Rz(..))).count();
        let changes = label.chars().filter(|&ch| ch == 'X' || ch == 'Y').count();
        if k == 0 {
            prop_assert!(gates.is_empty());
        } else {
            prop_assert_eq!(cnots, 2 * (k - 1));
            prop_assert_eq!(rz, 1);
            prop_assert_eq!(gates.len(), 2 * (k - 1) + 1 + 2 * changes);
            let diff = dense_circuit(n, &gates) - expm_i(&dense_label(&label), theta);
            prop_assert!(diff.iter().all(|z| z.norm() < 1e-10), "{}", label);
        }
    }
}
