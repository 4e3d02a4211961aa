use std::collections::BTreeMap;
use std::fmt::Write as _;

use adcd_cd::{sample_coefficients, AnnealingProblem, CdKind, Schedule};
use adcd_circuits::{compile_plan, emit_qasm, GateCounts};
use adcd_encoding::{basis_label, build_direct_hamiltonian, exact_ground_states, parse_basis_label, FactorizationInstance, Sizing};
use adcd_pauli::Complex64;
use adcd_sim::{exact_evolve, measure, success_probability, trotter_evolve, StateVector, TrotterPlan};
use adcd_table::{known_bit_lengths, TableProblem};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Encoding, ExperimentConfig, Method};
use crate::{CliError, Result};

#[derive(Debug, Clone)]
pub enum Encoded {
    Direct(FactorizationInstance),
    Table(Box<TableProblem>),
}

/// An encoded factoring instance with its exact ground labels.
#[derive(Debug, Clone)]
pub struct Instance {
    pub problem: AnnealingProblem,
    pub encoded: Encoded,
    pub ground: Vec<u64>,
}

impl Instance {
    pub fn build(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let bits = cfg.bits_x.zip(cfg.bits_y);
        let (encoded, ising) = match cfg.encoding {
            Encoding::Direct => {
                let sizing = match bits {
                    Some((bits_x, bits_y)) => Sizing::KnownLengths { bits_x, bits_y },
                    None => Sizing::FormulaBound,
                };
                let inst = FactorizationInstance::new(cfg.n, sizing)?.with_cap(cfg.qubit_cap);
                let h = build_direct_hamiltonian(&inst)?;
                (Encoded::Direct(inst), h)
            }
            Encoding::Table => {
                let (bx, by) = match bits.or_else(|| known_bit_lengths(cfg.n)) {
                    Some(b) => b,
                    None => {
                        let (nx, ny) = adcd_encoding::factor_register_sizes(cfg.n)?;
                        (nx + 1, ny + 1)
                    }
                };
                let tp = TableProblem::new(cfg.n, bx, by)?;
                if tp.qubits() > cfg.qubit_cap {
                    return Err(CliError::Cap(format!("{} qubits exceeds the cap of {}", tp.qubits(), cfg.qubit_cap)));
                }
                let h = tp.hamiltonian.clone();
                (Encoded::Table(Box::new(tp)), h)
            }
        };
        let (energy, ground) = exact_ground_states(&ising)?;
        if energy != adcd_encoding::Rational::from_integer(0) {
            return Err(CliError::Infeasible(format!("no factorization of {} in the encoded registers (minimum cost {energy})", cfg.n)));
        }
        let problem = AnnealingProblem::new(ising, cfg.hx).with_local_weighting(cfg.weighting()?);
        Ok(Instance { problem, encoded, ground })
    }

    pub fn qubits(&self) -> usize {
        self.problem.n()
    }

    /// Variable carried by each qubit, qubit 1 first.
    pub fn variables(&self) -> Vec<String> {
        match &self.encoded {
            Encoded::Direct(inst) => inst.var_order().iter().map(|v| v.to_string()).collect(),
            Encoded::Table(tp) => tp.order.iter().map(|v| v.to_string()).collect(),
        }
    }

    pub fn decode(&self, index: u64) -> Option<(u64, u64)> {
        match &self.encoded {
            Encoded::Direct(inst) => Some(inst.decode_index(index)),
            Encoded::Table(tp) => tp.decode_index(index),
        }
    }

    pub fn label(&self, index: u64) -> String {
        basis_label(index, self.qubits())
    }

    /// Final state for total time `total`.
    pub fn evolve(&self, cfg: &ExperimentConfig, kind: CdKind, total: f64) -> Result<StateVector> {
        Ok(match cfg.method {
            Method::Trotter => trotter_evolve(&self.problem, kind, &plan(cfg, total)?, cfg.hardware_mode)?,
            Method::Exact => exact_evolve(&self.problem, kind, total, cfg.hardware_mode)?,
        })
    }

    pub fn success(&self, state: &StateVector) -> f64 {
        success_probability(state, &self.ground)
    }
}

pub fn plan(cfg: &ExperimentConfig, total: f64) -> Result<TrotterPlan> {
    Ok(TrotterPlan::new(total, cfg.dt_for(total))?.with_sampling(cfg.sampling))
}

/// Equal superposition of the given labels.
pub fn target_state(labels: &[String], n: usize) -> Result<StateVector> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for l in labels {
        let bad = || CliError::Invalid(format!("target label {l:?} is not an {n}-bit label"));
        if l.chars().count() != n {
            return Err(bad());
        }
        amps[parse_basis_label(l).ok_or_else(bad)? as usize] = Complex64::new(1.0, 0.0);
    }
    let mut s = StateVector::from_amplitudes(amps)?;
    if s.norm() == 0.0 {
        return Err(CliError::Invalid("empty target".into()));
    }
    s.normalize();
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub qubits: usize,
    /// Variable on each qubit, qubit 1 first.
    pub variables: Vec<String>,
    pub ground_labels: Vec<String>,
    pub ground_factors: Vec<Option<(u64, u64)>>,
    pub argmax: String,
    pub argmax_factors: Option<(u64, u64)>,
    pub success_probability: f64,
    pub fidelity: Option<f64>,
    pub probabilities: BTreeMap<String, f64>,
    pub histogram: Option<BTreeMap<String, u64>>,
    pub histogram_argmax: Option<String>,
    pub gate_counts: Option<GateCounts>,
}

/// Runs one experiment and writes the optional side outputs.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let inst = Instance::build(cfg)?;
    let kind = cfg.cd_kind()?;
    write_dumps(cfg, &inst, kind)?;
    let state = inst.evolve(cfg, kind, cfg.total_time)?;
    let target = cfg.target.as_ref().map(|t| target_state(t, inst.qubits())).transpose()?;
    let result = measure(&state, &inst.ground, target.as_ref(), cfg.shots, cfg.seed);
    let gate_counts = match cfg.method {
        Method::Trotter => {
            let (circuit, counts) = compile_plan(&inst.problem, kind, &plan(cfg, cfg.total_time)?, cfg.hardware_mode)?;
            if let Some(path) = &cfg.emit_qasm {
                write_file(path, &emit_qasm(&circuit))?;
            }
            Some(counts)
        }
        Method::Exact => {
            if cfg.emit_qasm.is_some() {
                return Err(CliError::Invalid("circuit output needs method = trotter".into()));
            }
            None
        }
    };
    // the empty label of a fully fixed instance is index 0
    let argmax_index = parse_basis_label(&result.argmax).unwrap_or(0);
    Ok(RunOutput {
        config: cfg.clone(),
        qubits: inst.qubits(),
        variables: inst.variables(),
        ground_labels: inst.ground.iter().map(|&g| inst.label(g)).collect(),
        ground_factors: inst.ground.iter().map(|&g| inst.decode(g)).collect(),
        argmax_factors: inst.decode(argmax_index),
        histogram_argmax: result.histogram_argmax(),
        argmax: result.argmax,
        success_probability: result.success_probability,
        fidelity: result.fidelity,
        probabilities: result.probabilities,
        histogram: result.histogram,
        gate_counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "T")]
    pub total: f64,
    pub success_with_cd: f64,
    pub success_without_cd: f64,
}

/// Success probability with the configured CD and without CD at each `T`,
/// sorted by `T`.
pub fn sweep(cfg: &ExperimentConfig, times: &[f64]) -> Result<Vec<SweepRow>> {
    if times.is_empty() {
        return Err(CliError::Invalid("sweep needs at least one T".into()));
    }
    let inst = Instance::build(cfg)?;
    let kind = cfg.cd_kind()?;
    write_dumps(cfg, &inst, kind)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut rows = pool.install(|| {
        times
            .par_iter()
            .map(|&t| {
                let with_cd = inst.success(&inst.evolve(cfg, kind, t)?);
                let without = inst.success(&inst.evolve(cfg, CdKind::None, t)?);
                Ok(SweepRow { total: t, success_with_cd: with_cd, success_without_cd: without })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    rows.sort_by(|a, b| a.total.total_cmp(&b.total));
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render_hamiltonian(inst: &Instance) -> String {
    let mut s = String::new();
    for (k, v) in inst.variables().iter().enumerate() {
        let _ = writeln!(s, "# qubit {} = {v}", k + 1);
    }
    s.push_str(&inst.problem.ising().render());
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

pub fn render_equations(inst: &Instance) -> String {
    match &inst.encoded {
        Encoded::Direct(d) => format!("x = {}\ny = {}\ncost = {}\n", d.x_poly(), d.y_poly(), d.cost()),
        Encoded::Table(tp) => format!(
            "# column equations\n{}# reduced\n{}# substitutions\n{}# cost\n{}\n",
            tp.original.render(),
            tp.reduced.render(),
            tp.reduced.render_substitutions(),
            tp.cost
        ),
    }
}

/// CSV of `t, λ, λ̇` and the ansatz coefficients at every step time.
pub fn render_cd(cfg: &ExperimentConfig, inst: &Instance, kind: CdKind) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(e.to_string());
    if cfg.total_time == 0.0 {
        w.write_record(["t", "lambda", "lambda_dot"]).map_err(err)?;
    } else {
        let schedule = Schedule::new(cfg.total_time)?;
        let count = plan(cfg, cfg.total_time).map(|p| p.steps()).unwrap_or(100).max(1);
        let samples = sample_coefficients(&inst.problem, kind, &schedule, count)?;
        let width = samples.first().map_or(0, |s| s.coefficients.len());
        let header = ["t", "lambda", "lambda_dot"].into_iter().map(String::from).chain((1..=width).map(|k| format!("c{k}")));
        w.write_record(header).map_err(err)?;
        for s in samples {
            let row = [s.t, s.lambda, s.lambda_dot].into_iter().chain(s.coefficients).map(|v| format!("{v:?}"));
            w.write_record(row).map_err(err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn write_dumps(cfg: &ExperimentConfig, inst: &Instance, kind: CdKind) -> Result<()> {
    if let Some(p) = &cfg.dump_hamiltonian {
        write_file(p, &render_hamiltonian(inst))?;
    }
    if let Some(p) = &cfg.dump_equations {
        write_file(p, &render_equations(inst))?;
    }
    if let Some(p) = &cfg.dump_cd {
        write_file(p, &render_cd(cfg, inst, kind)?)?;
    }
    Ok(())
}

/// Writes `text` to `path`, or to standard error when `path` is `-`.
fn write_file(path: &std::path::Path, text: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        eprint!("{text}");
        return Ok(());
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
