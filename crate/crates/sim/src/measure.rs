use std::collections::BTreeMap;

use adcd_encoding::basis_label;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::StateVector;

/// Measured statistics of a final state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    /// Every basis label with its probability, highest qubit leftmost.
    pub probabilities: BTreeMap<String, f64>,
    pub argmax: String,
    /// Probability mass on the ground labels.
    pub success_probability: f64,
    /// `|⟨target|ψ⟩|²` when a target state was given.
    pub fidelity: Option<f64>,
    pub shots: u64,
    pub seed: u64,
    /// Sampled counts, present when `shots > 0`.
    pub histogram: Option<BTreeMap<String, u64>>,
    #[serde(skip)]
    pub state: Option<StateVector>,
}

impl ExperimentResult {
    /// Label with the most counts, ties broken towards the smaller label.
    pub fn histogram_argmax(&self) -> Option<String> {
        let h = self.histogram.as_ref()?;
        h.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).map(|(l, _)| l.clone())
    }
}

pub fn success_probability(state: &StateVector, ground: &[u64]) -> f64 {
    ground.iter().map(|&g| state.amplitude(g).norm_sqr()).sum()
}

/// Index of the largest probability; ties go to the smaller index.
pub fn argmax_index(state: &StateVector) -> u64 {
    let p = state.probabilities();
    let mut best = 0;
    for (k, v) in p.iter().enumerate() {
        if *v > p[best] + 1e-15 {
            best = k;
        }
    }
    best as u64
}

/// Seeded categorical sampling of `shots` outcomes.
pub fn sample_counts(state: &StateVector, shots: u64, seed: u64) -> BTreeMap<u64, u64> {
    let mut counts = BTreeMap::new();
    if shots == 0 {
        return counts;
    }
    let dist = WeightedIndex::new(state.probabilities()).expect("normalized state has positive mass");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..shots {
        *counts.entry(dist.sample(&mut rng) as u64).or_insert(0) += 1;
    }
    counts
}

pub fn measure(state: &StateVector, ground: &[u64], target: Option<&StateVector>, shots: u64, seed: u64) -> ExperimentResult {
    let n = state.n();
    let probabilities = state
        .probabilities()
        .into_iter()
        .enumerate()
        .map(|(k, p)| (basis_label(k as u64, n), p))
        .collect();
    let histogram = (shots > 0).then(|| {
        sample_counts(state, shots, seed).into_iter().map(|(k, c)| (basis_label(k, n), c)).collect()
    });
    ExperimentResult {
        probabilities,
        argmax: basis_label(argmax_index(state), n),
        success_probability: success_probability(state, ground),
        fidelity: target.map(|t| t.inner(state).norm_sqr()),
        shots,
        seed,
        histogram,
        state: Some(state.clone()),
    }
}
