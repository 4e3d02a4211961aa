use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use adcd_cd::{CdKind, LocalWeighting};
use adcd_sim::Sampling;
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    #[default]
    Direct,
    Table,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Direct => "direct",
            Encoding::Table => "table",
        })
    }
}

/// How the final state is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// First-order product formula with step `dt`.
    #[default]
    Trotter,
    /// Adaptive integration of the continuous evolution.
    Exact,
}

/// One experiment. Serialized as flat `key = value` lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Number to factor.
    pub n: u64,
    pub encoding: Encoding,
    pub bits_x: Option<u32>,
    pub bits_y: Option<u32>,
    /// `none`, `local`, `nc`, `nc1-generic` or `pool`.
    pub cd: String,
    /// Nested-commutator order for `cd = nc`.
    pub l: usize,
    pub local_weighting: String,
    pub hx: f64,
    #[serde(rename = "T")]
    pub total_time: f64,
    pub dt: f64,
    /// Overrides `dt` with `T / steps`; sweeps keep the step count fixed.
    pub steps: Option<usize>,
    pub method: Method,
    pub sampling: Sampling,
    pub shots: u64,
    pub seed: u64,
    pub hardware_mode: bool,
    /// Labels of the fidelity target `Σ|label⟩/√k`.
    pub target: Option<Vec<String>>,
    /// Total times for a sweep.
    pub sweep: Option<Vec<f64>>,
    pub qubit_cap: usize,
    /// Sweep worker threads; 0 uses every core.
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub emit_qasm: Option<PathBuf>,
    pub dump_hamiltonian: Option<PathBuf>,
    pub dump_equations: Option<PathBuf>,
    pub dump_cd: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 21,
            encoding: Encoding::Direct,
            bits_x: None,
            bits_y: None,
            cd: "local".into(),
            l: 1,
            local_weighting: LocalWeighting::default().to_string(),
            hx: -1.0,
            total_time: 0.01,
            dt: 0.001,
            steps: None,
            method: Method::Trotter,
            sampling: Sampling::Endpoint,
            shots: 8192,
            seed: 0,
            hardware_mode: false,
            target: None,
            sweep: None,
            qubit_cap: 16,
            workers: 0,
            out: None,
            emit_qasm: None,
            dump_hamiltonian: None,
            dump_equations: None,
            dump_cd: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_text(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Invalid(format!("config: {}", e.message())))
    }

    pub fn to_text(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Invalid(format!("config: {e}")))
    }

    pub fn cd_kind(&self) -> Result<CdKind> {
        let kind = CdKind::from_str(&self.cd).map_err(|e| CliError::Invalid(e.to_string()))?;
        Ok(match kind {
            CdKind::Nc(_) if self.cd.trim().eq_ignore_ascii_case("nc") => {
                if self.l == 0 {
                    return Err(CliError::Invalid("nested-commutator order l must be at least 1".into()));
                }
                CdKind::Nc(self.l)
            }
            k => k,
        })
    }

    pub fn weighting(&self) -> Result<LocalWeighting> {
        LocalWeighting::from_str(&self.local_weighting).map_err(|_| CliError::Invalid(format!("unknown local weighting {:?}", self.local_weighting)))
    }

    /// Step size for total time `total`.
    pub fn dt_for(&self, total: f64) -> f64 {
        match self.steps {
            Some(m) if m > 0 => total / m as f64,
            _ => self.dt,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.cd_kind()?;
        self.weighting()?;
        if !(self.total_time >= 0.0 && self.total_time.is_finite()) {
            return Err(CliError::Invalid(format!("T = {} must be a finite nonnegative time", self.total_time)));
        }
        if self.steps == Some(0) {
            return Err(CliError::Invalid("steps must be positive".into()));
        }
        if !(self.dt_for(self.total_time) > 0.0) {
            return Err(CliError::Invalid(format!("dt = {} must be positive", self.dt)));
        }
        if !self.hx.is_finite() || self.hx == 0.0 {
            return Err(CliError::Invalid(format!("hx = {} must be finite and nonzero", self.hx)));
        }
        if self.seed > i64::MAX as u64 || self.shots > i64::MAX as u64 {
            return Err(CliError::Invalid("seed and shots must fit in a signed 64-bit integer".into()));
        }
        if self.bits_x.is_some() != self.bits_y.is_some() {
            return Err(CliError::Invalid("bits_x and bits_y must be given together".into()));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.is_empty() {
                return Err(CliError::Invalid("sweep needs at least one T".into()));
            }
            if sweep.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
                return Err(CliError::Invalid("sweep times must be finite and nonnegative".into()));
            }
        }
        Ok(())
    }
}
