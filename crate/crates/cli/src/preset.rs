use std::fmt;

use crate::config::{Encoding, ExperimentConfig, Method};

/// Named parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// Factoring 21, local CD against bare annealing over `T`.
    Fig1a,
    /// Factoring 2479 with the table encoding over `T`.
    Fig2,
    /// Factoring 217 with local CD, `T = 0.01`, `Δt = 0.001`.
    Fig3,
    /// Factoring 35, `T = 0.005`, `Δt = 0.001`, `h_x = −2`.
    Fig4a,
    /// Factoring 235, two steps of `Δt = 0.01`.
    Fig4b,
    /// Factoring 2479, three steps of `Δt = 0.1`, 10000 shots.
    #[value(name = "figS2", alias = "figs2")]
    FigS2,
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::FigS2 => "figS2",
        })
    }
}

const SWEEP_T: [f64; 8] = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 0.75, 1.0];

impl Preset {
    pub fn config(self) -> ExperimentConfig {
        let base = ExperimentConfig::default();
        match self {
            Preset::Fig1a => ExperimentConfig {
                n: 21,
                encoding: Encoding::Direct,
                bits_x: Some(2),
                bits_y: Some(3),
                cd: "local".into(),
                total_time: 0.01,
                method: Method::Exact,
                steps: Some(100),
                sweep: Some(SWEEP_T.to_vec()),
                ..base
            },
            Preset::Fig2 => ExperimentConfig {
                n: 2479,
                encoding: Encoding::Table,
                bits_x: Some(7),
                bits_y: Some(6),
                cd: "nc".into(),
                l: 1,
                total_time: 0.3,
                steps: Some(3),
                sweep: Some(vec![0.1, 0.2, 0.3, 0.5, 1.0]),
                ..base
            },
            Preset::Fig3 => ExperimentConfig {
                n: 217,
                encoding: Encoding::Direct,
                bits_x: Some(3),
                bits_y: Some(5),
                cd: "local".into(),
                total_time: 0.01,
                dt: 0.001,
                shots: 8192,
                ..base
            },
            Preset::Fig4a => ExperimentConfig {
                n: 35,
                encoding: Encoding::Table,
                bits_x: Some(3),
                bits_y: Some(3),
                cd: "nc".into(),
                l: 1,
                hx: -2.0,
                total_time: 0.005,
                dt: 0.001,
                shots: 8192,
                target: Some(vec!["01".into(), "10".into()]),
                ..base
            },
            Preset::Fig4b => ExperimentConfig {
                n: 235,
                encoding: Encoding::Table,
                bits_x: Some(3),
                bits_y: Some(6),
                cd: "nc".into(),
                l: 1,
                hx: -2.0,
                total_time: 0.02,
                dt: 0.01,
                shots: 8192,
                ..base
            },
            Preset::FigS2 => ExperimentConfig {
                n: 2479,
                encoding: Encoding::Table,
                bits_x: Some(7),
                bits_y: Some(6),
                cd: "nc".into(),
                l: 1,
                total_time: 0.3,
                dt: 0.1,
                shots: 10_000,
                ..base
            },
        }
    }
}
