use super::solver::CylinderState;
use crate::grids::{Domain, DomainKind, ScalarField};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum VorticityPreset {
    Zero,
    /// amplitude · sin(2π·mode·x₂)
    Shear {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one_usize")]
        mode: usize,
    },
    /// Sum of x₁-Gaussians times vertical modes 0..=max_mode, scaled to sup = amplitude.
    Random {
        seed: u64,
        amplitude: f64,
        #[serde(default = "default_packets")]
        packets: usize,
        #[serde(default = "default_max_mode")]
        max_mode: usize,
        #[serde(default = "one")]
        width: f64,
    },
}

/// Initial vertical-mean flow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum MeanFlowPreset {
    #[default]
    Zero,
    /// amplitude · sin(2π·mode·x₁/L)
    Sine { amplitude: f64, mode: usize },
}

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

fn default_packets() -> usize {
    8
}

fn default_max_mode() -> usize {
    3
}

impl VorticityPreset {
    pub fn field(&self, domain: &Domain) -> Result<ScalarField> {
        if domain.kind != DomainKind::Cylinder {
            return Err(Error::Domain(
                "vorticity presets need a cylinder domain".into(),
            ));
        }
        match self {
            VorticityPreset::Zero => Ok(ScalarField::zeros(domain)),
            VorticityPreset::Shear { amplitude, mode } => {
                Ok(ScalarField::from_fn(domain, |_, y| {
                    amplitude * (TAU * *mode as f64 * y).sin()
                }))
            }
            VorticityPreset::Random {
                seed,
                amplitude,
                packets,
                max_mode,
                width,
            } => {
                if *packets == 0 || !(*width > 0.0) || !(*amplitude >= 0.0) {
                    return Err(Error::Domain(
                        "random vorticity needs packets >= 1, width > 0, amplitude >= 0".into(),
                    ));
                }
                let mut rng = ChaCha20Rng::seed_from_u64(*seed);
                let spread = domain.axes[0].length / 8.0;
                let p: Vec<(f64, f64, f64, f64, f64)> = (0..*packets)
                    .map(|_| {
                        (
                            rng.gen_range(-1.0..1.0),
                            rng.gen_range(-spread..spread),
                            width * rng.gen_range(0.5..1.5),
                            rng.gen_range(0..=*max_mode) as f64,
                            rng.gen_range(0.0..TAU),
                        )
                    })
                    .collect();
                let f = ScalarField::from_fn(domain, |x, y| {
                    p.iter()
                        .map(|(c, mu, s, n, ph)| {
                            c * (-(x - mu).powi(2) / (2.0 * s * s)).exp() * (TAU * n * y + ph).cos()
                        })
                        .sum()
                });
                let sup = f.max_abs();
                if sup == 0.0 {
                    return Ok(f);
                }
                Ok(f.with_values(f.values.iter().map(|v| amplitude * v / sup).collect()))
            }
        }
    }
}

impl MeanFlowPreset {
    pub fn field(&self, line: &Domain) -> ScalarField {
        match self {
            MeanFlowPreset::Zero => ScalarField::zeros(line),
            MeanFlowPreset::Sine { amplitude, mode } => {
                let a = &line.axes[0];
                ScalarField::from_fn(line, |x, _| {
                    amplitude * (TAU * *mode as f64 * (x - a.origin) / a.length).sin()
                })
            }
        }
    }
}

/// Initial state from the two presets.
pub fn initial_state(
    domain: &Domain,
    omega: &VorticityPreset,
    mean_flow: &MeanFlowPreset,
) -> Result<CylinderState> {
    let w = omega.field(domain)?;
    let m = mean_flow.field(&domain.first_axis_line());
    CylinderState::new(w, m)
}
