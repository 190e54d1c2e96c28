//! Named initial data.

use super::state::{Model, ModelId, ModelState};
use crate::grids::{Boundary, Domain, ScalarField};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2, TAU};

/// Number of plane waves summed by `random_smooth`.
pub const RANDOM_MODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum Preset {
    Constant {
        value: f64,
    },
    /// Product over axes of sin(2πm(x − x₀)/L) (periodic) or cos(πm(x − x₀)/L) (Neumann);
    /// m = 0 contributes a factor 1.
    Eigenmode {
        modes: Vec<usize>,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// tanh((x − c)/√2), or its negative.
    Kink {
        #[serde(default)]
        center: f64,
        #[serde(default)]
        anti: bool,
    },
    /// ψ(x − a) − ψ(x + a) + 1
    KinkPair {
        a: f64,
    },
    /// (−1)^{n+1} on b_n ≤ |x| < b_{n+1} with b_0 = 0.
    KinkLattice {
        b: Vec<f64>,
    },
    RandomSmooth {
        seed: u64,
        amplitude: f64,
        correlation_length: f64,
        #[serde(default)]
        background: f64,
        #[serde(default)]
        envelope_radius: Option<f64>,
    },
}

fn one() -> f64 {
    1.0
}

pub fn kink_profile(x: f64) -> f64 {
    (x / SQRT_2).tanh()
}

fn random_field(
    domain: &Domain,
    rng: &mut ChaCha20Rng,
    amplitude: f64,
    ell: f64,
    background: f64,
    env: Option<f64>,
) -> Vec<f64> {
    let normal = Normal::new(0.0, 1.0 / ell).expect("positive correlation length");
    let dim = domain.dim();
    let waves: Vec<([f64; 2], f64)> = (0..RANDOM_MODES)
        .map(|_| {
            let mut k = [0.0; 2];
            for (ax, kk) in k.iter_mut().enumerate().take(dim) {
                let raw: f64 = normal.sample(rng);
                let a = &domain.axes[ax];
                *kk = match a.boundary {
                    Boundary::Periodic => {
                        let q = TAU / a.length;
                        (raw / q).round() * q
                    }
                    Boundary::Neumann => raw,
                };
            }
            (k, rng.gen_range(0.0..TAU))
        })
        .collect();
    let norm = amplitude * (2.0 / RANDOM_MODES as f64).sqrt();
    (0..domain.len())
        .map(|idx| {
            let p = domain.point(idx);
            let s: f64 = waves
                .iter()
                .map(|(k, ph)| (k[0] * p[0] + k[1] * p[1] + ph).cos())
                .sum();
            let w = env.map_or(1.0, |r| {
                (-(p[0] * p[0] + p[1] * p[1]) / (2.0 * r * r)).exp()
            });
            background + norm * w * s
        })
        .collect()
}

impl Preset {
    pub fn validate(&self) -> Result<()> {
        match self {
            Preset::KinkLattice { b } => {
                if b.is_empty() || b[0] <= 0.0 || b.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Domain(
                        "kink_lattice needs a positive strictly increasing sequence".into(),
                    ));
                }
            }
            Preset::KinkPair { a } if !(*a > 0.0) => {
                return Err(Error::Domain(format!("kink_pair needs a > 0, got {a}")));
            }
            Preset::RandomSmooth {
                correlation_length,
                envelope_radius,
                ..
            } => {
                if !(*correlation_length > 0.0) || envelope_radius.is_some_and(|r| !(r > 0.0)) {
                    return Err(Error::Domain("random_smooth needs positive lengths".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The primary real field.
    pub fn field(&self, domain: &Domain) -> Result<ScalarField> {
        self.validate()?;
        let f = match self {
            Preset::Constant { value } => ScalarField::from_fn(domain, |_, _| *value),
            Preset::Eigenmode { modes, amplitude } => {
                let axes = domain.axes.clone();
                ScalarField::from_fn(domain, |x, y| {
                    let mut v = *amplitude;
                    for (ax, c) in [x, y].iter().enumerate().take(axes.len()) {
                        let m = modes.get(ax).copied().unwrap_or(0) as f64;
                        if m == 0.0 {
                            continue;
                        }
                        let a = &axes[ax];
                        let s = (c - a.origin) / a.length;
                        v *= match a.boundary {
                            Boundary::Periodic => (TAU * m * s).sin(),
                            Boundary::Neumann => (PI * m * s).cos(),
                        };
                    }
                    v
                })
            }
            Preset::Kink { center, anti } => {
                let s = if *anti { -1.0 } else { 1.0 };
                ScalarField::from_fn(domain, |x, _| s * kink_profile(x - center))
            }
            Preset::KinkPair { a } => ScalarField::from_fn(domain, |x, _| {
                kink_profile(x - a) - kink_profile(x + a) + 1.0
            }),
            Preset::KinkLattice { b } => {
                // superposed kink pairs at ±b_n; -1 at the center, sign flips at each b_n
                let half = domain.inner_radius();
                let m = b.partition_point(|bn| *bn < half);
                let outer = if m % 2 == 0 { -1.0 } else { 1.0 };
                ScalarField::from_fn(domain, |x, _| {
                    let mut u = outer;
                    for (k, bn) in b[..m].iter().enumerate() {
                        let s = if k % 2 == 0 { -1.0 } else { 1.0 };
                        u += s * (kink_profile(x + bn) - kink_profile(x - bn));
                    }
                    u
                })
            }
            Preset::RandomSmooth {
                seed,
                amplitude,
                correlation_length,
                background,
                envelope_radius,
            } => {
                let mut rng = ChaCha20Rng::seed_from_u64(*seed);
                let v = random_field(
                    domain,
                    &mut rng,
                    *amplitude,
                    *correlation_length,
                    *background,
                    *envelope_radius,
                );
                ScalarField::new(domain.clone(), v, 0.0)?
            }
        };
        ScalarField::new(domain.clone(), f.values, 0.0)
    }

    /// Full model state: u_t ≡ 0 for the damped wave; the complex field is real
    /// except for random data, where the imaginary part continues the same stream.
    pub fn state(&self, model: &Model, domain: &Domain) -> Result<ModelState> {
        if let (
            ModelId::GinzburgLandau,
            Preset::RandomSmooth {
                seed,
                amplitude,
                correlation_length,
                background,
                envelope_radius,
            },
        ) = (model.id(), self)
        {
            self.validate()?;
            let mut rng = ChaCha20Rng::seed_from_u64(*seed);
            let re = random_field(
                domain,
                &mut rng,
                *amplitude,
                *correlation_length,
                *background,
                *envelope_radius,
            );
            let im = random_field(
                domain,
                &mut rng,
                *amplitude,
                *correlation_length,
                0.0,
                *envelope_radius,
            );
            return ModelState::new(
                model.clone(),
                vec![
                    ScalarField::new(domain.clone(), re, 0.0)?,
                    ScalarField::new(domain.clone(), im, 0.0)?,
                ],
            );
        }
        ModelState::from_primary(model.clone(), self.field(domain)?)
    }
}
