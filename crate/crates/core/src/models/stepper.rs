//! Strang splitting: the linear part is propagated exactly in the Laplacian
//! eigenbasis, the local/nonlinear part by explicit half steps on either side.

use super::potential::Potential;
use super::state::{Model, ModelState};
use crate::grids::spectral::Transform;
use crate::grids::stencil::div_a_grad;
use crate::{Error, Result};
use num_complex::Complex64;

pub const DEFAULT_AMPLITUDE_CEILING: f64 = 1e6;

#[derive(Debug, Clone)]
enum Linear {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
    /// Row-major 2×2 propagator of (û, ŵ) per mode.
    Wave(Vec<[f64; 4]>),
}

#[derive(Debug, Clone)]
pub struct Stepper {
    model: Model,
    dt: f64,
    transform: Transform,
    linear: Linear,
    a_ref: f64,
    pub amplitude_ceiling: f64,
}

/// exp(tA) for A = [[0, 1], [λ, −γ]], γ = 1 − αλ, λ ≤ 0.
pub fn wave_propagator(lambda: f64, alpha: f64, t: f64) -> [f64; 4] {
    let gamma = 1.0 - alpha * lambda;
    let disc = gamma * gamma + 4.0 * lambda;
    let decay = (-0.5 * gamma * t).exp();
    let (c, sh) = if disc > 0.0 {
        let s = disc.sqrt();
        if s * t < 1e-6 {
            (decay, t * decay)
        } else {
            let mu_plus = 2.0 * lambda / (gamma + s);
            let mu_minus = -0.5 * (gamma + s);
            let (ep, em) = ((mu_plus * t).exp(), (mu_minus * t).exp());
            (0.5 * (ep + em), (ep - em) / s)
        }
    } else {
        let w = 0.5 * (-disc).sqrt();
        if w * t < 1e-6 {
            (decay, t * decay)
        } else {
            (decay * (w * t).cos(), decay * (w * t).sin() / w)
        }
    };
    [c + 0.5 * gamma * sh, sh, lambda * sh, c - 0.5 * gamma * sh]
}

fn rk4<F: Fn(f64) -> f64>(u: f64, h: f64, f: F) -> f64 {
    let k1 = f(u);
    let k2 = f(u + 0.5 * h * k1);
    let k3 = f(u + 0.5 * h * k2);
    let k4 = f(u + h * k3);
    u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

fn cgl_reaction(z: Complex64, rot: Complex64) -> Complex64 {
    rot * (z - z * z.norm_sqr())
}

fn rk4_complex(z: Complex64, h: f64, rot: Complex64) -> Complex64 {
    let k1 = cgl_reaction(z, rot);
    let k2 = cgl_reaction(z + 0.5 * h * k1, rot);
    let k3 = cgl_reaction(z + 0.5 * h * k2, rot);
    let k4 = cgl_reaction(z + h * k3, rot);
    z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

impl Stepper {
    pub fn new(state: &ModelState, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Domain(format!(
                "time step must be positive, got {dt}"
            )));
        }
        let transform = Transform::new(state.domain());
        let sym = transform.laplacian_symbol();
        let mut a_ref = 1.0;
        let linear = match &state.model {
            Model::ReactionDiffusion { .. } => {
                Linear::Real(sym.iter().map(|l| (l * dt).exp()).collect())
            }
            Model::NonlinearDiffusion { diffusivity } => {
                let range = state.sup_amplitude();
                a_ref = diffusivity.min_on(range);
                if !(a_ref > 0.0) {
                    return Err(Error::Precondition(format!(
                        "diffusivity is not positive on [-{range}, {range}]: min a = {a_ref}"
                    )));
                }
                Linear::Real(sym.iter().map(|l| (a_ref * l * dt).exp()).collect())
            }
            Model::GinzburgLandau { alpha } => {
                let rot = Complex64::new(1.0, *alpha);
                Linear::Complex(sym.iter().map(|l| (rot * l * dt).exp()).collect())
            }
            Model::DampedWave { alpha, .. } => Linear::Wave(
                sym.iter()
                    .map(|l| wave_propagator(*l, *alpha, dt))
                    .collect(),
            ),
        };
        Ok(Self {
            model: state.model.clone(),
            dt,
            transform,
            linear,
            a_ref,
            amplitude_ceiling: DEFAULT_AMPLITUDE_CEILING,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn apply_real(&self, values: &mut [f64], factor: &[f64]) {
        let mut c = self.transform.forward_real(values);
        for (z, f) in c.iter_mut().zip(factor) {
            *z *= f;
        }
        self.transform.inverse(&mut c);
        for (v, z) in values.iter_mut().zip(&c) {
            *v = z.re;
        }
    }

    fn reaction(potential: &Potential, u: &mut [f64], h: f64) {
        if matches!(potential, Potential::Flat) {
            return;
        }
        for v in u.iter_mut() {
            *v = rk4(*v, h, |x| -potential.derivative(x));
        }
    }

    fn nld_explicit(&self, state: &mut ModelState, h: f64) {
        let Model::NonlinearDiffusion { diffusivity } = &state.model else {
            unreachable!()
        };
        if diffusivity.a2 == 0.0 {
            return;
        }
        let domain = state.fields[0].domain.clone();
        let rhs = |u: &[f64]| {
            let a: Vec<f64> = u
                .iter()
                .map(|&x| diffusivity.eval(x) - self.a_ref)
                .collect();
            div_a_grad(&domain, &a, u)
        };
        let u0 = state.fields[0].values.clone();
        let k1 = rhs(&u0);
        let u1: Vec<f64> = u0.iter().zip(&k1).map(|(u, k)| u + h * k).collect();
        let k2 = rhs(&u1);
        for (k, v) in state.fields[0].values.iter_mut().enumerate() {
            *v = u0[k] + 0.5 * h * (k1[k] + k2[k]);
        }
    }

    fn local_half(&self, state: &mut ModelState) {
        let h = 0.5 * self.dt;
        match &self.model {
            Model::ReactionDiffusion { potential } => {
                Self::reaction(potential, &mut state.fields[0].values, h)
            }
            Model::DampedWave { potential, .. } => {
                let (u, w) = state.fields.split_at_mut(1);
                for (uu, ww) in u[0].values.iter().zip(w[0].values.iter_mut()) {
                    *ww -= h * potential.derivative(*uu);
                }
            }
            Model::GinzburgLandau { alpha } => {
                let rot = Complex64::new(1.0, *alpha);
                let (re, im) = state.fields.split_at_mut(1);
                for (a, b) in re[0].values.iter_mut().zip(im[0].values.iter_mut()) {
                    let z = rk4_complex(Complex64::new(*a, *b), h, rot);
                    *a = z.re;
                    *b = z.im;
                }
            }
            Model::NonlinearDiffusion { .. } => self.nld_explicit(state, h),
        }
    }

    fn linear_full(&self, state: &mut ModelState) {
        match &self.linear {
            Linear::Real(f) => self.apply_real(&mut state.fields[0].values, f),
            Linear::Complex(f) => {
                let (re, im) = (&state.fields[0].values, &state.fields[1].values);
                let mut c: Vec<Complex64> = re
                    .iter()
                    .zip(im)
                    .map(|(a, b)| Complex64::new(*a, *b))
                    .collect();
                self.transform.forward(&mut c);
                for (z, g) in c.iter_mut().zip(f) {
                    *z *= g;
                }
                self.transform.inverse(&mut c);
                for (k, z) in c.iter().enumerate() {
                    state.fields[0].values[k] = z.re;
                    state.fields[1].values[k] = z.im;
                }
            }
            Linear::Wave(m) => {
                let mut u = self.transform.forward_real(&state.fields[0].values);
                let mut w = self.transform.forward_real(&state.fields[1].values);
                for k in 0..u.len() {
                    let [a, b, c, d] = m[k];
                    let (uk, wk) = (u[k], w[k]);
                    u[k] = a * uk + b * wk;
                    w[k] = c * uk + d * wk;
                }
                self.transform.inverse(&mut u);
                self.transform.inverse(&mut w);
                for k in 0..u.len() {
                    state.fields[0].values[k] = u[k].re;
                    state.fields[1].values[k] = w[k].re;
                }
            }
        }
    }

    /// Advances in place by one step of size dt.
    pub fn step(&self, state: &mut ModelState) -> Result<()> {
        if state.model != self.model {
            return Err(Error::Domain(
                "stepper was built for a different model".into(),
            ));
        }
        self.local_half(state);
        self.linear_full(state);
        self.local_half(state);
        let t = state.time + self.dt;
        state.set_time(t);
        for f in &state.fields {
            if !f.is_finite() {
                return Err(Error::Instability {
                    time: t,
                    reason: "non-finite field value".into(),
                });
            }
            let m = f.max_abs();
            if m > self.amplitude_ceiling {
                return Err(Error::Instability {
                    time: t,
                    reason: format!(
                        "amplitude {m:.3e} exceeds ceiling {:.3e}",
                        self.amplitude_ceiling
                    ),
                });
            }
        }
        Ok(())
    }
}

/// One step from a fresh stepper; loops should build a [`Stepper`] once.
pub fn model_step(state: &ModelState, dt: f64) -> Result<ModelState> {
    let mut next = state.clone();
    Stepper::new(state, dt)?.step(&mut next)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wave_propagator_matches_series() {
        for (lambda, alpha) in [
            (-3.0, 0.0),
            (-0.1, 0.5),
            (-40.0, 2.0),
            (0.0, 1.0),
            (-0.25, 0.0),
        ] {
            let t = 0.37;
            let gamma = 1.0 - alpha * lambda;
            let a = [[0.0, 1.0], [lambda, -gamma]];
            // exp by scaled Taylor series and squaring
            let s = 2f64.powi(10);
            let mut term = [[1.0, 0.0], [0.0, 1.0]];
            let mut sum = term;
            for k in 1..30 {
                let mut next = [[0.0; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        next[i][j] =
                            (0..2).map(|l| term[i][l] * a[l][j]).sum::<f64>() * t / s / k as f64;
                    }
                }
                term = next;
                for i in 0..2 {
                    for j in 0..2 {
                        sum[i][j] += term[i][j];
                    }
                }
            }
            for _ in 0..10 {
                let mut sq = [[0.0; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        sq[i][j] = (0..2).map(|l| sum[i][l] * sum[l][j]).sum();
                    }
                }
                sum = sq;
            }
            let m = wave_propagator(lambda, alpha, t);
            let flat = [sum[0][0], sum[0][1], sum[1][0], sum[1][1]];
            for k in 0..4 {
                assert!(
                    (m[k] - flat[k]).abs() < 1e-10,
                    "λ={lambda} α={alpha}: {m:?} vs {flat:?}"
                );
            }
        }
    }
}
