use crate::grids::spectral::Transform;
use crate::grids::spectral::{derivative_wavenumbers, wavenumbers};
use crate::grids::{Domain, DomainKind, ScalarField, VectorField};
use crate::{Error, Result};
use num_complex::Complex64;

/// Per-column vertical means allowed in a field passed to `biot_savart`.
pub const MEAN_TOL: f64 = 1e-10;

/// Default advective Courant number.
pub const DEFAULT_CFL: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct CylinderState {
    pub omega: ScalarField,
    /// vertical average of the vertical speed, on the x₁ axis
    pub m: ScalarField,
    pub time: f64,
}

impl CylinderState {
    pub fn new(omega: ScalarField, m: ScalarField) -> Result<Self> {
        if omega.domain.kind != DomainKind::Cylinder {
            return Err(Error::Domain("vorticity lives on a cylinder domain".into()));
        }
        if m.domain != omega.domain.first_axis_line() {
            return Err(Error::Domain(
                "mean flow must be sampled on the cylinder's x1 axis".into(),
            ));
        }
        if !omega.is_finite() || !m.is_finite() {
            return Err(Error::Domain("non-finite initial data".into()));
        }
        let time = omega.time;
        Ok(Self { omega, m, time })
    }

    /// State with m ≡ 0.
    pub fn at_rest(omega: ScalarField) -> Result<Self> {
        let m = ScalarField::zeros(&omega.domain.first_axis_line());
        Self::new(omega, m)
    }

    pub fn domain(&self) -> &Domain {
        &self.omega.domain
    }

    pub fn set_time(&mut self, t: f64) {
        self.time = t;
        self.omega.time = t;
        self.m.time = t;
    }
}

/// ⟨ω⟩(x₁) for every column.
pub fn vertical_mean(field: &ScalarField) -> Vec<f64> {
    let (_, ny) = field.domain.shape();
    field
        .values
        .chunks(ny)
        .map(|c| c.iter().sum::<f64>() / ny as f64)
        .collect()
}

/// ω − ⟨ω⟩.
pub fn oscillating_part(field: &ScalarField) -> ScalarField {
    let (_, ny) = field.domain.shape();
    let mean = vertical_mean(field);
    let v = field
        .values
        .iter()
        .enumerate()
        .map(|(k, w)| w - mean[k / ny])
        .collect();
    field.with_values(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiotSavart {
    pub u_hat: VectorField,
    /// streamfunction with û₁ = −∂₂v
    pub v: ScalarField,
}

/// Spectral data shared by the Poisson inversion and the stepper.
#[derive(Debug, Clone)]
struct Symbols {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k1d: Vec<f64>,
    k2d: Vec<f64>,
    shape: (usize, usize),
}

impl Symbols {
    fn new(domain: &Domain) -> Self {
        let (nx, ny) = domain.shape();
        let l = domain.axes[0].length;
        Self {
            k1: wavenumbers(nx, l),
            k2: wavenumbers(ny, 1.0),
            k1d: derivative_wavenumbers(nx, l),
            k2d: derivative_wavenumbers(ny, 1.0),
            shape: (nx, ny),
        }
    }

    /// ψ̂ = Δ⁻¹ω̂ on k₂ ≠ 0; the k₂ = 0 column is dropped.
    fn stream(&self, w: &[Complex64]) -> Vec<Complex64> {
        let (nx, ny) = self.shape;
        let mut out = vec![Complex64::new(0.0, 0.0); nx * ny];
        for i in 0..nx {
            for j in 1..ny {
                let k = i * ny + j;
                out[k] = -w[k] / (self.k1[i] * self.k1[i] + self.k2[j] * self.k2[j]);
            }
        }
        out
    }

    fn d1(&self, a: &[Complex64]) -> Vec<Complex64> {
        let ny = self.shape.1;
        a.iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::new(0.0, self.k1d[k / ny]))
            .collect()
    }

    fn d2(&self, a: &[Complex64]) -> Vec<Complex64> {
        let ny = self.shape.1;
        a.iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::new(0.0, self.k2d[k % ny]))
            .collect()
    }
}

fn real_part(t: &Transform, mut a: Vec<Complex64>) -> Vec<f64> {
    t.inverse(&mut a);
    a.into_iter().map(|c| c.re).collect()
}

fn check_mean_free(omega_hat: &ScalarField) -> Result<()> {
    let scale = omega_hat.max_abs().max(1.0);
    let worst = vertical_mean(omega_hat)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if worst > MEAN_TOL * scale {
        return Err(Error::Precondition(format!(
            "oscillating vorticity has vertical mean {worst:.3e} (tolerance {:.1e})",
            MEAN_TOL * scale
        )));
    }
    Ok(())
}

/// û = ∇^⊥Δ⁻¹ω̂ and v = Δ⁻¹ω̂ on the truncated-periodic cylinder.
pub fn biot_savart(omega_hat: &ScalarField) -> Result<BiotSavart> {
    let d = &omega_hat.domain;
    if d.kind != DomainKind::Cylinder {
        return Err(Error::Domain("biot_savart needs a cylinder domain".into()));
    }
    check_mean_free(omega_hat)?;
    let t = Transform::new(d);
    let s = Symbols::new(d);
    let psi = s.stream(&t.forward_real(&omega_hat.values));
    let u1: Vec<f64> = real_part(&t, s.d2(&psi)).into_iter().map(|v| -v).collect();
    let u2 = real_part(&t, s.d1(&psi));
    let v = real_part(&t, psi);
    Ok(BiotSavart {
        u_hat: VectorField {
            domain: d.clone(),
            components: vec![u1, u2],
            time: omega_hat.time,
        },
        v: omega_hat.with_values(v),
    })
}

/// Spectral first derivatives (∂₁f, ∂₂f) of a cylinder field.
pub fn spectral_gradient(field: &ScalarField) -> VectorField {
    let t = Transform::new(&field.domain);
    let s = Symbols::new(&field.domain);
    let f = t.forward_real(&field.values);
    VectorField {
        domain: field.domain.clone(),
        components: vec![real_part(&t, s.d1(&f)), real_part(&t, s.d2(&f))],
        time: field.time,
    }
}

/// Spectral ∂₁∂₂ of a cylinder field.
pub fn spectral_mixed(field: &ScalarField) -> ScalarField {
    let t = Transform::new(&field.domain);
    let s = Symbols::new(&field.domain);
    let f = t.forward_real(&field.values);
    field.with_values(real_part(&t, s.d1(&s.d2(&f))))
}

/// Integrating-factor RK4 for the vorticity / mean-flow system with
/// 2/3-rule dealiasing of the quadratic terms.
#[derive(Debug, Clone)]
pub struct CylinderStepper {
    dt: f64,
    pub cfl: f64,
    t2: Transform,
    t1: Transform,
    s: Symbols,
    mask: Vec<bool>,
    mask1: Vec<bool>,
    half: Vec<f64>,
    full: Vec<f64>,
    half1: Vec<f64>,
    full1: Vec<f64>,
}

fn keep(i: usize, n: usize) -> bool {
    let k = if i <= n / 2 { i } else { n - i };
    k <= n / 3
}

struct Spec {
    w: Vec<Complex64>,
    m: Vec<Complex64>,
}

impl CylinderStepper {
    pub fn new(domain: &Domain, dt: f64) -> Result<Self> {
        if domain.kind != DomainKind::Cylinder {
            return Err(Error::Domain(
                "cylinder stepper needs a cylinder domain".into(),
            ));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Domain(format!("dt must be positive, got {dt}")));
        }
        let s = Symbols::new(domain);
        let (nx, ny) = s.shape;
        let lap: Vec<f64> = (0..nx * ny)
            .map(|k| -(s.k1[k / ny].powi(2) + s.k2[k % ny].powi(2)))
            .collect();
        let lap1: Vec<f64> = s.k1.iter().map(|k| -k * k).collect();
        let mask = (0..nx * ny)
            .map(|k| keep(k / ny, nx) && keep(k % ny, ny))
            .collect();
        Ok(Self {
            dt,
            cfl: DEFAULT_CFL,
            t2: Transform::new(domain),
            t1: Transform::new(&domain.first_axis_line()),
            mask,
            mask1: (0..nx).map(|i| keep(i, nx)).collect(),
            half: lap.iter().map(|l| (0.5 * dt * l).exp()).collect(),
            full: lap.iter().map(|l| (dt * l).exp()).collect(),
            half1: lap1.iter().map(|l| (0.5 * dt * l).exp()).collect(),
            full1: lap1.iter().map(|l| (dt * l).exp()).collect(),
            s,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// −(u·∇ω) and −∂₁⟨û₁û₂⟩, dealiased.
    fn nonlinear(&self, x: &Spec) -> (Spec, f64) {
        let (nx, ny) = self.s.shape;
        let mut wh = x.w.clone();
        for i in 0..nx {
            wh[i * ny] = Complex64::new(0.0, 0.0);
        }
        let psi = self.s.stream(&wh);
        let u1 = real_part(&self.t2, self.s.d2(&psi));
        let u2 = real_part(&self.t2, self.s.d1(&psi));
        let w1 = real_part(&self.t2, self.s.d1(&x.w));
        let w2 = real_part(&self.t2, self.s.d2(&x.w));
        let m = real_part(&self.t1, x.m.clone());
        let mut umax: f64 = 0.0;
        let mut adv = vec![Complex64::new(0.0, 0.0); nx * ny];
        let mut q = vec![Complex64::new(0.0, 0.0); nx];
        for i in 0..nx {
            let mut acc = 0.0;
            for j in 0..ny {
                let k = i * ny + j;
                // û₁ = −∂₂ψ
                let a = -u1[k];
                let b = u2[k] + m[i];
                umax = umax.max((a * a + b * b).sqrt());
                adv[k] = Complex64::new(-(a * w1[k] + b * w2[k]), 0.0);
                acc += a * u2[k];
            }
            q[i] = Complex64::new(acc / ny as f64, 0.0);
        }
        self.t2.forward(&mut adv);
        for (c, keep) in adv.iter_mut().zip(&self.mask) {
            if !keep {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        self.t1.forward(&mut q);
        let mq = q
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if self.mask1[i] {
                    -c * Complex64::new(0.0, self.s.k1d[i])
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        (Spec { w: adv, m: mq }, umax)
    }

    /// Largest speed |û + (0, m)| on the grid.
    pub fn max_speed(&self, state: &CylinderState) -> f64 {
        let x = Spec {
            w: self.t2.forward_real(&state.omega.values),
            m: self.t1.forward_real(&state.m.values),
        };
        self.nonlinear(&x).1
    }

    pub fn step(&self, state: &mut CylinderState) -> Result<()> {
        let dt = self.dt;
        let fail = |reason: String| Error::Instability {
            time: state.time,
            reason,
        };
        let x = Spec {
            w: self.t2.forward_real(&state.omega.values),
            m: self.t1.forward_real(&state.m.values),
        };
        let (k1, umax) = self.nonlinear(&x);
        let dx = state
            .domain()
            .spacing()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let limit = self.cfl * dx / umax.max(1.0);
        if dt > limit * (1.0 + 1e-12) {
            return Err(fail(format!(
                "dt = {dt} exceeds the advective limit {limit:.4e} (max speed {umax:.4e})"
            )));
        }
        let comb = |a: &Spec, e: (&[f64], &[f64]), b: &Spec, c: f64| Spec {
            w: a.w
                .iter()
                .zip(&b.w)
                .zip(e.0)
                .map(|((p, q), f)| (p + c * q) * f)
                .collect(),
            m: a.m
                .iter()
                .zip(&b.m)
                .zip(e.1)
                .map(|((p, q), f)| (p + c * q) * f)
                .collect(),
        };
        let half = (self.half.as_slice(), self.half1.as_slice());
        let x2 = comb(&x, half, &k1, 0.5 * dt);
        let (k2, _) = self.nonlinear(&x2);
        let ex = comb(&x, half, &k1, 0.0);
        let x3 = Spec {
            w: ex
                .w
                .iter()
                .zip(&k2.w)
                .map(|(a, b)| a + 0.5 * dt * b)
                .collect(),
            m: ex
                .m
                .iter()
                .zip(&k2.m)
                .map(|(a, b)| a + 0.5 * dt * b)
                .collect(),
        };
        let (k3, _) = self.nonlinear(&x3);
        let x4 = Spec {
            w: (0..x.w.len())
                .map(|k| self.full[k] * x.w[k] + dt * self.half[k] * k3.w[k])
                .collect(),
            m: (0..x.m.len())
                .map(|k| self.full1[k] * x.m[k] + dt * self.half1[k] * k3.m[k])
                .collect(),
        };
        let (k4, _) = self.nonlinear(&x4);
        let s6 = dt / 6.0;
        let mut w: Vec<Complex64> = (0..x.w.len())
            .map(|k| {
                self.full[k] * (x.w[k] + s6 * k1.w[k])
                    + s6 * (2.0 * self.half[k] * (k2.w[k] + k3.w[k]) + k4.w[k])
            })
            .collect();
        let mut m: Vec<Complex64> = (0..x.m.len())
            .map(|k| {
                self.full1[k] * (x.m[k] + s6 * k1.m[k])
                    + s6 * (2.0 * self.half1[k] * (k2.m[k] + k3.m[k]) + k4.m[k])
            })
            .collect();
        self.t2.inverse(&mut w);
        self.t1.inverse(&mut m);
        let w: Vec<f64> = w.into_iter().map(|c| c.re).collect();
        let m: Vec<f64> = m.into_iter().map(|c| c.re).collect();
        if w.iter().chain(&m).any(|v| !v.is_finite()) {
            return Err(fail("non-finite vorticity or mean flow".into()));
        }
        let t = state.time + dt;
        state.omega.values = w;
        state.m.values = m;
        state.set_time(t);
        Ok(())
    }
}

/// One step of size dt.
pub fn cylinder_step(state: &CylinderState, dt: f64) -> Result<CylinderState> {
    let mut s = state.clone();
    CylinderStepper::new(state.domain(), dt)?.step(&mut s)?;
    Ok(s)
}

/// −u·∇ω evaluated spectrally, without dealiasing.
pub fn advection_term(state: &CylinderState) -> Result<ScalarField> {
    let bs = biot_savart(&oscillating_part(&state.omega))?;
    let g = spectral_gradient(&state.omega);
    let (_, ny) = state.domain().shape();
    let v = (0..state.omega.values.len())
        .map(|k| {
            let u2 = bs.u_hat.components[1][k] + state.m.values[k / ny];
            -(bs.u_hat.components[0][k] * g.components[0][k] + u2 * g.components[1][k])
        })
        .collect();
    Ok(state.omega.with_values(v))
}
