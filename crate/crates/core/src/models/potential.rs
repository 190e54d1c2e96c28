use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Reaction potential V ≥ 0 and its derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    /// V(u) = ¼(1 − u²)²
    DoubleWell,
    /// (m/8)(u² − 1)² on |u| ≤ 1 and (m/2)(|u| − 1)² outside, so V″ = m for |u| ≥ 1.
    QuadraticTail { m: f64 },
    /// V ≡ 0.
    Flat,
    /// Cubic Hermite through (u_k, V_k) with centered-difference slopes,
    /// continued linearly outside the table.
    CustomTable { u: Vec<f64>, v: Vec<f64> },
}

impl Default for Potential {
    fn default() -> Self {
        Potential::DoubleWell
    }
}

fn table_slopes(u: &[f64], v: &[f64]) -> Vec<f64> {
    let n = u.len();
    (0..n)
        .map(|k| {
            let (a, b) = (k.saturating_sub(1), (k + 1).min(n - 1));
            (v[b] - v[a]) / (u[b] - u[a])
        })
        .collect()
}

fn hermite(u: &[f64], v: &[f64], x: f64) -> (f64, f64) {
    let s = table_slopes(u, v);
    let n = u.len();
    if x <= u[0] {
        return (v[0] + s[0] * (x - u[0]), s[0]);
    }
    if x >= u[n - 1] {
        return (v[n - 1] + s[n - 1] * (x - u[n - 1]), s[n - 1]);
    }
    let k = u.partition_point(|t| *t <= x) - 1;
    let h = u[k + 1] - u[k];
    let t = (x - u[k]) / h;
    let (t2, t3) = (t * t, t * t * t);
    let val = (2.0 * t3 - 3.0 * t2 + 1.0) * v[k]
        + (t3 - 2.0 * t2 + t) * h * s[k]
        + (-2.0 * t3 + 3.0 * t2) * v[k + 1]
        + (t3 - t2) * h * s[k + 1];
    let der = ((6.0 * t2 - 6.0 * t) * v[k]
        + (3.0 * t2 - 4.0 * t + 1.0) * h * s[k]
        + (-6.0 * t2 + 6.0 * t) * v[k + 1]
        + (3.0 * t2 - 2.0 * t) * h * s[k + 1])
        / h;
    (val, der)
}

impl Potential {
    pub fn value(&self, u: f64) -> f64 {
        match self {
            Potential::DoubleWell => {
                let w = 1.0 - u * u;
                0.25 * w * w
            }
            Potential::QuadraticTail { m } => {
                if u.abs() <= 1.0 {
                    let w = u * u - 1.0;
                    m / 8.0 * w * w
                } else {
                    let w = u.abs() - 1.0;
                    0.5 * m * w * w
                }
            }
            Potential::Flat => 0.0,
            Potential::CustomTable { u: tu, v } => hermite(tu, v, u).0,
        }
    }

    pub fn derivative(&self, u: f64) -> f64 {
        match self {
            Potential::DoubleWell => u * u * u - u,
            Potential::QuadraticTail { m } => {
                if u.abs() <= 1.0 {
                    0.5 * m * u * (u * u - 1.0)
                } else {
                    m * (u.abs() - 1.0) * u.signum()
                }
            }
            Potential::Flat => 0.0,
            Potential::CustomTable { u: tu, v } => hermite(tu, v, u).1,
        }
    }

    /// Checks V ≥ 0 on [−range, range] and table well-formedness.
    pub fn validate(&self, range: f64) -> Result<()> {
        match self {
            Potential::QuadraticTail { m } if !(*m > 0.0) => {
                return Err(Error::Domain(format!(
                    "quadratic_tail needs m > 0, got {m}"
                )));
            }
            Potential::CustomTable { u, v } => {
                if u.len() < 2 || u.len() != v.len() {
                    return Err(Error::Domain(
                        "custom_table needs >= 2 matching (u, V) samples".into(),
                    ));
                }
                if u.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Domain("custom_table u samples must increase".into()));
                }
            }
            _ => {}
        }
        let n = 4000;
        for k in 0..=n {
            let x = -range + 2.0 * range * k as f64 / n as f64;
            let val = self.value(x);
            if !(val >= -1e-14) {
                return Err(Error::Domain(format!(
                    "potential is negative at u = {x}: V = {val}"
                )));
            }
        }
        Ok(())
    }

    /// Upper bound on |V″| over [−range, range] by sampling.
    pub fn curvature_bound(&self, range: f64) -> f64 {
        let n = 2000;
        let h = 2.0 * range / n as f64;
        let mut m: f64 = 0.0;
        for k in 0..n {
            let x = -range + h * k as f64;
            m = m.max(((self.derivative(x + h) - self.derivative(x)) / h).abs());
        }
        m
    }
}

/// Diffusivity a(u) = a0 + a2 u² of the nonlinear diffusion model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diffusivity {
    pub a0: f64,
    pub a2: f64,
}

impl Default for Diffusivity {
    fn default() -> Self {
        Self { a0: 1.0, a2: 0.0 }
    }
}

impl Diffusivity {
    pub fn eval(&self, u: f64) -> f64 {
        self.a0 + self.a2 * u * u
    }

    /// min of a over [−range, range].
    pub fn min_on(&self, range: f64) -> f64 {
        self.eval(0.0).min(self.eval(range))
    }

    pub fn max_on(&self, range: f64) -> f64 {
        self.eval(0.0).max(self.eval(range))
    }
}
