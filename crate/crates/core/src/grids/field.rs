use super::domain::Domain;
use super::stencil::gradient;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    pub domain: Domain,
    /// Row-major: index `i * ny + j` for axis-0 index i and axis-1 index j.
    pub values: Vec<f64>,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorField {
    pub domain: Domain,
    pub components: Vec<Vec<f64>>,
    pub time: f64,
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if let Some(k) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Domain(format!(
            "{what} has non-finite value at index {k}"
        )));
    }
    Ok(())
}

impl ScalarField {
    pub fn new(domain: Domain, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::Domain(format!(
                "field has {} values but the grid has {}",
                values.len(),
                domain.len()
            )));
        }
        check_finite(&values, "scalar field")?;
        Ok(Self {
            domain,
            values,
            time,
        })
    }

    pub fn zeros(domain: &Domain) -> Self {
        Self {
            domain: domain.clone(),
            values: vec![0.0; domain.len()],
            time: 0.0,
        }
    }

    pub fn from_fn<F: Fn(f64, f64) -> f64>(domain: &Domain, f: F) -> Self {
        let values = (0..domain.len())
            .map(|k| {
                let p = domain.point(k);
                f(p[0], p[1])
            })
            .collect();
        Self {
            domain: domain.clone(),
            values,
            time: 0.0,
        }
    }

    pub fn with_values(&self, values: Vec<f64>) -> Self {
        Self {
            domain: self.domain.clone(),
            values,
            time: self.time,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Sum over cells times cell volume.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.domain.cell_volume()
    }
}

impl VectorField {
    pub fn new(domain: Domain, components: Vec<Vec<f64>>, time: f64) -> Result<Self> {
        if components.len() != domain.dim() {
            return Err(Error::Domain(format!(
                "vector field has {} components on a {}-axis grid",
                components.len(),
                domain.dim()
            )));
        }
        for c in &components {
            if c.len() != domain.len() {
                return Err(Error::Domain("component length does not match grid".into()));
            }
            check_finite(c, "vector field")?;
        }
        Ok(Self {
            domain,
            components,
            time,
        })
    }

    pub fn zeros(domain: &Domain) -> Self {
        Self {
            domain: domain.clone(),
            components: vec![vec![0.0; domain.len()]; domain.dim()],
            time: 0.0,
        }
    }

    pub fn norm_sq_at(&self, k: usize) -> f64 {
        self.components.iter().map(|c| c[k] * c[k]).sum()
    }

    pub fn max_norm(&self) -> f64 {
        (0..self.domain.len())
            .map(|k| self.norm_sq_at(k))
            .fold(0.0, f64::max)
            .sqrt()
    }
}

/// The A2 budget b(e) of an energy triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Budget {
    /// b(e) = factor · e
    Linear { factor: f64 },
    /// b(e) = 2e · max{a(u) : u² ≤ 2e} from samples (u_k, a(u_k)) on a
    /// symmetric uniform grid; the maximum includes the interval endpoints.
    SampledSup { u: Vec<f64>, a: Vec<f64> },
}

impl Budget {
    pub fn eval(&self, e: f64) -> f64 {
        match self {
            Budget::Linear { factor } => factor * e,
            Budget::SampledSup { u, a } => {
                let bound = (2.0 * e).sqrt();
                let mut sup = interp(u, a, bound).max(interp(u, a, -bound));
                for (ui, ai) in u.iter().zip(a) {
                    if ui.abs() <= bound {
                        sup = sup.max(*ai);
                    }
                }
                2.0 * e * sup
            }
        }
    }
}

fn interp(x: &[f64], y: &[f64], t: f64) -> f64 {
    if t <= x[0] {
        return y[0];
    }
    if t >= x[x.len() - 1] {
        return y[y.len() - 1];
    }
    let k = x.partition_point(|v| *v <= t) - 1;
    let s = (t - x[k]) / (x[k + 1] - x[k]);
    y[k] * (1.0 - s) + y[k + 1] * s
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyTriple {
    pub e: ScalarField,
    pub f: VectorField,
    pub d: ScalarField,
    pub budget: Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A2Report {
    /// max over cells of |f|² − b(e)d − slack_tol.
    pub worst_excess: f64,
    pub worst_cell: usize,
    pub min_e: f64,
    pub min_d: f64,
}

impl A2Report {
    pub fn holds(&self) -> bool {
        self.worst_excess <= 0.0 && self.min_e >= 0.0 && self.min_d >= 0.0
    }
}

impl EnergyTriple {
    /// Pointwise check of |f|² ≤ b(e)d + κ(dx² + dt)(1 + |∇e|).
    pub fn check_a2(&self, kappa: f64, dt: f64) -> A2Report {
        let dx = self.e.domain.max_spacing();
        let grad_e = gradient(&self.e);
        let mut worst = f64::NEG_INFINITY;
        let mut cell = 0;
        for k in 0..self.e.values.len() {
            let slack = kappa * (dx * dx + dt) * (1.0 + grad_e.norm_sq_at(k).sqrt());
            let excess = self.f.norm_sq_at(k)
                - self.budget.eval(self.e.values[k]) * self.d.values[k]
                - slack;
            if excess > worst {
                worst = excess;
                cell = k;
            }
        }
        A2Report {
            worst_excess: worst,
            worst_cell: cell,
            min_e: self.e.min(),
            min_d: self.d.min(),
        }
    }

    pub fn sup_budget(&self) -> f64 {
        self.budget.eval(self.e.max())
    }
}
