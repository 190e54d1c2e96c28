use crate::grids::{BallWeights, ScalarField};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Energy differences within ±tol of zero count as equality.
pub const DEFAULT_TOL_E: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JTRecord {
    pub t: f64,
    pub radii: Vec<f64>,
    pub delta_e: Vec<f64>,
    pub in_jt: Vec<bool>,
    pub sparsity_integral: f64,
}

/// Trapezoid integral of 1_{J_T}(r)/r^{N−1} over the ladder portion in [1, R_max].
pub fn sparsity_integral(radii: &[f64], in_jt: &[bool], dim: u32, r_max: f64) -> f64 {
    let g = |k: usize| {
        if in_jt[k] {
            radii[k].powi(1 - dim as i32)
        } else {
            0.0
        }
    };
    let mut total = 0.0;
    for k in 1..radii.len() {
        let (a, b) = (radii[k - 1], radii[k]);
        if a < 1.0 || b > r_max {
            continue;
        }
        total += 0.5 * (b - a) * (g(k - 1) + g(k));
    }
    total
}

/// Marks radii with E(R,T) ≥ E(R,0) − tol_e.
pub fn jt_sparsity(
    e_initial: &ScalarField,
    e_final: &ScalarField,
    radii: &[f64],
    tol_e: f64,
) -> Result<JTRecord> {
    if e_initial.domain != e_final.domain {
        return Err(Error::Domain(
            "energy densities live on different grids".into(),
        ));
    }
    let mut delta_e = Vec::with_capacity(radii.len());
    for &r in radii {
        let w = BallWeights::new(&e_initial.domain, r, [0.0, 0.0])?;
        delta_e.push(w.integrate(&e_final.values) - w.integrate(&e_initial.values));
    }
    let in_jt: Vec<bool> = delta_e.iter().map(|d| *d >= -tol_e).collect();
    let dim = e_initial.domain.radial_dim();
    let r_max = radii.last().copied().unwrap_or(0.0);
    let sparsity_integral = sparsity_integral(radii, &in_jt, dim, r_max);
    Ok(JTRecord {
        t: e_final.time - e_initial.time,
        radii: radii.to_vec(),
        delta_e,
        in_jt,
        sparsity_integral,
    })
}
