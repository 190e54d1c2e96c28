use crate::grids::BallWeights;
use crate::models::ModelState;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Radius of the observation ball used when none is configured.
pub const DEFAULT_OBSERVATION_RADIUS: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    SupOnBall,
    L2OnBall,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyRecord {
    pub horizon: f64,
    pub metric: Metric,
    pub radius: f64,
    pub observation_radius: f64,
    pub occupied_time: f64,
    pub weighted: f64,
}

/// Ψ₁(T) = √T, Ψ₂(T) = log T.
pub fn psi(dim: u32, t: f64) -> f64 {
    match dim {
        1 => t.sqrt(),
        _ => t.ln(),
    }
}

/// Distance between the primary fields of two states over the observation ball.
pub fn state_distance(
    a: &ModelState,
    b: &ModelState,
    metric: Metric,
    observation_radius: f64,
) -> Result<f64> {
    if a.domain() != b.domain() || a.fields.len() != b.fields.len() {
        return Err(Error::Domain("states live on different grids".into()));
    }
    let w = BallWeights::new(a.domain(), observation_radius, [0.0, 0.0])?;
    let mut sup: f64 = 0.0;
    let mut l2 = 0.0;
    for &(k, wt) in &w.entries {
        let d2: f64 = a
            .fields
            .iter()
            .zip(&b.fields)
            .map(|(x, y)| (x.values[k] - y.values[k]).powi(2))
            .sum();
        sup = sup.max(d2.sqrt());
        l2 += wt * d2;
    }
    Ok(match metric {
        Metric::SupOnBall => sup,
        Metric::L2OnBall => l2.sqrt(),
    })
}

/// Time spent with distance < radius, integrated piecewise-linearly between samples.
pub fn occupied_time(times: &[f64], distances: &[f64], radius: f64) -> f64 {
    let mut total = 0.0;
    for k in 1..times.len() {
        let (t0, t1) = (times[k - 1], times[k]);
        let (d0, d1) = (distances[k - 1] - radius, distances[k] - radius);
        let h = t1 - t0;
        total += match (d0 < 0.0, d1 < 0.0) {
            (true, true) => h,
            (false, false) => 0.0,
            (true, false) => h * (-d0) / (d1 - d0),
            (false, true) => h * (-d1) / (d0 - d1),
        };
    }
    total
}

pub fn occupancy(
    times: &[f64],
    distances: &[f64],
    radius: f64,
    metric: Metric,
    observation_radius: f64,
    dim: u32,
) -> Result<OccupancyRecord> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!(
            "neighborhood radius must be positive, got {radius}"
        )));
    }
    if times.len() != distances.len() || times.is_empty() {
        return Err(Error::Domain(
            "occupancy needs matching nonempty samples".into(),
        ));
    }
    let horizon = times[times.len() - 1] - times[0];
    let occ = occupied_time(times, distances, radius);
    let weighted = if horizon > 0.0 {
        psi(dim, horizon) / horizon * occ
    } else {
        0.0
    };
    Ok(OccupancyRecord {
        horizon,
        metric,
        radius,
        observation_radius,
        occupied_time: occ,
        weighted,
    })
}
