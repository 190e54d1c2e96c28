use crate::diagnostics::occupied_time;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Per-time x₁ profiles of a vorticity run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayHistory {
    pub times: Vec<f64>,
    /// cell centers along x₁, uniformly spaced
    pub x1: Vec<f64>,
    /// ∫|∇ω|² dx₂ per column
    pub dissipation: Vec<Vec<f64>>,
    /// sup over x₂ of |ω| per column
    pub column_sup: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub horizon: f64,
    pub alpha: f64,
    pub beta_exp: f64,
    pub m1: f64,
    pub m2: f64,
    pub j_measure: f64,
    /// C₄ = 2√(βe₀) + 2e₀
    pub c4: f64,
    pub j_bound: f64,
    pub excursion_measure: f64,
    pub k0: f64,
}

/// ∫_{−w}^{w} p dx₁ with fractional end cells.
fn window(x1: &[f64], p: &[f64], w: f64) -> f64 {
    let h = if x1.len() > 1 { x1[1] - x1[0] } else { 0.0 };
    x1.iter()
        .zip(p)
        .map(|(x, v)| {
            let lo = (x - 0.5 * h).max(-w);
            let hi = (x + 0.5 * h).min(w);
            (hi - lo).max(0.0) * v
        })
        .sum()
}

fn window_sup(x1: &[f64], p: &[f64], w: f64) -> f64 {
    let h = if x1.len() > 1 { x1[1] - x1[0] } else { 0.0 };
    x1.iter()
        .zip(p)
        .filter(|(x, _)| x.abs() <= w + 0.5 * h)
        .map(|(_, v)| *v)
        .fold(0.0, f64::max)
}

/// Lebesgue measure of {t ≤ T : g(t) > level}, linear between samples.
fn superlevel_measure(times: &[f64], g: &[f64], level: f64) -> f64 {
    let neg: Vec<f64> = g.iter().map(|v| -v).collect();
    occupied_time(times, &neg, -level)
}

/// J_α(T) and the excursion set of the sup-vorticity decay estimate.
#[allow(clippy::too_many_arguments)]
pub fn decay_measure(
    history: &DecayHistory,
    alpha: f64,
    beta_exp: f64,
    m1: f64,
    m2: f64,
    horizon: f64,
    e0: f64,
    beta: f64,
) -> Result<DecayReport> {
    if !(0.0..=0.5).contains(&alpha) || !(0.0..=0.5).contains(&beta_exp) || beta_exp > alpha {
        return Err(Error::Domain(format!(
            "exponents need 0 <= beta_exp <= alpha <= 1/2, got alpha = {alpha}, beta_exp = {beta_exp}"
        )));
    }
    if !(m1 > 0.0) || !(m2 > 0.0) || !(horizon > 0.0) {
        return Err(Error::Domain("M1, M2 and T must be positive".into()));
    }
    let t0 = history.times.first().copied().unwrap_or(0.0);
    let n = history
        .times
        .iter()
        .take_while(|t| **t - t0 <= horizon * (1.0 + 1e-12))
        .count();
    if n < 2 || history.times[n - 1] - t0 < horizon * (1.0 - 1e-9) {
        return Err(Error::Domain(format!(
            "history does not cover [0, {horizon}]"
        )));
    }
    let times: Vec<f64> = history.times[..n].iter().map(|t| t - t0).collect();
    let rt = horizon.sqrt();
    let g: Vec<f64> = history.dissipation[..n]
        .iter()
        .map(|p| window(&history.x1, p, rt))
        .collect();
    let j_measure = superlevel_measure(&times, &g, horizon.powf(-alpha));
    let c4 = 2.0 * (beta * e0).sqrt() + 2.0 * e0;
    let j_bound = c4 * horizon.powf(alpha + 0.5);

    let l = horizon.powf((alpha + 2.0 * beta_exp) / 3.0);
    let s: Vec<f64> = history.column_sup[..n]
        .iter()
        .map(|p| window_sup(&history.x1, p, l))
        .collect();
    let scale = horizon.powf(-(alpha - beta_exp) / 3.0);
    let cap = horizon.powf(alpha + 0.5);
    let excess = |k: f64| superlevel_measure(&times, &s, k * scale) - k * cap;
    // smallest K₀ with meas{S > K₀T^{−(α−β)/3}} ≤ K₀T^{α+½}
    let (mut lo, mut hi) = (0.0, 1.0);
    while excess(hi) > 0.0 {
        hi *= 2.0;
    }
    if excess(0.0) <= 0.0 {
        hi = 0.0;
    }
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k0 = hi;
    Ok(DecayReport {
        horizon,
        alpha,
        beta_exp,
        m1,
        m2,
        j_measure,
        c4,
        j_bound,
        excursion_measure: superlevel_measure(&times, &s, k0 * scale),
        k0,
    })
}

/// sup over t ≥ burn_in of sup_{x₁}∫|∂₁₂ω|² dx₂, square-rooted.
pub fn measured_m1(times: &[f64], mixed_sq_sup: &[f64], burn_in: f64) -> Option<f64> {
    let t0 = times.first().copied()?;
    times
        .iter()
        .zip(mixed_sq_sup)
        .filter(|(t, _)| **t - t0 >= burn_in)
        .map(|(_, v)| v.sqrt())
        .reduce(f64::max)
}

/// Smallest β ∈ [0, ½] with ‖m(t)‖∞ ≤ M₂(1 + t)^β at every sample, if any.
pub fn certified_mean_flow_exponent(times: &[f64], m_sup: &[f64], m2: f64) -> Option<f64> {
    let t0 = times.first().copied()?;
    let mut beta: f64 = 0.0;
    for (t, m) in times.iter().zip(m_sup) {
        let s = t - t0;
        if *m <= m2 {
            continue;
        }
        if s <= 0.0 {
            return None;
        }
        beta = beta.max((m / m2).ln() / (1.0 + s).ln());
    }
    (beta <= 0.5).then_some(beta)
}
