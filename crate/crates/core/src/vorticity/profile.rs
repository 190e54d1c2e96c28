use super::solver::{
    biot_savart, oscillating_part, spectral_gradient, spectral_mixed, CylinderState,
};
use crate::diagnostics::{BoundContext, BoundKind, BoundReport};
use crate::grids::BallWeights;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Vertical integrals of the enstrophy triple along x₁.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnstrophyProfile {
    pub t: f64,
    pub x1: Vec<f64>,
    pub e: Vec<f64>,
    pub f: Vec<f64>,
    pub d: Vec<f64>,
    pub e0: f64,
    pub beta: f64,
}

/// e₀ = ½‖ω₀‖∞², β = C₃e₀(1 + e₀).
pub fn e0_beta(initial_sup: f64, c3: f64) -> (f64, f64) {
    let e0 = 0.5 * initial_sup * initial_sup;
    (e0, c3 * e0 * (1.0 + e0))
}

/// e = ½∫ω², f = ∫ω∂₁ω − ½∫u₁ω², d = ∫|∇ω|² over x₂ ∈ 𝕋.
pub fn enstrophy_profile(
    state: &CylinderState,
    initial_sup: f64,
    c3: f64,
) -> Result<EnstrophyProfile> {
    let (nx, ny) = state.domain().shape();
    let w = &state.omega.values;
    let g = spectral_gradient(&state.omega);
    let u1 = biot_savart(&oscillating_part(&state.omega))?
        .u_hat
        .components
        .swap_remove(0);
    let mut e = vec![0.0; nx];
    let mut f = vec![0.0; nx];
    let mut d = vec![0.0; nx];
    for i in 0..nx {
        for j in 0..ny {
            let k = i * ny + j;
            e[i] += 0.5 * w[k] * w[k];
            f[i] += w[k] * g.components[0][k] - 0.5 * u1[k] * w[k] * w[k];
            d[i] += g.components[0][k].powi(2) + g.components[1][k].powi(2);
        }
        e[i] /= ny as f64;
        f[i] /= ny as f64;
        d[i] /= ny as f64;
    }
    let (e0, beta) = e0_beta(initial_sup, c3);
    Ok(EnstrophyProfile {
        t: state.time,
        x1: state.domain().axes[0].coords(),
        e,
        f,
        d,
        e0,
        beta,
    })
}

/// Largest f² − C₃(1 + sup e)·e·d over x₁.
pub fn flux_budget_excess(p: &EnstrophyProfile, c3: f64) -> f64 {
    let sup_e = p.e.iter().copied().fold(0.0, f64::max);
    (0..p.e.len())
        .map(|i| p.f[i].powi(2) - c3 * (1.0 + sup_e) * p.e[i] * p.d[i])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// ∫_{x_a}^{x_b} p dx₁ over cell-centered samples, partial cells prorated.
fn segment(x1: &[f64], p: &[f64], xa: f64, xb: f64) -> f64 {
    let h = if x1.len() > 1 { x1[1] - x1[0] } else { 0.0 };
    x1.iter()
        .zip(p)
        .map(|(x, v)| ((x + 0.5 * h).min(xb) - (x - 0.5 * h).max(xa)).max(0.0) * v)
        .sum()
}

fn interpolate(x1: &[f64], p: &[f64], x: f64) -> f64 {
    let h = x1[1] - x1[0];
    let s = ((x - x1[0]) / h).clamp(0.0, (x1.len() - 1) as f64);
    let i = (s.floor() as usize).min(x1.len() - 2);
    let w = s - i as f64;
    (1.0 - w) * p[i] + w * p[i + 1]
}

/// [∫e]₀^T − ∫₀^T (f(x_b) − f(x_a)) dt + ∫₀^T∫ d over [x_a, x_b].
pub fn enstrophy_balance_residual(profiles: &[EnstrophyProfile], xa: f64, xb: f64) -> f64 {
    let (Some(first), Some(last)) = (profiles.first(), profiles.last()) else {
        return 0.0;
    };
    let x = &first.x1;
    let mut res = segment(x, &last.e, xa, xb) - segment(x, &first.e, xa, xb);
    for w in profiles.windows(2) {
        let h = w[1].t - w[0].t;
        let rate = |p: &EnstrophyProfile| {
            interpolate(x, &p.f, xb) - interpolate(x, &p.f, xa) - segment(x, &p.d, xa, xb)
        };
        res -= 0.5 * h * (rate(&w[0]) + rate(&w[1]));
    }
    res
}

/// Quantities of a recorded state that feed the velocity-bound and decay checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VorticitySample {
    pub t: f64,
    pub omega_sup: f64,
    pub u_hat_sup: f64,
    pub v_sup: f64,
    /// sup over x₁ of (∫ω̂² dx₂)^{1/2}
    pub omega_hat_l2_sup: f64,
    pub m_sup: f64,
    /// sup over x₁ of ∫|∂₁₂ω|² dx₂
    pub mixed_sq_sup: f64,
    /// sup over x₂ of |ω| per column
    pub column_sup: Vec<f64>,
}

pub fn sample(state: &CylinderState) -> Result<VorticitySample> {
    let (nx, ny) = state.domain().shape();
    let wh = oscillating_part(&state.omega);
    let bs = biot_savart(&wh)?;
    let mixed = spectral_mixed(&state.omega);
    let col = |v: &[f64], f: &dyn Fn(f64) -> f64| -> Vec<f64> {
        v.chunks(ny)
            .map(|c| c.iter().map(|x| f(*x)).sum::<f64>() / ny as f64)
            .collect()
    };
    let u = &bs.u_hat.components;
    let u_hat_sup = (0..nx * ny)
        .map(|k| (u[0][k].powi(2) + u[1][k].powi(2)).sqrt())
        .fold(0.0, f64::max);
    Ok(VorticitySample {
        t: state.time,
        omega_sup: state.omega.max_abs(),
        u_hat_sup,
        v_sup: bs.v.max_abs(),
        omega_hat_l2_sup: col(&wh.values, &|x| x * x)
            .into_iter()
            .fold(0.0, f64::max)
            .sqrt(),
        m_sup: state.m.max_abs(),
        mixed_sq_sup: col(&mixed.values, &|x| x * x)
            .into_iter()
            .fold(0.0, f64::max),
        column_sup: state
            .omega
            .values
            .chunks(ny)
            .map(|c| c.iter().fold(0.0f64, |m, x| m.max(x.abs())))
            .collect(),
    })
}

/// Running ∫₀^T∫_{−R}^{R} d on a radius ladder, plus per-time window integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissipationHistory {
    pub radii: Vec<f64>,
    pub times: Vec<f64>,
    /// D(R, T) indexed [time][radius]
    pub integrated: Vec<Vec<f64>>,
    /// Λ_R(d) at each record, indexed [time][radius]
    pub rate: Vec<Vec<f64>>,
    /// d(x₁) at each record
    pub profiles: Vec<Vec<f64>>,
    pub x1: Vec<f64>,
}

impl DissipationHistory {
    pub fn new(radii: &[f64]) -> Self {
        Self {
            radii: radii.to_vec(),
            times: Vec::new(),
            integrated: Vec::new(),
            rate: Vec::new(),
            profiles: Vec::new(),
            x1: Vec::new(),
        }
    }

    pub fn push(&mut self, state: &CylinderState, profile: &EnstrophyProfile) -> Result<()> {
        let line = state.domain().first_axis_line();
        let rate = self
            .radii
            .iter()
            .map(|&r| Ok(BallWeights::new(&line, r, [0.0, 0.0])?.integrate(&profile.d)))
            .collect::<Result<Vec<f64>>>()?;
        let acc = match (self.times.last(), self.integrated.last(), self.rate.last()) {
            (Some(&t0), Some(prev), Some(r0)) => {
                let h = profile.t - t0;
                prev.iter()
                    .zip(r0)
                    .zip(&rate)
                    .map(|((p, a), b)| p + 0.5 * h * (a + b))
                    .collect()
            }
            _ => vec![0.0; self.radii.len()],
        };
        if self.x1.is_empty() {
            self.x1 = profile.x1.clone();
        }
        self.times.push(profile.t);
        self.integrated.push(acc);
        self.rate.push(rate);
        self.profiles.push(profile.d.clone());
        Ok(())
    }

    /// ∫_{|x₁| ≤ w} d(x₁, t) dx₁ at every record.
    pub fn window_integral(&self, state_line: &crate::grids::Domain, w: f64) -> Result<Vec<f64>> {
        let b = BallWeights::new(state_line, w, [0.0, 0.0])?;
        Ok(self.profiles.iter().map(|p| b.integrate(p)).collect())
    }
}

/// ∫₀^T∫_{−R}^{R}∫|∇ω|² ≤ 2√(βTe₀) + 2Re₀ at every sample.
pub fn omconv1_reports(
    h: &DissipationHistory,
    e0: f64,
    beta: f64,
    report_tol: f64,
) -> Vec<BoundReport> {
    let t0 = h.times.first().copied().unwrap_or(0.0);
    let mut out = Vec::new();
    for (it, t) in h.times.iter().enumerate() {
        let t = t - t0;
        if t <= 0.0 {
            continue;
        }
        for (ir, &r) in h.radii.iter().enumerate() {
            let rhs = 2.0 * (beta * t * e0).sqrt() + 2.0 * r * e0;
            let ctx = BoundContext {
                n: 1,
                r,
                t,
                slack: 1.0,
                asymptotic: false,
            };
            out.push(BoundReport::new(
                BoundKind::Omconv1,
                h.integrated[it][ir],
                rhs,
                report_tol,
                ctx,
            ));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanFlowCheck {
    pub t: f64,
    pub m_sup: f64,
    pub bound: f64,
    pub passed: bool,
}

/// ‖m(t)‖∞ ≤ ‖m₀‖∞ + (2√t/√π)·C₁²M² along a trajectory.
pub fn mean_flow_bound_check(
    times: &[f64],
    m_sup: &[f64],
    m0_sup: f64,
    c1: f64,
    omega0_sup: f64,
) -> Vec<MeanFlowCheck> {
    let t0 = times.first().copied().unwrap_or(0.0);
    times
        .iter()
        .zip(m_sup)
        .map(|(&t, &m)| {
            let s = t - t0;
            let bound = m0_sup
                + 2.0 * s.sqrt() / std::f64::consts::PI.sqrt() * c1 * c1 * omega0_sup * omega0_sup;
            MeanFlowCheck {
                t: s,
                m_sup: m,
                bound,
                passed: m <= bound * (1.0 + 1e-12) + 1e-14,
            }
        })
        .collect()
}
