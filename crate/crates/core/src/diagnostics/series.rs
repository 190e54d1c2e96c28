use crate::grids::{BallWeights, Domain, EnergyTriple, SphereSampler};
use crate::quad::cumulative_trapezoid;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default pad of the contamination rule R + √T ≤ L/2 − pad.
pub const DEFAULT_PAD: f64 = 10.0;

/// Largest radius not polluted by the truncation boundary up to time T.
pub fn admissible_radius(domain: &Domain, horizon: f64, pad: f64) -> f64 {
    domain.inner_radius() - horizon.max(0.0).sqrt() - pad
}

pub fn check_ladder(domain: &Domain, radii: &[f64], horizon: f64, pad: f64) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::Domain("radii ladder is empty".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) || !(radii[0] > 0.0) {
        return Err(Error::Domain(
            "radii ladder must be positive and increasing".into(),
        ));
    }
    let rmax = admissible_radius(domain, horizon, pad);
    let last = radii[radii.len() - 1];
    if last > rmax {
        return Err(Error::Geometry(format!(
            "radius {last} violates the contamination margin: R + sqrt(T) must stay below L/2 - pad = {} (admissible R <= {rmax})",
            domain.inner_radius() - pad
        )));
    }
    Ok(())
}

/// Per-time ball integrals of e and d and sphere fluxes of f on a radius ladder.
#[derive(Debug, Clone)]
pub struct FluxRecorder {
    pub radii: Vec<f64>,
    balls: Vec<BallWeights>,
    spheres: Vec<SphereSampler>,
    pub times: Vec<f64>,
    /// E(R, t) per record, per radius
    pub energy: Vec<Vec<f64>>,
    /// ∮ f·ν at each record
    pub flux_rate: Vec<Vec<f64>>,
    /// Λ_R(d) at each record
    pub dissipation_rate: Vec<Vec<f64>>,
    pub sup_e: Vec<f64>,
    pub sup_b: Vec<f64>,
    pointwise: Option<PointwiseFlux>,
}

/// Running time integral F₁(x, t) of the first flux component at every cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PointwiseFlux {
    last: Vec<f64>,
    integral: Vec<f64>,
    max_abs: Vec<f64>,
}

impl FluxRecorder {
    pub fn new(domain: &Domain, radii: &[f64], pointwise: bool) -> Result<Self> {
        let balls = radii
            .iter()
            .map(|&r| BallWeights::new(domain, r, [0.0, 0.0]))
            .collect::<Result<Vec<_>>>()?;
        let spheres = radii
            .iter()
            .map(|&r| SphereSampler::new(domain, r, [0.0, 0.0], None))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            radii: radii.to_vec(),
            balls,
            spheres,
            times: Vec::new(),
            energy: Vec::new(),
            flux_rate: Vec::new(),
            dissipation_rate: Vec::new(),
            sup_e: Vec::new(),
            sup_b: Vec::new(),
            pointwise: pointwise.then(|| PointwiseFlux {
                last: Vec::new(),
                integral: Vec::new(),
                max_abs: Vec::new(),
            }),
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    /// Recorded data without the geometry, for checkpoints.
    pub fn state(&self) -> RecorderState {
        RecorderState {
            radii: self.radii.clone(),
            times: self.times.clone(),
            energy: self.energy.clone(),
            flux_rate: self.flux_rate.clone(),
            dissipation_rate: self.dissipation_rate.clone(),
            sup_e: self.sup_e.clone(),
            sup_b: self.sup_b.clone(),
            pointwise: self.pointwise.clone(),
        }
    }

    pub fn restore(domain: &Domain, state: RecorderState) -> Result<Self> {
        let mut r = Self::new(domain, &state.radii, state.pointwise.is_some())?;
        r.times = state.times;
        r.energy = state.energy;
        r.flux_rate = state.flux_rate;
        r.dissipation_rate = state.dissipation_rate;
        r.sup_e = state.sup_e;
        r.sup_b = state.sup_b;
        r.pointwise = state.pointwise;
        Ok(r)
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn record(&mut self, t: f64, triple: &EnergyTriple) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if !(t > last) {
                return Err(Error::Domain(format!(
                    "record times must increase: {t} after {last}"
                )));
            }
        }
        self.energy.push(
            self.balls
                .iter()
                .map(|b| b.integrate(&triple.e.values))
                .collect(),
        );
        self.dissipation_rate.push(
            self.balls
                .iter()
                .map(|b| b.integrate(&triple.d.values))
                .collect(),
        );
        self.flux_rate.push(
            self.spheres
                .iter()
                .map(|s| s.flux(&triple.f.components))
                .collect(),
        );
        let se = triple.e.max();
        self.sup_e.push(se);
        self.sup_b.push(triple.budget.eval(se));
        if let Some(p) = &mut self.pointwise {
            let f = &triple.f.components[0];
            if let Some(&t0) = self.times.last() {
                let h = t - t0;
                for k in 0..f.len() {
                    p.integral[k] += 0.5 * h * (p.last[k] + f[k]);
                }
            } else {
                p.integral = vec![0.0; f.len()];
            }
            p.last = f.clone();
            p.max_abs
                .push(p.integral.iter().fold(0.0, |m, v| m.max(v.abs())));
        }
        self.times.push(t);
        Ok(())
    }

    pub fn series(&self, dim: u32) -> Result<FluxSeries> {
        if self.times.is_empty() {
            return Err(Error::Domain("no records".into()));
        }
        let nt = self.times.len();
        let nr = self.radii.len();
        let column =
            |m: &Vec<Vec<f64>>, r: usize| -> Vec<f64> { (0..nt).map(|i| m[i][r]).collect() };
        let mut flux = vec![vec![0.0; nr]; nt];
        let mut diss = vec![vec![0.0; nr]; nt];
        for r in 0..nr {
            let fi = cumulative_trapezoid(&self.times, &column(&self.flux_rate, r));
            let di = cumulative_trapezoid(&self.times, &column(&self.dissipation_rate, r));
            for i in 0..nt {
                flux[i][r] = fi[i];
                diss[i][r] = di[i];
            }
        }
        Ok(FluxSeries {
            dim,
            radii: self.radii.clone(),
            times: self.times.iter().map(|t| t - self.times[0]).collect(),
            flux,
            dissipation: diss,
            energy: self.energy.clone(),
            e0: self.sup_e[0],
            beta: self.sup_b.iter().copied().fold(0.0, f64::max),
            pointwise_max: self.pointwise.as_ref().map(|p| p.max_abs.clone()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecorderState {
    radii: Vec<f64>,
    times: Vec<f64>,
    energy: Vec<Vec<f64>>,
    flux_rate: Vec<Vec<f64>>,
    dissipation_rate: Vec<Vec<f64>>,
    sup_e: Vec<f64>,
    sup_b: Vec<f64>,
    pointwise: Option<PointwiseFlux>,
}

/// Time-integrated flux and dissipation on a radius ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxSeries {
    pub dim: u32,
    pub radii: Vec<f64>,
    /// elapsed time since the first record
    pub times: Vec<f64>,
    /// F(R, T) indexed [time][radius]
    pub flux: Vec<Vec<f64>>,
    /// D(R, T) indexed [time][radius]
    pub dissipation: Vec<Vec<f64>>,
    /// E(R, T) indexed [time][radius]
    pub energy: Vec<Vec<f64>>,
    pub e0: f64,
    pub beta: f64,
    /// max_x |F₁(x, T)| per time, when recorded
    pub pointwise_max: Option<Vec<f64>>,
}

impl FluxSeries {
    pub fn initial_energy(&self) -> &[f64] {
        &self.energy[0]
    }

    /// Every `stride`-th record, starting with the first; e₀ and β are kept.
    pub fn subsample(&self, stride: usize) -> FluxSeries {
        let stride = stride.max(1);
        fn pick<T: Clone>(v: &[T], stride: usize) -> Vec<T> {
            v.iter().step_by(stride).cloned().collect()
        }
        FluxSeries {
            dim: self.dim,
            radii: self.radii.clone(),
            times: pick(&self.times, stride),
            flux: pick(&self.flux, stride),
            dissipation: pick(&self.dissipation, stride),
            energy: pick(&self.energy, stride),
            e0: self.e0,
            beta: self.beta,
            pointwise_max: self.pointwise_max.as_ref().map(|p| pick(p, stride)),
        }
    }

    /// E(R,T) − E(R,0) − F(R,T) + D(R,T)
    pub fn balance_residual(&self, it: usize, ir: usize) -> f64 {
        self.energy[it][ir] - self.energy[0][ir] - self.flux[it][ir] + self.dissipation[it][ir]
    }

    /// Largest |residual| / ((R^N + R^{N−1})·T) over all samples with T > 0.
    pub fn worst_scaled_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for it in 1..self.times.len() {
            for (ir, &r) in self.radii.iter().enumerate() {
                let scale =
                    (r.powi(self.dim as i32) + r.powi(self.dim as i32 - 1)) * self.times[it];
                worst = worst.max(self.balance_residual(it, ir).abs() / scale);
            }
        }
        worst
    }
}

/// Trapezoid accumulation of sphere fluxes: F(R, T) at the last sample.
pub fn integrated_flux(times: &[f64], sphere_fluxes: &[f64]) -> f64 {
    *cumulative_trapezoid(times, sphere_fluxes)
        .last()
        .unwrap_or(&0.0)
}

/// Trapezoid accumulation of Λ_R(d): D(R, T) at the last sample.
pub fn dissipation_integral(times: &[f64], ball_dissipations: &[f64]) -> f64 {
    *cumulative_trapezoid(times, ball_dissipations)
        .last()
        .unwrap_or(&0.0)
}
