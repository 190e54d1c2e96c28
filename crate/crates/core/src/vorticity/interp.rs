//! The two interpolation inequalities behind the sup-norm decay estimate.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative slack when hypotheses are re-measured from samples.
pub const PRECONDITION_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpBound {
    pub bound: f64,
    pub observed_sup: f64,
}

/// M/L + (Lε)^{1/2}.
pub fn mean_gradient_bound(length: f64, eps: f64, m: f64) -> f64 {
    m / length + (length * eps).sqrt()
}

/// max((3Mε)^{1/3}, (3ε/L)^{1/2}).
pub fn l2_lipschitz_bound(length: f64, eps: f64, m: f64) -> f64 {
    (3.0 * m * eps).cbrt().max((3.0 * eps / length).sqrt())
}

fn check_inputs(samples: &[f64], length: f64, eps: f64, m: f64) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    if !(length > 0.0) || !(eps >= 0.0) || !(m >= 0.0) {
        return Err(Error::Domain(format!(
            "need L > 0, eps >= 0, M >= 0; got {length}, {eps}, {m}"
        )));
    }
    Ok(length / (samples.len() - 1) as f64)
}

fn trapezoid(y: &[f64], h: f64) -> f64 {
    let n = y.len();
    h * (y.iter().sum::<f64>() - 0.5 * (y[0] + y[n - 1]))
}

/// Round-off floor proportional to the size of the measured quantity.
fn violated(measured: f64, declared: f64, magnitude: f64) -> bool {
    measured > declared * (1.0 + PRECONDITION_TOL) + 1e-10 * magnitude
}

/// sup|g| ≤ M/L + (Lε)^{1/2} for ∫g′² ≤ ε and |∫g| ≤ M; samples include both endpoints.
pub fn sup_bound_mean_gradient(g: &[f64], length: f64, eps: f64, m: f64) -> Result<InterpBound> {
    let h = check_inputs(g, length, eps, m)?;
    let mean = trapezoid(g, h).abs();
    let slope: Vec<f64> = g.windows(2).map(|w| ((w[1] - w[0]) / h).powi(2)).collect();
    let grad = slope.iter().sum::<f64>() * h;
    let abs_g: Vec<f64> = g.iter().map(|v| v.abs()).collect();
    if violated(mean, m, trapezoid(&abs_g, h)) {
        return Err(Error::Precondition(format!(
            "|integral of g| = {mean:.6e} exceeds M = {m:.6e}"
        )));
    }
    if violated(grad, eps, grad) {
        return Err(Error::Precondition(format!(
            "integral of g'^2 = {grad:.6e} exceeds eps = {eps:.6e}"
        )));
    }
    Ok(InterpBound {
        bound: mean_gradient_bound(length, eps, m),
        observed_sup: g.iter().fold(0.0, |a, v| a.max(v.abs())),
    })
}

/// sup|h| ≤ max((3Mε)^{1/3}, (3ε/L)^{1/2}) for ∫h² ≤ ε and sup|h′| ≤ M.
pub fn sup_bound_l2_lipschitz(hv: &[f64], length: f64, eps: f64, m: f64) -> Result<InterpBound> {
    let h = check_inputs(hv, length, eps, m)?;
    let sq: Vec<f64> = hv.iter().map(|v| v * v).collect();
    let l2 = trapezoid(&sq, h);
    let lip = hv
        .windows(2)
        .map(|w| ((w[1] - w[0]) / h).abs())
        .fold(0.0, f64::max);
    if violated(l2, eps, l2) {
        return Err(Error::Precondition(format!(
            "integral of h^2 = {l2:.6e} exceeds eps = {eps:.6e}"
        )));
    }
    if violated(lip, m, lip) {
        return Err(Error::Precondition(format!(
            "sup |h'| = {lip:.6e} exceeds M = {m:.6e}"
        )));
    }
    Ok(InterpBound {
        bound: l2_lipschitz_bound(length, eps, m),
        observed_sup: hv.iter().fold(0.0, |a, v| a.max(v.abs())),
    })
}

/// a₀ + Σₖ (aₖ cos + bₖ sin)(2πkx/L) on [0, L].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    pub length: f64,
    pub a0: f64,
    /// (aₖ, bₖ) for k = 1, 2, ...
    pub coeffs: Vec<(f64, f64)>,
}

impl TrigPoly {
    /// Degree in 1..=max_degree, L log-uniform in [0.1, 100], coefficients with random scale.
    pub fn random<R: rand::Rng>(rng: &mut R, max_degree: usize) -> Self {
        use rand_distr::{Distribution, StandardNormal};
        let degree = rng.gen_range(1..=max_degree.max(1));
        let length = 10f64.powf(rng.gen_range(-1.0..2.0));
        let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
        let mut n = || -> f64 { StandardNormal.sample(rng) };
        let a0 = if n() > 0.0 { scale * n() } else { 0.0 };
        let coeffs = (0..degree).map(|_| (scale * n(), scale * n())).collect();
        Self { length, a0, coeffs }
    }

    fn freq(&self, k: usize) -> f64 {
        std::f64::consts::TAU * (k + 1) as f64 / self.length
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.a0
            + self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, (a, b))| {
                    let w = self.freq(k) * x;
                    a * w.cos() + b * w.sin()
                })
                .sum::<f64>()
    }

    /// n equispaced samples including both endpoints.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| self.eval(self.length * i as f64 / (n - 1) as f64))
            .collect()
    }

    /// (∫g′², |∫g|) from the coefficients.
    pub fn mean_gradient_data(&self) -> (f64, f64) {
        let eps = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| self.freq(k).powi(2) * (a * a + b * b))
            .sum::<f64>()
            * self.length
            / 2.0;
        (eps, self.a0.abs() * self.length)
    }

    /// (∫h², Σₖ ωₖ(aₖ² + bₖ²)^{1/2} ≥ sup|h′|) from the coefficients.
    pub fn l2_lipschitz_data(&self) -> (f64, f64) {
        let eps = self.a0 * self.a0 * self.length
            + self.coeffs.iter().map(|(a, b)| a * a + b * b).sum::<f64>() * self.length / 2.0;
        let m = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| self.freq(k) * (a * a + b * b).sqrt())
            .sum();
        (eps, m)
    }
}
