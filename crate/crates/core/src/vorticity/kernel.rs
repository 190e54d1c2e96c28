use crate::quad::gauss_legendre_on;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

/// Radius of the polar patch around the log singularity.
pub const POLAR_RADIUS: f64 = 0.1;

/// Relative change allowed when the quadrature order doubles.
pub const CONVERGENCE_TOL: f64 = 1e-3;

/// K(x₁, x₂) = (1/4π) log(2cosh 2πx₁ − 2cos 2πx₂) − |x₁|/2.
pub fn kernel(x1: f64, x2: f64) -> f64 {
    let a = TAU * x1.abs();
    let b = TAU * x2;
    if a < 1.0 {
        // 2cosh a − 2cos b = 4(sinh²(a/2) + sin²(b/2))
        return (4.0 * ((0.5 * a).sinh().powi(2) + (0.5 * b).sin().powi(2))).ln() / (4.0 * PI)
            - 0.5 * x1.abs();
    }
    // 2cosh a − 2cos b = e^a (1 − 2e^{−a}cos b + e^{−2a})
    (1.0 - 2.0 * (-a).exp() * b.cos() + (-2.0 * a).exp()).ln() / (4.0 * PI)
}

/// ∇K(x₁, x₂).
pub fn kernel_gradient(x1: f64, x2: f64) -> [f64; 2] {
    let a = TAU * x1;
    let b = TAU * x2;
    if a.abs() > 20.0 {
        let e = (-a.abs()).exp();
        let q = 1.0 - 2.0 * e * b.cos() + e * e;
        return [
            0.5 * x1.signum() * ((1.0 - e * e) / q - 1.0),
            e * b.sin() / q,
        ];
    }
    // cosh a − cos b
    let den = 2.0 * ((0.5 * a).sinh().powi(2) + (0.5 * b).sin().powi(2));
    [
        0.5 * a.sinh() / den - 0.5 * x1.signum(),
        0.5 * b.sin() / den,
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub norm_grad_k_l1: f64,
    pub norm_k_l1: f64,
    pub m0: f64,
}

impl KernelConstants {
    pub fn from_norms(norm_grad_k_l1: f64, norm_k_l1: f64, m0: f64) -> Self {
        let c2 = (m0 * norm_k_l1).sqrt();
        Self {
            c1: 2.0 * norm_grad_k_l1,
            c2,
            c3: (8.0 * c2 * c2).max(4.0),
            norm_grad_k_l1,
            norm_k_l1,
            m0,
        }
    }
}

/// ∫∫ g over [0, T] × [0, ½]: polar patch on [0, ρ]², tensor panels elsewhere.
fn quarter_integral<F: Fn(f64, f64) -> f64>(g: &F, truncation: f64, q: usize) -> f64 {
    let rho = POLAR_RADIUS;
    let mut total = 0.0;
    // polar: θ ∈ [0, π/4] reaches x₁ = ρ, θ ∈ [π/4, π/2] reaches x₂ = ρ
    for (t0, t1) in [(0.0, FRAC_PI_4), (FRAC_PI_4, FRAC_PI_2)] {
        let (th, tw) = gauss_legendre_on(q, t0, t1);
        for (&t, &wt) in th.iter().zip(&tw) {
            let rmax = rho / t.cos().max(t.sin());
            // geometric radial panels toward the singularity
            let mut hi = rmax;
            for level in 0..8 {
                let lo = if level == 7 { 0.0 } else { hi * 0.1 };
                let (rs, rw) = gauss_legendre_on(q, lo, hi);
                for (&r, &w) in rs.iter().zip(&rw) {
                    total += wt * w * r * g(r * t.cos(), r * t.sin());
                }
                hi = lo;
            }
        }
    }
    let mut rect = |a1: f64, b1: f64, a2: f64, b2: f64| {
        let (xs, xw) = gauss_legendre_on(q, a1, b1);
        let (ys, yw) = gauss_legendre_on(q, a2, b2);
        let mut s = 0.0;
        for (&x, &wx) in xs.iter().zip(&xw) {
            for (&y, &wy) in ys.iter().zip(&yw) {
                s += wx * wy * g(x, y);
            }
        }
        total += s;
    };
    // strip x₁ ∈ [0, ρ], x₂ ∈ [ρ, ½]
    let mut y = rho;
    while y < 0.5 - 1e-12 {
        let y1 = (y + 0.1f64).min(0.5);
        rect(0.0, rho, y, y1);
        y = y1;
    }
    // x₁ ∈ [ρ, T]: graded panels
    let mut x = rho;
    while x < truncation - 1e-12 {
        let w = if x < 0.5 {
            0.1
        } else if x < 4.0 {
            0.25
        } else {
            1.0
        };
        let x1 = (x + w).min(truncation);
        let mut y = 0.0;
        while y < 0.5 - 1e-12 {
            let y1 = (y + 0.1f64).min(0.5);
            rect(x, x1, y, y1);
            y = y1;
        }
        x = x1;
    }
    total
}

/// M₀ = ∫ sup_{x₂} |K| dx₁; the sup sits at x₂ = 0 or ½.
fn m0_integral(truncation: f64, q: usize) -> f64 {
    let sup = |x: f64| {
        let at0 = (2.0 * (PI * x).sinh()).ln() / TAU - 0.5 * x;
        let at_half = (2.0 * (PI * x).cosh()).ln() / TAU - 0.5 * x;
        at0.abs().max(at_half.abs())
    };
    let mut total = 0.0;
    // log singularity at 0: geometric panels on [0, ρ]
    let mut hi = POLAR_RADIUS;
    for level in 0..10 {
        let lo = if level == 9 { 0.0 } else { hi * 0.1 };
        let (xs, ws) = gauss_legendre_on(q, lo, hi);
        total += xs.iter().zip(&ws).map(|(x, w)| w * sup(*x)).sum::<f64>();
        hi = lo;
    }
    // |K(x₁, 0)| has a kink where K changes sign; panels are small enough
    let mut x = POLAR_RADIUS;
    while x < truncation - 1e-12 {
        let x1 = (x + if x < 4.0 { 0.05 } else { 1.0 }).min(truncation);
        let (xs, ws) = gauss_legendre_on(q, x, x1);
        total += xs.iter().zip(&ws).map(|(x, w)| w * sup(*x)).sum::<f64>();
        x = x1;
    }
    2.0 * total
}

fn norms(truncation: f64, q: usize) -> [f64; 3] {
    let grad = |x: f64, y: f64| {
        let g = kernel_gradient(x, y);
        (g[0] * g[0] + g[1] * g[1]).sqrt()
    };
    let k = |x: f64, y: f64| kernel(x, y).abs();
    // four symmetric quarters
    [
        4.0 * quarter_integral(&grad, truncation, q),
        4.0 * quarter_integral(&k, truncation, q),
        m0_integral(truncation, q),
    ]
}

/// ‖∇K‖₁, ‖K‖₁ and M₀ over [−T, T] × 𝕋, with a point-doubling convergence check.
pub fn kernel_constants(truncation: f64, quad_points: usize) -> Result<KernelConstants> {
    if !(truncation >= 10.0) {
        return Err(Error::Domain(format!(
            "kernel truncation must be at least 10, got {truncation}"
        )));
    }
    if quad_points < 4 {
        return Err(Error::Domain(format!(
            "quad_points must be at least 4, got {quad_points}"
        )));
    }
    let coarse = norms(truncation, quad_points);
    let fine = norms(truncation, 2 * quad_points);
    let names = ["|grad K|_L1", "|K|_L1", "M0"];
    for i in 0..3 {
        let rel = (fine[i] - coarse[i]).abs() / fine[i];
        if rel > CONVERGENCE_TOL {
            return Err(Error::Quadrature(format!(
                "{} moved by {rel:.2e} between {quad_points} and {} points",
                names[i],
                2 * quad_points
            )));
        }
    }
    Ok(KernelConstants::from_norms(fine[0], fine[1], fine[2]))
}

/// Upper bound on the contribution of |x₁| > T to any of the three norms.
pub fn tail_bound(truncation: f64) -> f64 {
    // |K|, |∇K| ≤ e^{−2π|x₁|}/(1 − e^{−2π|x₁|}) for |x₁| ≥ 1
    let s = (-TAU * truncation).exp();
    2.0 * s / (TAU * (1.0 - s))
}
