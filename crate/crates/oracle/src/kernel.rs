//! Periodic-in-x₂ Green's function on ℝ × 𝕋 by brute-force quadrature.

use crate::simpson;
use std::f64::consts::{PI, TAU};

/// K(x₁, x₂) = (1/2π) log|2 sinh(π(x₁ + i x₂))| − |x₁|/2.
pub fn kernel(x1: f64, x2: f64) -> f64 {
    let (a, b) = (PI * x1, PI * x2);
    // sinh(a + ib) = sinh a cos b + i cosh a sin b
    let re = a.sinh() * b.cos();
    let im = a.cosh() * b.sin();
    if a.abs() > 30.0 {
        // |2 sinh z| = e^{|a|} |1 − e^{−2z}| for large |a|
        let e = (-2.0 * a.abs()).exp();
        let c = 2.0 * b;
        let q = (1.0 - e * c.cos()).powi(2) + (e * c.sin()).powi(2);
        return q.ln() / (4.0 * PI);
    }
    (4.0 * (re * re + im * im)).ln() / (4.0 * PI) - 0.5 * x1.abs()
}

/// ∫₀¹ f(x) dx with x = t³ to flatten an endpoint singularity at 0.
fn graded<F: Fn(f64) -> f64>(f: &F, len: f64, tol: f64) -> f64 {
    simpson(
        &|t: f64| {
            if t == 0.0 {
                0.0
            } else {
                3.0 * t * t * len * f(len * t * t * t)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// ∫₀^T ∫₀^{1/2} g, graded toward the origin.
fn quarter<F: Fn(f64, f64) -> f64>(g: &F, truncation: f64, tol: f64) -> f64 {
    let inner = |x1: f64| graded(&|x2: f64| g(x1, x2), 0.5, tol);
    graded(&inner, 1.0, tol) + simpson(&inner, 1.0, truncation, tol)
}

/// ∇K from the sinh form.
pub fn kernel_gradient(x1: f64, x2: f64) -> [f64; 2] {
    let (a, b) = (PI * x1, PI * x2);
    let den = a.sinh().powi(2) + b.sin().powi(2);
    [
        0.5 * a.sinh() * a.cosh() / den - 0.5 * x1.signum(),
        0.5 * b.sin() * b.cos() / den,
    ]
}

/// (‖∇K‖₁, ‖K‖₁, M₀) over [−T, T] × 𝕋.
pub fn kernel_norms(truncation: f64, tol: f64) -> [f64; 3] {
    let grad = |x1: f64, x2: f64| {
        let g = kernel_gradient(x1, x2);
        (g[0] * g[0] + g[1] * g[1]).sqrt()
    };
    let k = |x1: f64, x2: f64| kernel(x1, x2).abs();
    let sup = |x1: f64| kernel(x1, 0.0).abs().max(kernel(x1, 0.5).abs());
    [
        4.0 * quarter(&grad, truncation, tol),
        4.0 * quarter(&k, truncation, tol),
        2.0 * (graded(&sup, 1.0, tol) + simpson(&sup, 1.0, truncation, tol)),
    ]
}

/// (K * g)(x) = ∫∫ K(s) g(x − s) ds over |s₁| ≤ window, s₂ ∈ [−½, ½).
pub fn convolve<G: Fn(f64, f64) -> f64>(g: &G, x1: f64, x2: f64, window: f64, tol: f64) -> f64 {
    let f = |s1: f64, s2: f64| kernel(s1, s2) * g(x1 - s1, x2 - s2);
    let mut total = 0.0;
    for sx in [1.0, -1.0] {
        let inner = |s1: f64| {
            let s1 = sx * s1;
            graded(&|s2: f64| f(s1, s2) + f(s1, -s2), 0.5, tol)
        };
        total += graded(&inner, 1.0, tol) + simpson(&inner, 1.0, window, tol);
    }
    total
}

/// Σ cₖ e^{−(x₁−μₖ)²/2σₖ²} cos(2πnₖx₂ + φₖ) with its first derivatives.
#[derive(Debug, Clone)]
pub struct GaussianModes {
    /// (c, μ, σ, n, φ)
    pub modes: Vec<(f64, f64, f64, u32, f64)>,
}

impl GaussianModes {
    pub fn value(&self, x1: f64, x2: f64) -> f64 {
        self.modes
            .iter()
            .map(|&(c, mu, s, n, ph)| {
                c * (-(x1 - mu).powi(2) / (2.0 * s * s)).exp() * (TAU * n as f64 * x2 + ph).cos()
            })
            .sum()
    }

    pub fn d1(&self, x1: f64, x2: f64) -> f64 {
        self.modes
            .iter()
            .map(|&(c, mu, s, n, ph)| {
                -c * (x1 - mu) / (s * s)
                    * (-(x1 - mu).powi(2) / (2.0 * s * s)).exp()
                    * (TAU * n as f64 * x2 + ph).cos()
            })
            .sum()
    }

    pub fn d2(&self, x1: f64, x2: f64) -> f64 {
        self.modes
            .iter()
            .map(|&(c, mu, s, n, ph)| {
                let w = TAU * n as f64;
                -c * w * (-(x1 - mu).powi(2) / (2.0 * s * s)).exp() * (w * x2 + ph).sin()
            })
            .sum()
    }

    /// (û₁, û₂, v) at x by direct convolution with K.
    pub fn biot_savart(&self, x1: f64, x2: f64, window: f64, tol: f64) -> [f64; 3] {
        [
            convolve(&|a, b| -self.d2(a, b), x1, x2, window, tol),
            convolve(&|a, b| self.d1(a, b), x1, x2, window, tol),
            convolve(&|a, b| self.value(a, b), x1, x2, window, tol),
        ]
    }
}
