//! Γ, modified Bessel K_ν, the Riccati ratio h_N and sphere-surface constants.

mod bessel;
mod gamma;
mod riccati;

pub use bessel::{bessel_k, bessel_k_scaled};
pub use gamma::gamma_fn;
pub use riccati::{
    h_n_via_backward_ode, riccati_integrate, riccati_integrate_with, RiccatiOptions,
    RiccatiOutcome, RiccatiTrajectory,
};

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HnMethod {
    BesselRatio,
    RiccatiBackward,
}

impl HnMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            HnMethod::BesselRatio => "bessel",
            HnMethod::RiccatiBackward => "ode",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecFunTable {
    pub dimension: u32,
    pub r_grid: Vec<f64>,
    pub h_values: Vec<f64>,
    pub method: HnMethod,
    /// Max abs deviation between the two evaluation methods on `r_grid`.
    pub cross_check_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceConstant {
    pub n: u32,
    pub omega_n: f64,
}

fn check_args(n: u32, r: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::Domain(format!("dimension must be >= 1, got {n}")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "r must be positive and finite, got {r}"
        )));
    }
    Ok(())
}

/// h_N(r) = K_{N/2}(r) / K_{N/2−1}(r).
pub fn h_n(n: u32, r: f64) -> Result<f64> {
    check_args(n, r)?;
    match n {
        1 => Ok(1.0),
        3 => Ok(1.0 + 1.0 / r),
        _ => {
            let nu = n as f64 / 2.0;
            let num = bessel_k_scaled(nu, r)?;
            let den = bessel_k_scaled((nu - 1.0).abs(), r)?;
            Ok(num / den)
        }
    }
}

/// N·h_N(r)/r.
pub fn h_tilde(n: u32, r: f64) -> Result<f64> {
    Ok(n as f64 * h_n(n, r)? / r)
}

/// Upper edge of the corridor 1 < h_N(r) < (N−1)/(2r) + √(1 + (N−1)²/(4r²)).
pub fn h_n_upper_envelope(n: u32, r: f64) -> f64 {
    let a = (n as f64 - 1.0) / (2.0 * r);
    a + (1.0 + a * a).sqrt()
}

/// Surface measure of the unit sphere in ℝ^N, with ω₁ = 2.
pub fn omega_n(n: u32) -> Result<SurfaceConstant> {
    if n < 1 {
        return Err(Error::Domain(format!("dimension must be >= 1, got {n}")));
    }
    let omega_n = match n {
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI,
        _ => {
            let half = n as f64 / 2.0;
            2.0 * std::f64::consts::PI.powf(half) / gamma_fn(half)?
        }
    };
    Ok(SurfaceConstant { n, omega_n })
}

/// Table of h_N on `r_grid` by the Bessel ratio, cross-checked against the
/// backward Riccati integration.
pub fn h_n_table(n: u32, r_grid: &[f64]) -> Result<SpecFunTable> {
    let h_values = r_grid
        .iter()
        .map(|&r| h_n(n, r))
        .collect::<Result<Vec<_>>>()?;
    let ode = h_n_via_backward_ode(n, r_grid)?;
    let cross_check_error = h_values
        .iter()
        .zip(&ode.h_values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(SpecFunTable {
        dimension: n,
        r_grid: r_grid.to_vec(),
        h_values,
        method: HnMethod::BesselRatio,
        cross_check_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exact_dimensions() {
        assert_eq!(h_n(1, 0.37).unwrap(), 1.0);
        assert_eq!(h_n(3, 2.0).unwrap(), 1.5);
        assert_eq!(h_tilde(1, 2.0).unwrap(), 0.5);
        assert_eq!(h_tilde(3, 1.0).unwrap(), 6.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(h_n(0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(h_n(2, 0.0), Err(Error::Domain(_))));
        assert!(matches!(h_n(2, -1.0), Err(Error::Domain(_))));
        assert!(omega_n(0).is_err());
    }

    #[test]
    fn sphere_constants() {
        assert_eq!(omega_n(1).unwrap().omega_n, 2.0);
        assert!((omega_n(2).unwrap().omega_n - 2.0 * PI).abs() < 1e-15);
        assert!((omega_n(3).unwrap().omega_n - 4.0 * PI).abs() < 1e-14);
        assert!((omega_n(4).unwrap().omega_n - 2.0 * PI * PI).abs() < 1e-12);
        assert!((omega_n(5).unwrap().omega_n - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn odd_dimension_five_closed_form() {
        // K_{5/2}/K_{3/2} = (1 + 3/r + 3/r²)/(1 + 1/r)
        for r in [0.05, 0.5, 1.0, 7.0] {
            let exact = (1.0 + 3.0 / r + 3.0 / (r * r)) / (1.0 + 1.0 / r);
            assert!((h_n(5, r).unwrap() / exact - 1.0).abs() < 1e-14);
        }
    }
}
