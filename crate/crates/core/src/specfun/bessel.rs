use crate::quad;
use crate::{Error, Result};
use std::f64::consts::PI;

/// K_ν(r) for r > 0; symmetric in ν.
pub fn bessel_k(nu: f64, r: f64) -> Result<f64> {
    let s = bessel_k_scaled(nu, r)?;
    let v = s * (-r).exp();
    if !v.is_finite() {
        return Err(Error::Overflow(format!("K_{nu}({r}) exceeds f64 range")));
    }
    Ok(v)
}

/// e^r K_ν(r).
pub fn bessel_k_scaled(nu: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("bessel_k needs r > 0, got {r}")));
    }
    if !nu.is_finite() {
        return Err(Error::Domain(format!(
            "bessel_k needs finite order, got {nu}"
        )));
    }
    let nu = nu.abs();
    let twice = 2.0 * nu;
    let v = if (twice - twice.round()).abs() < 1e-15 && (twice.round() as i64) % 2 == 1 {
        half_integer_scaled((nu - 0.5).round() as u32, r)
    } else {
        integral_scaled(nu, r)?
    };
    if !v.is_finite() {
        return Err(Error::Overflow(format!("K_{nu}({r}) exceeds f64 range")));
    }
    Ok(v)
}

/// e^r K_{n+1/2}(r) = √(π/2r) Σ_k (n+k)!/(k!(n−k)!(2r)^k).
fn half_integer_scaled(n: u32, r: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=n {
        let kf = k as f64;
        let nf = n as f64;
        term *= (nf + kf) * (nf - kf + 1.0) / (kf * 2.0 * r);
        sum += term;
    }
    (PI / (2.0 * r)).sqrt() * sum
}

/// e^r K_ν(r) = ∫₀^∞ exp(−r(cosh t − 1)) cosh(νt) dt by adaptive quadrature.
fn integral_scaled(nu: f64, r: f64) -> Result<f64> {
    let log_g = |t: f64| {
        let s = (0.5 * t).sinh();
        nu * t - 2.0 * r * s * s
    };
    let t_peak = (nu / r).asinh();
    let peak = log_g(t_peak);
    if peak > 700.0 {
        return Err(Error::Overflow(format!("K_{nu}({r}) exceeds f64 range")));
    }
    let mut t_hi = t_peak.max(1.0);
    while log_g(t_hi) > peak - 48.0 {
        t_hi *= 1.5;
    }
    let integrand = |t: f64| {
        let s = (0.5 * t).sinh();
        let base = -2.0 * r * s * s - peak;
        0.5 * ((nu * t + base).exp() + (-nu * t + base).exp())
    };
    let mut total = 0.0;
    let mut cuts = vec![0.0];
    if t_peak > 0.0 {
        cuts.push(t_peak);
    }
    let t_fall = (1.0 + 1.0 / r).acosh();
    if t_fall > t_peak && t_fall < t_hi {
        cuts.push(t_fall);
    }
    cuts.push(t_hi);
    for w in cuts.windows(2) {
        total += quad::integrate(integrand, w[0], w[1], 0.0, 1e-14, 4000)?.value;
    }
    Ok(total * peak.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_forms() {
        let v = bessel_k(0.5, 1.0).unwrap();
        assert!((v / ((PI / 2.0).sqrt() * (-1f64).exp()) - 1.0).abs() < 1e-15);
        let v = bessel_k(1.5, 2.0).unwrap();
        assert!((v - (PI / 4.0).sqrt() * (-2f64).exp() * 1.5).abs() < 1e-15);
    }

    #[test]
    fn symmetric_in_order() {
        for (nu, r) in [(0.3, 0.7), (1.0, 2.0), (2.5, 0.1)] {
            assert_eq!(bessel_k(nu, r).unwrap(), bessel_k(-nu, r).unwrap());
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(bessel_k(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(1.0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(300.0, 1e-3), Err(Error::Overflow(_))));
        assert!(matches!(bessel_k(200.5, 1e-3), Err(Error::Overflow(_))));
    }

    #[test]
    fn integral_agrees_with_closed_form_at_half_integers() {
        for nu in [0.5, 1.5, 2.5] {
            for r in [1e-3, 0.05, 1.0, 30.0] {
                let a = integral_scaled(nu, r).unwrap();
                let b = half_integer_scaled((nu - 0.5) as u32, r);
                assert!((a / b - 1.0).abs() < 1e-12, "nu={nu} r={r} {a} {b}");
            }
        }
    }
}
