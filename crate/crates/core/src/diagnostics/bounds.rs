use super::series::FluxSeries;
use crate::specfun::{h_n, omega_n};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    F1bd,
    FNbd,
    #[serde(rename = "dissip0")]
    Dissip0,
    #[serde(rename = "dissip1")]
    Dissip1,
    #[serde(rename = "dissip2")]
    Dissip2,
    #[serde(rename = "dissip3")]
    Dissip3,
    #[serde(rename = "dissip4")]
    Dissip4,
    #[serde(rename = "cor43_gamma")]
    Cor43Gamma,
    #[serde(rename = "cor43_log")]
    Cor43Log,
    #[serde(rename = "omconv1")]
    Omconv1,
    #[serde(rename = "timeN")]
    TimeN,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::F1bd => "F1bd",
            BoundKind::FNbd => "FNbd",
            BoundKind::Dissip0 => "dissip0",
            BoundKind::Dissip1 => "dissip1",
            BoundKind::Dissip2 => "dissip2",
            BoundKind::Dissip3 => "dissip3",
            BoundKind::Dissip4 => "dissip4",
            BoundKind::Cor43Gamma => "cor43_gamma",
            BoundKind::Cor43Log => "cor43_log",
            BoundKind::Omconv1 => "omconv1",
            BoundKind::TimeN => "timeN",
        }
    }

    /// limsup statements checked at finite horizon.
    pub fn is_asymptotic(&self) -> bool {
        matches!(
            self,
            BoundKind::Dissip1
                | BoundKind::Dissip2
                | BoundKind::Dissip3
                | BoundKind::Cor43Gamma
                | BoundKind::Cor43Log
                | BoundKind::TimeN
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundContext {
    pub n: u32,
    pub r: f64,
    pub t: f64,
    /// factor applied to the right-hand side of asymptotic bounds
    pub slack: f64,
    pub asymptotic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub passed: bool,
    pub context: BoundContext,
}

impl BoundReport {
    pub fn new(
        kind: BoundKind,
        lhs: f64,
        rhs: f64,
        report_tol: f64,
        context: BoundContext,
    ) -> Self {
        let margin = rhs - lhs;
        Self {
            kind,
            lhs,
            rhs,
            margin,
            passed: margin >= -report_tol,
            context,
        }
    }
}

/// Upper bound on F(R, T): ω_N R^{N−1} √(βTe₀) h_N(R√(e₀/βT)), with ω₁ = 2, h₁ = 1.
pub fn flux_bound(n: u32, r: f64, t: f64, e0: f64, beta: f64) -> Result<f64> {
    let w = omega_n(n)?.omega_n;
    if beta * t == 0.0 {
        return Ok(0.0);
    }
    let s = (beta * t * e0).sqrt();
    if e0 == 0.0 {
        // h_N(ρ) ~ (N−2)/ρ as ρ → 0; N ≤ 2 gives the limit of s·h_N(R√(e₀/βT))
        return Ok(match n {
            1 | 2 => 0.0,
            _ => w * r.powi(n as i32 - 1) * (n as f64 - 2.0) * beta * t / r,
        });
    }
    Ok(w * r.powi(n as i32 - 1) * s * h_n(n, r * (e0 / (beta * t)).sqrt())?)
}

/// Per-point bound |F₁(x, T)| ≤ √(βTe₀) in one dimension.
pub fn pointwise_flux_bound(t: f64, e0: f64, beta: f64) -> f64 {
    (beta * t * e0).sqrt()
}

/// Right-hand side of the dissipation bound: flux bound + (ω_N/N) R^N e₀.
pub fn dissipation_bound(n: u32, r: f64, t: f64, e0: f64, beta: f64) -> Result<f64> {
    let w = omega_n(n)?.omega_n;
    Ok(flux_bound(n, r, t, e0, beta)? + w / n as f64 * r.powi(n as i32) * e0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundOptions {
    pub asymptotic_slack: f64,
    pub report_tol: f64,
    /// limsup-style bounds are only evaluated at T ≥ this horizon
    pub asymptotic_from: f64,
    /// growth exponent of the power-law family
    pub gamma: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            asymptotic_slack: 1.5,
            report_tol: 1e-9,
            asymptotic_from: 10.0,
            gamma: 0.25,
        }
    }
}

/// Flux and dissipation bounds at every (R, T) sample with T > 0.
pub fn check_dissipation_bounds(
    series: &FluxSeries,
    opts: &BoundOptions,
) -> Result<Vec<BoundReport>> {
    let n = series.dim;
    let (e0, beta) = (series.e0, series.beta);
    let w = omega_n(n)?.omega_n;
    let mut out = Vec::new();
    for (it, &t) in series.times.iter().enumerate() {
        if t <= 0.0 {
            continue;
        }
        if let (1, Some(pm)) = (n, &series.pointwise_max) {
            let ctx = BoundContext {
                n,
                r: 0.0,
                t,
                slack: 1.0,
                asymptotic: false,
            };
            out.push(BoundReport::new(
                BoundKind::F1bd,
                pm[it],
                pointwise_flux_bound(t, e0, beta),
                opts.report_tol,
                ctx,
            ));
        }
        for (ir, &r) in series.radii.iter().enumerate() {
            let ctx = |slack: f64, asymptotic: bool| BoundContext {
                n,
                r,
                t,
                slack,
                asymptotic,
            };
            let f = series.flux[it][ir];
            let d = series.dissipation[it][ir];
            let fb = flux_bound(n, r, t, e0, beta)?;
            out.push(BoundReport::new(
                BoundKind::FNbd,
                f,
                fb,
                opts.report_tol,
                ctx(1.0, false),
            ));
            let db = fb + w / n as f64 * r.powi(n as i32) * e0;
            out.push(BoundReport::new(
                BoundKind::Dissip0,
                d,
                db,
                opts.report_tol,
                ctx(1.0, false),
            ));
            // at R₀ = R/√T this is the normalized form of the same inequality
            let vol = w / n as f64 * r.powi(n as i32);
            out.push(BoundReport::new(
                BoundKind::Dissip4,
                d / vol,
                db / vol,
                opts.report_tol,
                ctx(1.0, false),
            ));
            if t < opts.asymptotic_from {
                continue;
            }
            let s = opts.asymptotic_slack;
            match n {
                1 => out.push(BoundReport::new(
                    BoundKind::Dissip1,
                    d / t.sqrt(),
                    s * 2.0 * (beta * e0).sqrt(),
                    opts.report_tol,
                    ctx(s, true),
                )),
                2 => {
                    let lt = t.ln();
                    out.push(BoundReport::new(
                        BoundKind::Dissip2,
                        lt / t * d,
                        s * 4.0 * PI * beta,
                        opts.report_tol,
                        ctx(s, true),
                    ));
                    out.push(BoundReport::new(
                        BoundKind::Cor43Gamma,
                        lt / t * d,
                        s * 4.0 * PI * beta / (1.0 - 2.0 * opts.gamma),
                        opts.report_tol,
                        ctx(s, true),
                    ));
                    if lt > 1.0 {
                        out.push(BoundReport::new(
                            BoundKind::Cor43Log,
                            lt.ln() / t * d,
                            s * 2.0 * PI * beta,
                            opts.report_tol,
                            ctx(s, true),
                        ));
                    }
                }
                _ => out.push(BoundReport::new(
                    BoundKind::Dissip3,
                    d / t,
                    s * beta * (n as f64 - 2.0) * w * r.powi(n as i32 - 2),
                    opts.report_tol,
                    ctx(s, true),
                )),
            }
        }
    }
    Ok(out)
}
