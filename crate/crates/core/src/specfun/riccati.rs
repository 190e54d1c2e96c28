use super::{h_n, h_n_upper_envelope, HnMethod, SpecFunTable};
use crate::ode::{self, Control, Dopri5Options, EndReason};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RiccatiOutcome {
    ConvergedToOne,
    BlewUp {
        r_star: f64,
        step_underflow: bool,
    },
    CrossedZero {
        r_star: f64,
    },
    /// Start too close to the separatrix, or no decision reached by r_max.
    Indeterminate {
        reason: String,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RiccatiTrajectory {
    pub n: u32,
    pub r0: f64,
    pub h0: f64,
    pub samples: Vec<(f64, f64)>,
    pub outcome: RiccatiOutcome,
}

#[derive(Debug, Clone, Copy)]
pub struct RiccatiOptions {
    pub blowup_threshold: f64,
    pub step_floor: f64,
    pub rtol: f64,
    pub max_sample_spacing: f64,
    /// Relative offset from h_N(r0) below which a blow-up or sign change is
    /// reported as indeterminate.
    pub threshold_margin: f64,
    /// |h − 1| below this at r_max counts as convergence to 1.
    pub convergence_tol: f64,
}

impl Default for RiccatiOptions {
    fn default() -> Self {
        Self {
            blowup_threshold: 1e6,
            step_floor: 1e-14,
            rtol: 1e-10,
            max_sample_spacing: 0.05,
            threshold_margin: 1e-6,
            convergence_tol: 1e-2,
        }
    }
}

fn rhs(n: u32) -> impl Fn(f64, f64) -> f64 {
    let a = n as f64 - 1.0;
    move |r: f64, h: f64| h * h - 1.0 - a * h / r
}

/// Forward integration of h' = h² − 1 − (N−1)h/r from (r0, h0) to r_max.
pub fn riccati_integrate(n: u32, r0: f64, h0: f64, r_max: f64) -> Result<RiccatiTrajectory> {
    riccati_integrate_with(n, r0, h0, r_max, &RiccatiOptions::default())
}

pub fn riccati_integrate_with(
    n: u32,
    r0: f64,
    h0: f64,
    r_max: f64,
    opts: &RiccatiOptions,
) -> Result<RiccatiTrajectory> {
    if n < 1 {
        return Err(Error::Domain(format!("dimension must be >= 1, got {n}")));
    }
    if !(r0 > 0.0) || !(r_max > r0) || !h0.is_finite() {
        return Err(Error::Domain(format!(
            "need 0 < r0 < r_max and finite h0, got r0={r0}, r_max={r_max}, h0={h0}"
        )));
    }
    let mut samples = vec![(r0, h0)];
    let dopri = Dopri5Options {
        rtol: opts.rtol,
        atol: opts.rtol * 1e-2,
        h_init: 1e-3f64.min(opts.max_sample_spacing),
        h_max: opts.max_sample_spacing,
        h_min: opts.step_floor,
    };
    let seg = ode::integrate(rhs(n), r0, h0, r_max, &dopri, |r, h| {
        samples.push((r, h));
        if h.abs() > opts.blowup_threshold || h < 0.0 {
            Control::Halt
        } else {
            Control::Continue
        }
    });
    let mut outcome = match seg.reason {
        EndReason::Halted if seg.y < 0.0 => RiccatiOutcome::CrossedZero { r_star: seg.t },
        EndReason::Halted => RiccatiOutcome::BlewUp {
            r_star: seg.t,
            step_underflow: false,
        },
        EndReason::StepUnderflow | EndReason::NonFinite if seg.y > 1.0 => RiccatiOutcome::BlewUp {
            r_star: seg.t,
            step_underflow: true,
        },
        EndReason::StepUnderflow | EndReason::NonFinite => RiccatiOutcome::Indeterminate {
            reason: format!("step underflow at r = {} with h = {}", seg.t, seg.y),
        },
        EndReason::Reached if (seg.y - 1.0).abs() <= opts.convergence_tol => {
            RiccatiOutcome::ConvergedToOne
        }
        EndReason::Reached => RiccatiOutcome::Indeterminate {
            reason: format!("undecided at r_max = {r_max}: h = {}", seg.y),
        },
    };
    if matches!(
        outcome,
        RiccatiOutcome::BlewUp { .. } | RiccatiOutcome::CrossedZero { .. }
    ) {
        let h_star = h_n(n, r0)?;
        if (h0 - h_star).abs() < opts.threshold_margin * h_star {
            outcome = RiccatiOutcome::Indeterminate {
                reason: format!("h0 within {} of h_N(r0) = {h_star}", opts.threshold_margin),
            };
        }
    }
    Ok(RiccatiTrajectory {
        n,
        r0,
        h0,
        samples,
        outcome,
    })
}

/// h_N on `r_grid` by integrating the Riccati equation backward from the
/// large-r asymptote 1 + (N−1)/(2r).
pub fn h_n_via_backward_ode(n: u32, r_grid: &[f64]) -> Result<SpecFunTable> {
    if n < 1 {
        return Err(Error::Domain(format!("dimension must be >= 1, got {n}")));
    }
    if r_grid.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::Domain(
            "grid points must be positive and finite".into(),
        ));
    }
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    let mut h_values = vec![0.0; r_grid.len()];
    if r_grid.is_empty() {
        return Ok(SpecFunTable {
            dimension: n,
            r_grid: vec![],
            h_values,
            method: HnMethod::RiccatiBackward,
            cross_check_error: 0.0,
        });
    }
    let r_top = *r_grid.last().unwrap();
    let r_seed = 20f64.max(10.0 * r_top);
    let mut r = r_seed;
    let mut h = 1.0 + (n as f64 - 1.0) / (2.0 * r_seed);
    let dopri = Dopri5Options {
        rtol: 1e-13,
        atol: 1e-15,
        h_init: 1e-3,
        h_max: 1.0,
        h_min: 1e-14,
    };
    let mut h_next = dopri.h_init;
    let mut violation = None;
    for (i, &target) in r_grid.iter().enumerate().rev() {
        let opts = Dopri5Options {
            h_init: h_next,
            ..dopri
        };
        let seg = ode::integrate(rhs(n), r, h, target, &opts, |r, h| {
            let ok = if n == 1 {
                h == 1.0
            } else {
                h > 1.0 && h < h_n_upper_envelope(n, r)
            };
            if ok {
                Control::Continue
            } else {
                violation = Some((r, h));
                Control::Halt
            }
        });
        if let Some((r, h)) = violation {
            return Err(Error::Corridor { r, h });
        }
        if seg.reason != EndReason::Reached {
            return Err(Error::Corridor { r: seg.t, h: seg.y });
        }
        r = seg.t;
        h = seg.y;
        h_next = seg.h_next;
        h_values[i] = h;
    }
    let mut cross_check_error: f64 = 0.0;
    for (&r, &v) in r_grid.iter().zip(&h_values) {
        cross_check_error = cross_check_error.max((h_n(n, r)? - v).abs());
    }
    Ok(SpecFunTable {
        dimension: n,
        r_grid: r_grid.to_vec(),
        h_values,
        method: HnMethod::RiccatiBackward,
        cross_check_error,
    })
}
