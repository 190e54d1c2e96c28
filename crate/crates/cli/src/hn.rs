//! `hn` subcommand: tables of h_N by either evaluation method.

use crate::output::{num, Csv};
use fluxlab_core::specfun::{h_n, h_n_via_backward_ode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Bessel,
    Ode,
    Both,
}

/// K points from rmin to rmax, geometric when the range spans a decade or more.
pub fn r_grid(rmin: f64, rmax: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![rmin];
    }
    let geometric = rmax / rmin >= 10.0;
    (0..points)
        .map(|k| {
            let s = k as f64 / (points - 1) as f64;
            if geometric {
                rmin * (rmax / rmin).powf(s)
            } else {
                rmin + s * (rmax - rmin)
            }
        })
        .collect()
}

/// CSV `r,h,method,cross_check_error`; the error column is filled when both
/// methods run.
pub fn hn_csv(dim: u32, rmin: f64, rmax: f64, points: usize, method: Method) -> Result<Csv, String> {
    if dim < 1 {
        return Err(format!("--dim must be >= 1, got {dim}"));
    }
    if !(rmin > 0.0 && rmax >= rmin && rmax.is_finite()) || points == 0 {
        return Err(format!(
            "need 0 < rmin <= rmax and points >= 1, got rmin = {rmin}, rmax = {rmax}, points = {points}"
        ));
    }
    let grid = r_grid(rmin, rmax, points);
    let bessel = || -> Result<Vec<f64>, String> {
        grid.iter()
            .map(|&r| h_n(dim, r).map_err(|e| e.to_string()))
            .collect()
    };
    let ode = || -> Result<Vec<f64>, String> {
        Ok(h_n_via_backward_ode(dim, &grid)
            .map_err(|e| e.to_string())?
            .h_values)
    };
    let mut csv = Csv::new(&["r", "h", "method", "cross_check_error"]);
    match method {
        Method::Bessel => {
            for (r, h) in grid.iter().zip(bessel()?) {
                csv.row(&[num(*r), num(h), "bessel".into(), String::new()]);
            }
        }
        Method::Ode => {
            for (r, h) in grid.iter().zip(ode()?) {
                csv.row(&[num(*r), num(h), "ode".into(), String::new()]);
            }
        }
        Method::Both => {
            let (b, o) = (bessel()?, ode()?);
            for k in 0..grid.len() {
                let err = num((b[k] - o[k]).abs());
                csv.row(&[num(grid[k]), num(b[k]), "bessel".into(), err.clone()]);
                csv.row(&[num(grid[k]), num(o[k]), "ode".into(), err]);
            }
        }
    }
    Ok(csv)
}
