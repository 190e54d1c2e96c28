//! Second-order finite differences at cell centers. Neumann axes use the
//! mirror ghost u₋₁ = u₀, u_n = u_{n−1}; periodic axes wrap.

use super::domain::{Boundary, Domain};
use super::field::{ScalarField, VectorField};

#[inline]
fn neighbours(i: usize, n: usize, boundary: Boundary) -> (usize, usize) {
    match boundary {
        Boundary::Periodic => ((i + n - 1) % n, (i + 1) % n),
        Boundary::Neumann => (i.saturating_sub(1), (i + 1).min(n - 1)),
    }
}

/// Applies `op(prev, here, next)` along `axis` of a row-major array.
fn along_axis<F: Fn(f64, f64, f64) -> f64>(
    domain: &Domain,
    values: &[f64],
    axis: usize,
    op: F,
) -> Vec<f64> {
    let (nx, ny) = domain.shape();
    let a = domain.axes[axis];
    let mut out = vec![0.0; values.len()];
    if axis == 0 {
        for i in 0..nx {
            let (im, ip) = neighbours(i, nx, a.boundary);
            for j in 0..ny {
                out[i * ny + j] = op(values[im * ny + j], values[i * ny + j], values[ip * ny + j]);
            }
        }
    } else {
        for i in 0..nx {
            let row = i * ny;
            for j in 0..ny {
                let (jm, jp) = neighbours(j, ny, a.boundary);
                out[row + j] = op(values[row + jm], values[row + j], values[row + jp]);
            }
        }
    }
    out
}

pub fn partial(domain: &Domain, values: &[f64], axis: usize) -> Vec<f64> {
    let h = 0.5 / domain.axes[axis].spacing();
    along_axis(domain, values, axis, |m, _, p| (p - m) * h)
}

pub fn gradient(field: &ScalarField) -> VectorField {
    let d = &field.domain;
    VectorField {
        domain: d.clone(),
        components: (0..d.dim()).map(|a| partial(d, &field.values, a)).collect(),
        time: field.time,
    }
}

pub fn divergence(field: &VectorField) -> ScalarField {
    let d = &field.domain;
    let mut out = vec![0.0; d.len()];
    for (a, c) in field.components.iter().enumerate() {
        for (o, v) in out.iter_mut().zip(partial(d, c, a)) {
            *o += v;
        }
    }
    ScalarField {
        domain: d.clone(),
        values: out,
        time: field.time,
    }
}

/// Compact 3-point Laplacian per axis.
pub fn laplacian_values(domain: &Domain, values: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    for a in 0..domain.dim() {
        let h2 = 1.0 / domain.axes[a].spacing().powi(2);
        let part = along_axis(domain, values, a, |m, c, p| (m - 2.0 * c + p) * h2);
        for (o, v) in out.iter_mut().zip(part) {
            *o += v;
        }
    }
    out
}

pub fn laplacian(field: &ScalarField) -> ScalarField {
    field.with_values(laplacian_values(&field.domain, &field.values))
}

/// div(a ∇u) in conservative face form with arithmetic face averages of `a`;
/// Neumann boundary faces carry zero flux.
pub fn div_a_grad(domain: &Domain, a: &[f64], u: &[f64]) -> Vec<f64> {
    let (nx, ny) = domain.shape();
    let mut out = vec![0.0; u.len()];
    for (axis, ax) in domain.axes.iter().enumerate() {
        let h2 = 1.0 / ax.spacing().powi(2);
        let n = ax.points;
        let stride = if axis == 0 { ny } else { 1 };
        let outer = if axis == 0 { ny } else { nx };
        for o in 0..outer {
            let base = if axis == 0 { o } else { o * ny };
            let last = match ax.boundary {
                Boundary::Periodic => n,
                Boundary::Neumann => n - 1,
            };
            for i in 0..last {
                let k0 = base + i * stride;
                let k1 = base + ((i + 1) % n) * stride;
                let flux = 0.5 * (a[k0] + a[k1]) * (u[k1] - u[k0]) * h2;
                out[k0] += flux;
                out[k1] -= flux;
            }
        }
    }
    out
}
