//! Ball integrals with exact partial-cell coverage and sphere fluxes with
//! bilinear sampling.

use super::domain::{Boundary, Domain, DomainKind};
use super::field::{ScalarField, VectorField};
use crate::{Error, Result};
use std::f64::consts::{PI, TAU};

fn check_ball(domain: &Domain, radius: f64, center: [f64; 2]) -> Result<()> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Geometry(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let axes = match domain.kind {
        DomainKind::Cylinder => &domain.axes[..1],
        _ => &domain.axes[..],
    };
    let tol = 1e-12 * domain.axes[0].length;
    for (a, ax) in axes.iter().enumerate() {
        if center[a] - radius < ax.origin - tol || center[a] + radius > ax.upper() + tol {
            return Err(Error::Geometry(format!(
                "ball of radius {radius} around {center:?} leaves axis {a} = [{}, {}]",
                ax.origin,
                ax.upper()
            )));
        }
    }
    Ok(())
}

fn overlap(a0: f64, a1: f64, b0: f64, b1: f64) -> f64 {
    (a1.min(b1) - a0.max(b0)).max(0.0)
}

/// ∫_{a}^{b} √(R² − t²) dt for −R ≤ a ≤ b ≤ R.
fn circle_primitive(t: f64, r: f64) -> f64 {
    let t = t.clamp(-r, r);
    0.5 * (t * (r * r - t * t).max(0.0).sqrt() + r * r * (t / r).asin())
}

/// Exact area of [x0,x1]×[y0,y1] ∩ disc(0, r) (coordinates relative to the center).
fn rect_disc_area(x0: f64, x1: f64, y0: f64, y1: f64, r: f64) -> f64 {
    let mut cuts = vec![x0, x1, -r, r];
    for y in [y0, y1] {
        if y.abs() < r {
            let s = (r * r - y * y).sqrt();
            cuts.push(s);
            cuts.push(-s);
        }
    }
    cuts.retain(|&c| c >= x0 && c <= x1);
    cuts.sort_by(f64::total_cmp);
    let mut area = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0].max(-r), w[1].min(r));
        if b <= a {
            continue;
        }
        let xm = 0.5 * (a + b);
        let sm = (r * r - xm * xm).sqrt();
        let upper_is_circle = sm <= y1;
        let lower_is_circle = -sm >= y0;
        let top = if upper_is_circle { sm } else { y1 };
        let bottom = if lower_is_circle { -sm } else { y0 };
        if top <= bottom {
            continue;
        }
        let arc = circle_primitive(b, r) - circle_primitive(a, r);
        let mut piece = 0.0;
        piece += if upper_is_circle { arc } else { y1 * (b - a) };
        piece -= if lower_is_circle { -arc } else { y0 * (b - a) };
        area += piece;
    }
    area
}

/// Cell weights (flat index, covered measure) of a ball.
#[derive(Debug, Clone)]
pub struct BallWeights {
    pub radius: f64,
    pub center: [f64; 2],
    pub entries: Vec<(usize, f64)>,
}

impl BallWeights {
    pub fn new(domain: &Domain, radius: f64, center: [f64; 2]) -> Result<Self> {
        check_ball(domain, radius, center)?;
        let (_, ny) = domain.shape();
        let mut entries = Vec::new();
        let ax = domain.axes[0];
        let dx = ax.spacing();
        let i_lo = (((center[0] - radius - ax.origin) / dx).floor().max(0.0)) as usize;
        let i_hi = ((((center[0] + radius - ax.origin) / dx).ceil()) as usize).min(ax.points);
        match domain.kind {
            DomainKind::Line | DomainKind::Cylinder => {
                let vert = if domain.kind == DomainKind::Cylinder {
                    domain.axes[1].spacing()
                } else {
                    1.0
                };
                for i in i_lo..i_hi {
                    let c0 = ax.origin + i as f64 * dx;
                    let w = overlap(c0, c0 + dx, center[0] - radius, center[0] + radius);
                    if w > 0.0 {
                        for j in 0..ny {
                            entries.push((i * ny + j, w * vert));
                        }
                    }
                }
            }
            DomainKind::Plane => {
                let ay = domain.axes[1];
                let dy = ay.spacing();
                let j_lo = (((center[1] - radius - ay.origin) / dy).floor().max(0.0)) as usize;
                let j_hi =
                    ((((center[1] + radius - ay.origin) / dy).ceil()) as usize).min(ay.points);
                let r2 = radius * radius;
                for i in i_lo..i_hi {
                    let x0 = ax.origin + i as f64 * dx - center[0];
                    let x1 = x0 + dx;
                    let near_x = if x0 > 0.0 {
                        x0
                    } else if x1 < 0.0 {
                        x1
                    } else {
                        0.0
                    };
                    let far_x = x0.abs().max(x1.abs());
                    for j in j_lo..j_hi {
                        let y0 = ay.origin + j as f64 * dy - center[1];
                        let y1 = y0 + dy;
                        let near_y = if y0 > 0.0 {
                            y0
                        } else if y1 < 0.0 {
                            y1
                        } else {
                            0.0
                        };
                        if near_x * near_x + near_y * near_y >= r2 {
                            continue;
                        }
                        let far_y = y0.abs().max(y1.abs());
                        let w = if far_x * far_x + far_y * far_y <= r2 {
                            dx * dy
                        } else {
                            rect_disc_area(x0, x1, y0, y1, radius)
                        };
                        if w > 0.0 {
                            entries.push((i * ny + j, w));
                        }
                    }
                }
            }
        }
        Ok(Self {
            radius,
            center,
            entries,
        })
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.entries.iter().map(|&(k, w)| w * values[k]).sum()
    }

    pub fn measure(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }
}

/// ∫_{B_R(center)} field dx with partial-cell weighting.
pub fn ball_integral(field: &ScalarField, radius: f64, center: [f64; 2]) -> Result<f64> {
    Ok(BallWeights::new(&field.domain, radius, center)?.integrate(&field.values))
}

/// Bilinear (or linear) interpolation stencil for a point.
fn stencil_1d(ax: &super::domain::Axis, x: f64) -> [(usize, f64); 2] {
    let n = ax.points;
    let s = (x - ax.origin) / ax.spacing() - 0.5;
    let i0 = s.floor();
    let t = s - i0;
    let i0 = i0 as i64;
    let fix = |i: i64| -> usize {
        match ax.boundary {
            Boundary::Periodic => i.rem_euclid(n as i64) as usize,
            Boundary::Neumann => i.clamp(0, n as i64 - 1) as usize,
        }
    };
    [(fix(i0), 1.0 - t), (fix(i0 + 1), t)]
}

/// Sampling plan for ∮_{|x−c|=R} F·ν dσ.
#[derive(Debug, Clone)]
pub struct SphereSampler {
    pub radius: f64,
    /// (stencil entries, outward normal, surface weight)
    nodes: Vec<(Vec<(usize, f64)>, [f64; 2], f64)>,
}

impl SphereSampler {
    pub fn new(
        domain: &Domain,
        radius: f64,
        center: [f64; 2],
        samples: Option<usize>,
    ) -> Result<Self> {
        check_ball(domain, radius, center)?;
        let (_, ny) = domain.shape();
        let ax = domain.axes[0];
        let mut nodes = Vec::new();
        match domain.kind {
            DomainKind::Line => {
                for (sign, x) in [(1.0, center[0] + radius), (-1.0, center[0] - radius)] {
                    let st = stencil_1d(&ax, x).to_vec();
                    nodes.push((st, [sign, 0.0], 1.0));
                }
            }
            DomainKind::Cylinder => {
                let dy = domain.axes[1].spacing();
                for (sign, x) in [(1.0, center[0] + radius), (-1.0, center[0] - radius)] {
                    let st = stencil_1d(&ax, x);
                    for j in 0..ny {
                        nodes.push((
                            st.iter().map(|&(i, w)| (i * ny + j, w)).collect(),
                            [sign, 0.0],
                            dy,
                        ));
                    }
                }
            }
            DomainKind::Plane => {
                let ay = domain.axes[1];
                let h = ax.spacing().min(ay.spacing());
                let m =
                    samples.unwrap_or_else(|| 256.max((4.0 * TAU * radius / h).ceil() as usize));
                let ds = TAU * radius / m as f64;
                for k in 0..m {
                    let th = TAU * k as f64 / m as f64;
                    let (c, s) = (th.cos(), th.sin());
                    let sx = stencil_1d(&ax, center[0] + radius * c);
                    let sy = stencil_1d(&ay, center[1] + radius * s);
                    let mut st = Vec::with_capacity(4);
                    for &(i, wx) in &sx {
                        for &(j, wy) in &sy {
                            st.push((i * ny + j, wx * wy));
                        }
                    }
                    nodes.push((st, [c, s], ds));
                }
            }
        }
        Ok(Self { radius, nodes })
    }

    pub fn flux(&self, components: &[Vec<f64>]) -> f64 {
        let mut total = 0.0;
        for (st, normal, w) in &self.nodes {
            let mut fn_ = 0.0;
            for (a, comp) in components.iter().enumerate() {
                if normal[a] != 0.0 {
                    let v: f64 = st.iter().map(|&(k, c)| c * comp[k]).sum();
                    fn_ += normal[a] * v;
                }
            }
            total += w * fn_;
        }
        total
    }

    /// Linear sampling of a scalar at the surface nodes.
    pub fn sample(&self, values: &[f64]) -> Vec<f64> {
        self.nodes
            .iter()
            .map(|(st, _, _)| st.iter().map(|&(k, c)| c * values[k]).sum())
            .collect()
    }
}

/// Outward flux through the sphere of radius R around the origin.
pub fn sphere_flux(field: &VectorField, radius: f64) -> Result<f64> {
    Ok(SphereSampler::new(&field.domain, radius, [0.0, 0.0], None)?.flux(&field.components))
}

/// Same as [`sphere_flux`] with an explicit number of surface samples (plane only).
pub fn sphere_flux_with_samples(field: &VectorField, radius: f64, samples: usize) -> Result<f64> {
    Ok(
        SphereSampler::new(&field.domain, radius, [0.0, 0.0], Some(samples))?
            .flux(&field.components),
    )
}

/// Measure of the unit ball of dimension 1 or 2 times R^N.
pub fn ball_measure(n: u32, radius: f64) -> f64 {
    match n {
        1 => 2.0 * radius,
        _ => PI * radius * radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rect_disc_area() {
        // whole disc
        assert!((rect_disc_area(-2.0, 2.0, -2.0, 2.0, 1.0) - PI).abs() < 1e-14);
        // quarter
        assert!((rect_disc_area(0.0, 2.0, 0.0, 2.0, 1.0) - PI / 4.0).abs() < 1e-14);
        // half strip y>0.5: segment area r²acos(h) − h√(1−h²)
        let h: f64 = 0.5;
        let seg = h.acos() - h * (1.0 - h * h).sqrt();
        assert!((rect_disc_area(-1.0, 1.0, 0.5, 1.0, 1.0) - seg).abs() < 1e-14);
    }

    #[test]
    fn unit_disc_and_segment() {
        let d = Domain::plane(4.0, 40, 4.0, 40, Boundary::Neumann).unwrap();
        let one = ScalarField::from_fn(&d, |_, _| 1.0);
        let a = ball_integral(&one, 1.0, [0.0, 0.0]).unwrap();
        assert!((a - PI).abs() < 1e-12);
        let l = Domain::line(10.0, 37, Boundary::Neumann).unwrap();
        let one = ScalarField::from_fn(&l, |_, _| 1.0);
        assert!((ball_integral(&one, 2.0, [0.0, 0.0]).unwrap() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn geometry_errors() {
        let d = Domain::plane(4.0, 16, 4.0, 16, Boundary::Neumann).unwrap();
        let one = ScalarField::from_fn(&d, |_, _| 1.0);
        assert!(matches!(
            ball_integral(&one, 2.5, [0.0, 0.0]),
            Err(Error::Geometry(_))
        ));
        assert!(matches!(
            ball_integral(&one, 1.5, [1.0, 0.0]),
            Err(Error::Geometry(_))
        ));
        let v = VectorField::zeros(&d);
        assert!(sphere_flux(&v, 3.0).is_err());
    }

    #[test]
    fn identity_field_flux() {
        let d = Domain::plane(8.0, 64, 8.0, 64, Boundary::Neumann).unwrap();
        let x = ScalarField::from_fn(&d, |x, _| x);
        let y = ScalarField::from_fn(&d, |_, y| y);
        let f = VectorField::new(d, vec![x.values, y.values], 0.0).unwrap();
        let flux = sphere_flux_with_samples(&f, 1.0, 256).unwrap();
        assert!((flux / TAU - 1.0).abs() < 0.02);
        let flux = sphere_flux(&f, 2.5).unwrap();
        assert!((flux / (TAU * 2.5 * 2.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cylinder_ball_is_a_band() {
        let d = Domain::cylinder(10.0, 40, 16).unwrap();
        let one = ScalarField::from_fn(&d, |_, _| 1.0);
        assert!((ball_integral(&one, 1.3, [0.0, 0.0]).unwrap() - 2.6).abs() < 1e-12);
    }
}
