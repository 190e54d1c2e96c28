use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Line,
    Plane,
    Cylinder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub length: f64,
    pub points: usize,
    pub boundary: Boundary,
    /// Coordinate of the left edge of the first cell.
    pub origin: f64,
}

impl Axis {
    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Cell-center coordinate of index `i`.
    pub fn coord(&self, i: usize) -> f64 {
        self.origin + (i as f64 + 0.5) * self.spacing()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.coord(i)).collect()
    }

    pub fn upper(&self) -> f64 {
        self.origin + self.length
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub kind: DomainKind,
    pub axes: Vec<Axis>,
}

pub const MIN_POINTS: usize = 8;

fn axis(length: f64, points: usize, boundary: Boundary, origin: f64) -> Result<Axis> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::Domain(format!(
            "axis length must be positive, got {length}"
        )));
    }
    if points < MIN_POINTS {
        return Err(Error::Domain(format!(
            "axis needs at least {MIN_POINTS} points, got {points}"
        )));
    }
    Ok(Axis {
        length,
        points,
        boundary,
        origin,
    })
}

impl Domain {
    /// Segment [−L/2, L/2].
    pub fn line(length: f64, points: usize, boundary: Boundary) -> Result<Self> {
        Ok(Self {
            kind: DomainKind::Line,
            axes: vec![axis(length, points, boundary, -0.5 * length)?],
        })
    }

    /// Rectangle [−Lx/2, Lx/2] × [−Ly/2, Ly/2] with one boundary kind.
    pub fn plane(lx: f64, nx: usize, ly: f64, ny: usize, boundary: Boundary) -> Result<Self> {
        Ok(Self {
            kind: DomainKind::Plane,
            axes: vec![
                axis(lx, nx, boundary, -0.5 * lx)?,
                axis(ly, ny, boundary, -0.5 * ly)?,
            ],
        })
    }

    /// [−L/2, L/2) × [0, 1), both periodic.
    pub fn cylinder(length: f64, n1: usize, n2: usize) -> Result<Self> {
        Ok(Self {
            kind: DomainKind::Cylinder,
            axes: vec![
                axis(length, n1, Boundary::Periodic, -0.5 * length)?,
                axis(1.0, n2, Boundary::Periodic, 0.0)?,
            ],
        })
    }

    /// The x₁ axis of this domain as a periodic or Neumann line.
    pub fn first_axis_line(&self) -> Self {
        Self {
            kind: DomainKind::Line,
            axes: vec![self.axes[0]],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let want = match self.kind {
            DomainKind::Line => 1,
            _ => 2,
        };
        if self.axes.len() != want {
            return Err(Error::Domain(format!(
                "{:?} needs {want} axes, got {}",
                self.kind,
                self.axes.len()
            )));
        }
        for a in &self.axes {
            axis(a.length, a.points, a.boundary, a.origin)?;
        }
        if self.kind == DomainKind::Cylinder {
            let v = self.axes[1];
            if v.length != 1.0 || v.boundary != Boundary::Periodic {
                return Err(Error::Domain(
                    "cylinder vertical axis must be periodic with length 1".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> (usize, usize) {
        match self.axes.len() {
            1 => (self.axes[0].points, 1),
            _ => (self.axes[0].points, self.axes[1].points),
        }
    }

    pub fn spacing(&self) -> Vec<f64> {
        self.axes.iter().map(|a| a.spacing()).collect()
    }

    pub fn max_spacing(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing()).fold(0.0, f64::max)
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing()).product()
    }

    /// Cell-center coordinates of flat index `k`.
    pub fn point(&self, k: usize) -> [f64; 2] {
        let (_, ny) = self.shape();
        match self.axes.len() {
            1 => [self.axes[0].coord(k), 0.0],
            _ => [self.axes[0].coord(k / ny), self.axes[1].coord(k % ny)],
        }
    }

    /// Half-width of the largest centered ball that stays inside every
    /// non-periodic-vertical axis.
    pub fn inner_radius(&self) -> f64 {
        match self.kind {
            DomainKind::Cylinder => 0.5 * self.axes[0].length,
            _ => self
                .axes
                .iter()
                .map(|a| 0.5 * a.length)
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Dimension N of the ambient space in which radii are measured.
    pub fn radial_dim(&self) -> u32 {
        match self.kind {
            DomainKind::Line | DomainKind::Cylinder => 1,
            DomainKind::Plane => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_rules() {
        assert!(Domain::line(1.0, 7, Boundary::Periodic).is_err());
        assert!(Domain::line(0.0, 8, Boundary::Periodic).is_err());
        let d = Domain::cylinder(10.0, 16, 8).unwrap();
        d.validate().unwrap();
        assert_eq!(d.axes[1].length, 1.0);
        let mut bad = d.clone();
        bad.axes[1].length = 2.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn centered_cells() {
        let d = Domain::line(4.0, 8, Boundary::Neumann).unwrap();
        assert_eq!(d.axes[0].coord(0), -1.75);
        assert_eq!(d.axes[0].coord(7), 1.75);
        let p = Domain::plane(2.0, 8, 4.0, 16, Boundary::Periodic).unwrap();
        assert_eq!(p.point(17), [p.axes[0].coord(1), p.axes[1].coord(1)]);
    }
}
