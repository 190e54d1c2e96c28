//! Grids, fields, stencils and ball/sphere quadrature.

mod domain;
mod field;
mod geometry;
pub mod snapshot;
pub mod spectral;
pub mod stencil;

pub use domain::{Axis, Boundary, Domain, DomainKind, MIN_POINTS};
pub use field::{A2Report, Budget, EnergyTriple, ScalarField, VectorField};
pub use geometry::{
    ball_integral, ball_measure, sphere_flux, sphere_flux_with_samples, BallWeights, SphereSampler,
};
pub use snapshot::{Snapshot, SnapshotHeader};
pub use stencil::{divergence, gradient, laplacian};

/// slack_tol = κ (dx² + dt)(1 + |∇e|) with the default κ.
pub const DEFAULT_SLACK_KAPPA: f64 = 10.0;
