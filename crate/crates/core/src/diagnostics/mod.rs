//! Checking layer: integrated fluxes, dissipation bounds, energy-gain
//! radii, occupancy times and kink counting.

pub mod bounds;
pub mod jt;
pub mod kinks;
pub mod occupancy;
pub mod series;

pub use bounds::{
    check_dissipation_bounds, dissipation_bound, flux_bound, pointwise_flux_bound, BoundContext,
    BoundKind, BoundOptions, BoundReport,
};
pub use jt::{jt_sparsity, sparsity_integral, JTRecord, DEFAULT_TOL_E};
pub use kinks::{kink_census, Annihilation, KinkCensus, KinkTracker, HYSTERESIS};
pub use occupancy::{
    occupancy, occupied_time, psi, state_distance, Metric, OccupancyRecord,
    DEFAULT_OBSERVATION_RADIUS,
};
pub use series::{
    admissible_radius, check_ladder, dissipation_integral, integrated_flux, FluxRecorder,
    FluxSeries, RecorderState, DEFAULT_PAD,
};
