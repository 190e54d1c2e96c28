//! Vorticity and vertical mean flow on the cylinder ℝ × 𝕋, truncated to a
//! periodic strip in x₁.

pub mod decay;
pub mod interp;
pub mod kernel;
pub mod presets;
pub mod profile;
pub mod solver;

pub use decay::{
    certified_mean_flow_exponent, decay_measure, measured_m1, DecayHistory, DecayReport,
};
pub use interp::{
    l2_lipschitz_bound, mean_gradient_bound, sup_bound_l2_lipschitz, sup_bound_mean_gradient,
    InterpBound, TrigPoly,
};
pub use kernel::{kernel, kernel_constants, kernel_gradient, tail_bound, KernelConstants};
pub use presets::{initial_state, MeanFlowPreset, VorticityPreset};
pub use profile::{
    e0_beta, enstrophy_balance_residual, enstrophy_profile, flux_budget_excess,
    mean_flow_bound_check, omconv1_reports, sample, DissipationHistory, EnstrophyProfile,
    MeanFlowCheck, VorticitySample,
};
pub use solver::{
    advection_term, biot_savart, cylinder_step, oscillating_part, spectral_gradient,
    spectral_mixed, vertical_mean, BiotSavart, CylinderState, CylinderStepper, DEFAULT_CFL,
};
