//! Concrete dissipative models: steppers, energy triples and initial data.

pub mod potential;
pub mod presets;
pub mod state;
pub mod stepper;
pub mod triple;

pub use potential::{Diffusivity, Potential};
pub use presets::{kink_profile, Preset};
pub use state::{Model, ModelId, ModelState};
pub use stepper::{model_step, Stepper, DEFAULT_AMPLITUDE_CEILING};
pub use triple::{
    cgl_energy_triple, dw_energy_triple, energy_triple, is_near_equilibrium, nld_energy_triple,
    rd_energy_triple, time_derivative,
};
