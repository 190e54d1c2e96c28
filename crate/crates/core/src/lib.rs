//! Energy triples, flux bounds and their numerical verification for
//! dissipative PDEs on truncated line, plane and cylinder grids.

pub mod diagnostics;
pub mod error;
pub mod grids;
pub mod models;
pub mod ode;
pub mod quad;
pub mod specfun;
pub mod vorticity;

pub use error::{Error, Result};
