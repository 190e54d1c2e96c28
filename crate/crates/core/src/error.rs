use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("numerical instability at t = {time}: {reason}")]
    Instability { time: f64, reason: String },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("backward integration left the admissible corridor at r = {r}: h = {h}")]
    Corridor { r: f64, h: f64 },
    #[error("snapshot format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
