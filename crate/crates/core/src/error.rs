use thiserror::Error;

/// Errors raised by the physics layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index {name}={value} outside {min}..={max}")]
    OutOfRange {
        name: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("observation point coincides with the source")]
    DegenerateGeometry,

    #[error("observation point lies off the x-z plane (y = {y:e} m)")]
    UnsupportedGeometry { y: f64 },

    #[error("dipole-dipole coupling is singular at zero separation")]
    ZeroSeparation,

    #[error("occupancy contains no occupied site")]
    EmptyLayout,

    #[error("initial state: {0}")]
    InvalidState(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
