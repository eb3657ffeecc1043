use thiserror::Error;

use crate::geometry::geodesic::Trajectory;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The point lies outside the admissible region of the field.
    #[error("domain error: {0}")]
    Domain(String),

    /// A derivative request exceeds what the jet engine supports.
    #[error("derivative order {requested} exceeds engine maximum {max}")]
    Capability { requested: usize, max: usize },

    #[error("degenerate metric: |det g| = {det:e}")]
    Singular { det: f64 },

    /// `F^2` vanishes (to the guard tolerance) along the requested direction.
    #[error("null direction: |F^2| = {value:e} below guard {guard:e}")]
    NullDirection { value: f64, guard: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("geodesic integration stopped at tau = {tau}: {reason}")]
    Integration {
        tau: f64,
        reason: String,
        partial: Box<Trajectory>,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
