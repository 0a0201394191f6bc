use thiserror::Error;

use crate::experiments::config::ConfigError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("kernel width sigma = {sigma} is not resolved by grid spacing dx = {dx} (need sigma >= 2 dx)")]
    UnresolvedKernel { sigma: f64, dx: f64 },

    #[error("non-finite value {value} in {population} density at node {node} (t = {t})")]
    NonFinite {
        population: &'static str,
        node: usize,
        t: f64,
        value: f64,
    },

    #[error("density overflow at t = {t} (max n = {max:e}); use the renormalized mode for long cancer runs")]
    Overflow { t: f64, max: f64 },

    #[error("unstable step: dt |R-| = {stiffness} exceeds {limit} in {population} at node {node}")]
    Unstable {
        population: &'static str,
        node: usize,
        stiffness: f64,
        limit: f64,
    },

    #[error("total mass is zero; cannot renormalize")]
    ZeroMass,

    #[error("no sign change of the fitness on [0, {x_max}]")]
    NoRoot { x_max: f64 },

    #[error("{0}")]
    Incompatible(String),

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors that stem from user input rather than a numerical failure.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::InvalidGrid(_)
                | Error::InvalidParameter { .. }
                | Error::UnresolvedKernel { .. }
                | Error::Incompatible(_)
        )
    }
}
