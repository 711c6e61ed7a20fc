use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("channel parameter `{name}` must be finite and positive, got {value}")]
    InvalidParam { name: &'static str, value: f64 },

    #[error("`{name}` must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("z = {z} lies outside the channel [0, {h}]")]
    OutOfChannel { z: f64, h: f64 },

    #[error("invalid resolution: {0}")]
    InvalidResolution(String),

    #[error("fields do not share parameters and resolution")]
    Mismatch,

    #[error("quadrature needs at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },

    #[error("wavenumber {0} is not on the (0,0,k) Stokes spectrum")]
    OffSpectrum(f64),

    #[error("wavenumber {kappa} is below the smallest Stokes wavenumber {kappa1}")]
    BelowFirstWavenumber { kappa: f64, kappa1: f64 },

    #[error("background profile needs 0 < delta < h/2 and V >= 0 (V = {v}, delta = {delta}, h = {h})")]
    InvalidProfile { v: f64, delta: f64, h: f64 },

    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
