use thiserror::Error;

pub type Result<T> = std::result::Result<T, DnsError>;

#[derive(Debug, Error)]
pub enum DnsError {
    #[error(transparent)]
    Core(#[from] chanlab_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),

    #[error("simulation diverged at step {step} (t = {t}): {reason}")]
    Diverged { step: u64, t: f64, reason: String },

    #[error("averaging windows differ: [{a0}, {a1}] vs [{b0}, {b1}]")]
    WindowMismatch { a0: f64, a1: f64, b0: f64, b1: f64 },

    #[error("restart file: {0}")]
    Restart(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
