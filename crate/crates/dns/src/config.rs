//! Simulation configuration, read from TOML.
//!
//! ```toml
//! dt = 0.05
//! t_end = 100.0
//! transient_skip = 60.0     # default: 5 h²/ν
//! integrator = "sbdf2"      # or "euler"
//! dealias = true
//! output_stride = 20
//!
//! [params]
//! lx = 4.0
//! ly = 2.0
//! h = 1.0
//! nu = 0.02
//! p = 0.96
//!
//! [resolution]
//! nx = 16
//! ny = 8
//! nz = 33
//!
//! [init]
//! kind = "perturbed"        # poiseuille | perturbed | zero | from_file
//! amplitude = 1e-3
//! seed = 1
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use chanlab_core::{ChannelParams, Resolution};

use crate::error::{DnsError, Result};

/// Implicit–explicit scheme: viscous terms implicit, advection explicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// Backward/forward Euler, first order.
    Euler,
    /// Second-order backward differentiation with extrapolated advection,
    /// bootstrapped by one Euler step.
    Sbdf2,
}

impl Integrator {
    pub fn order(self) -> u32 {
        match self {
            Integrator::Euler => 1,
            Integrator::Sbdf2 => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Init {
    Poiseuille,
    /// Poiseuille plus a random divergence-free field with rms `amplitude · U_P`.
    Perturbed { amplitude: f64, seed: u64 },
    Zero,
    /// Snapshot or restart file.
    FromFile { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionConfig {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub params: ChannelParams,
    pub resolution: ResolutionConfig,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub transient_skip: Option<f64>,
    #[serde(default = "default_integrator")]
    pub integrator: Integrator,
    #[serde(default = "default_true")]
    pub dealias: bool,
    pub init: Init,
    #[serde(default = "default_stride")]
    pub output_stride: u64,
    /// Drop the pressure forcing (free decay). Bounds are not checked then.
    #[serde(default = "default_true")]
    pub forcing: bool,
}

fn default_integrator() -> Integrator {
    Integrator::Sbdf2
}

fn default_true() -> bool {
    true
}

fn default_stride() -> u64 {
    10
}

impl SimulationConfig {
    /// Defaults for everything except the physics and grid.
    pub fn new(params: ChannelParams, res: Resolution, dt: f64, t_end: f64, init: Init) -> Self {
        Self {
            params,
            resolution: ResolutionConfig {
                nx: res.nx,
                ny: res.ny,
                nz: res.nz,
            },
            dt,
            t_end,
            transient_skip: None,
            integrator: Integrator::Sbdf2,
            dealias: true,
            init,
            output_stride: default_stride(),
            forcing: true,
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates; a relative `from_file` path is taken relative to
    /// the config file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg = Self::from_toml_str(&std::fs::read_to_string(path)?)?;
        if let Init::FromFile { path: p } = &mut cfg.init {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn res(&self) -> Result<Resolution> {
        let r = self.resolution;
        Ok(Resolution::new(r.nx, r.ny, r.nz)?)
    }

    /// Start of the averaging window.
    pub fn skip(&self) -> f64 {
        self.transient_skip
            .unwrap_or(5.0 * self.params.h * self.params.h / self.params.nu)
    }

    pub fn steps(&self) -> u64 {
        (self.t_end / self.dt).round() as u64
    }

    /// First step index inside the averaging window.
    pub fn skip_steps(&self) -> u64 {
        (self.skip() / self.dt).round() as u64
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.res()?;
        let bad = |m: String| Err(DnsError::Config(m));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        let steps = self.t_end / self.dt;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return bad(format!("t_end = {} is not a multiple of dt = {}", self.t_end, self.dt));
        }
        let skip = self.skip();
        if !(skip >= 0.0 && self.skip_steps() < self.steps()) {
            return bad(format!(
                "transient_skip = {skip} leaves no averaging window before t_end = {}",
                self.t_end
            ));
        }
        if self.output_stride == 0 {
            return bad("output_stride must be at least 1".into());
        }
        if let Init::Perturbed { amplitude, .. } = self.init {
            if !(amplitude >= 0.0 && amplitude.is_finite()) {
                return bad(format!("perturbation amplitude must be nonnegative, got {amplitude}"));
            }
        }
        Ok(())
    }
}
