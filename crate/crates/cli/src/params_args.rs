//! Channel parameters from flags, optionally layered over a TOML file.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use chanlab_core::ChannelParams;
use chanlab_dns::SimulationConfig;

use crate::error::{usage, Result};

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Streamwise period L_x.
    #[arg(long)]
    pub lx: Option<f64>,
    /// Spanwise period L_y.
    #[arg(long)]
    pub ly: Option<f64>,
    /// Channel height h.
    #[arg(long)]
    pub h: Option<f64>,
    /// Kinematic viscosity.
    #[arg(long)]
    pub nu: Option<f64>,
    /// Kinematic pressure drop over one period.
    #[arg(long)]
    pub p: Option<f64>,
    /// TOML file with a `[params]` table (a simulation config works too);
    /// flags override its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialParams {
    lx: Option<f64>,
    ly: Option<f64>,
    h: Option<f64>,
    nu: Option<f64>,
    p: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    params: PartialParams,
}

fn read_file(path: &Path) -> Result<PartialParams> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if let Ok(cfg) = SimulationConfig::from_toml_str(&text) {
        let p = cfg.params;
        return Ok(PartialParams {
            lx: Some(p.lx),
            ly: Some(p.ly),
            h: Some(p.h),
            nu: Some(p.nu),
            p: Some(p.p),
        });
    }
    let file: ParamsFile = toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(file.params)
}

impl ParamArgs {
    pub fn resolve(&self) -> Result<ChannelParams> {
        let base = match &self.config {
            Some(path) => read_file(path)?,
            None => PartialParams::default(),
        };
        let pick = |flag: Option<f64>, file: Option<f64>, name: &str| {
            flag.or(file).ok_or_else(|| usage(format!("missing --{name} (no flag and no value in --config)")))
        };
        let params = ChannelParams::new(
            pick(self.lx, base.lx, "lx")?,
            pick(self.ly, base.ly, "ly")?,
            pick(self.h, base.h, "h")?,
            pick(self.nu, base.nu, "nu")?,
            pick(self.p, base.p, "p")?,
        )?;
        Ok(params)
    }
}
