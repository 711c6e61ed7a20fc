//! `simulate` and `sweep`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};

use chanlab_core::bounds::{self, Regime};
use chanlab_core::params::{reynolds, skin_friction};
use chanlab_core::poiseuille;
use chanlab_dns::stats::write_series_csv;
use chanlab_dns::{run, Init, Integrator, RunOutput, SimulationConfig};

use crate::error::{usage, CliError, Result};
use crate::{f17, open_output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegratorArg {
    Euler,
    Sbdf2,
}

#[derive(Debug, Clone, Args)]
pub struct Overrides {
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub transient_skip: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Seed of the initial perturbation (perturbed init only).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long, value_enum)]
    pub integrator: Option<IntegratorArg>,
    #[arg(long)]
    pub output_stride: Option<u64>,
}

impl Overrides {
    fn apply(&self, cfg: &mut SimulationConfig) -> Result<()> {
        if let Some(v) = self.dt {
            cfg.dt = v;
        }
        if let Some(v) = self.t_end {
            cfg.t_end = v;
        }
        if let Some(v) = self.transient_skip {
            cfg.transient_skip = Some(v);
        }
        if let Some(v) = self.nu {
            cfg.params.nu = v;
        }
        if let Some(v) = self.p {
            cfg.params.p = v;
        }
        if let Some(v) = self.output_stride {
            cfg.output_stride = v;
        }
        if let Some(i) = self.integrator {
            cfg.integrator = match i {
                IntegratorArg::Euler => Integrator::Euler,
                IntegratorArg::Sbdf2 => Integrator::Sbdf2,
            };
        }
        if self.seed.is_some() || self.amplitude.is_some() {
            match &mut cfg.init {
                Init::Perturbed { amplitude, seed } => {
                    if let Some(s) = self.seed {
                        *seed = s;
                    }
                    if let Some(a) = self.amplitude {
                        *amplitude = a;
                    }
                }
                _ => return Err(usage("--seed and --amplitude need a perturbed init")),
            }
        }
        cfg.validate()?;
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Simulation config (TOML).
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Output directory, created if missing.
    #[arg(long, short, default_value = "out")]
    pub out: PathBuf,
}

fn load_config(path: &Path, overrides: &Overrides) -> Result<SimulationConfig> {
    let mut cfg = SimulationConfig::load(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    overrides.apply(&mut cfg)?;
    Ok(cfg)
}

/// Writes `series.csv`, `averages.json`, `verdict.csv` (forced runs) and
/// `final.restart` into `dir`.
pub fn write_run(dir: &Path, out: &RunOutput) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut series = std::io::BufWriter::new(std::fs::File::create(dir.join("series.csv"))?);
    write_series_csv(&mut series, &out.series)?;
    series.flush()?;
    let json = serde_json::to_string_pretty(&out.summary()).map_err(|e| usage(e.to_string()))?;
    std::fs::write(dir.join("averages.json"), json + "\n")?;
    if let Some(v) = &out.verdict {
        std::fs::write(dir.join("verdict.csv"), v.to_csv())?;
    }
    out.solver.save_restart(dir.join("final.restart"))?;
    Ok(())
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let cfg = load_config(&args.config, &args.overrides)?;
    let out = run(&cfg)?;
    write_run(&args.out, &out)?;
    let a = &out.averages;
    println!("window [{}, {}]  U_T {}", a.t0, a.t1, f17(a.u_t));
    println!(
        "budget residual {:.3e} (relative {:.3e})  Reynolds residual {:.3e} (relative {:.3e})",
        a.budget_residual, a.budget_residual_relative, a.reynolds_residual, a.reynolds_residual_relative
    );
    println!("|u - u_P| / |u_P| at t_end: {:.3e}", out.poiseuille_error());
    match &out.verdict {
        Some(v) => {
            for r in &v.rows {
                println!("  {:<18} {}", r.check, if r.pass { "PASS" } else { "FAIL" });
            }
            println!("verdict ({:?} regime): {}", v.regime, if v.all_pass() { "all PASS" } else { "FAIL" });
        }
        None => println!("unforced run: no bound verdicts"),
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepOver {
    /// Pressure drop `P`.
    P,
    /// Poiseuille Reynolds number `P h³ / (12 ν² L_x)`.
    Re,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Base simulation config (TOML).
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Swept quantity.
    #[arg(long, value_enum)]
    pub over: SweepOver,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub values: Vec<f64>,
    /// Evaluate the bounds only, no simulation.
    #[arg(long)]
    pub bounds_only: bool,
    /// Per-entry run outputs go to `<dir>/entry_<i>/` when given.
    #[arg(long)]
    pub runs_dir: Option<PathBuf>,
    /// Aggregate CSV (stdout when absent).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

pub const SWEEP_HEADER: &str =
    "value,p,re_poiseuille,regime,u_lower,u_upper,status,U_T,cf_re,budget_residual_relative,reynolds_residual_relative,verdict";

struct Entry {
    value: f64,
    cfg: SimulationConfig,
    regime: Regime,
    outcome: Option<std::result::Result<RunOutput, CliError>>,
}

fn entry_line(e: &Entry) -> String {
    let p = &e.cfg.params;
    let head = format!(
        "{},{},{},{:?},{},{}",
        f17(e.value),
        f17(p.p),
        f17(poiseuille::quantities(p).re),
        e.regime,
        f17(bounds::mean_velocity_lower(p)),
        f17(bounds::mean_velocity_upper(p))
    );
    let tail = match &e.outcome {
        None => "skipped,,,,,".to_string(),
        Some(Err(err)) => {
            let status = match err {
                CliError::Diverged(_) => "diverged",
                CliError::Usage(_) => "error",
            };
            format!("{status},,,,,")
        }
        Some(Ok(out)) => {
            let a = &out.averages;
            let cf_re = skin_friction(a.u_t, p).map(|c| c * reynolds(a.u_t, p)).unwrap_or(f64::NAN);
            let verdict = match &out.verdict {
                Some(v) if v.all_pass() => "PASS",
                Some(_) => "FAIL",
                None => "",
            };
            format!(
                "ok,{},{},{},{},{verdict}",
                f17(a.u_t),
                f17(cf_re),
                f17(a.budget_residual_relative),
                f17(a.reynolds_residual_relative)
            )
        }
    };
    format!("{head},{tail}")
}

pub fn sweep(args: &SweepArgs, sequential: bool) -> Result<()> {
    let base = load_config(&args.config, &args.overrides)?;
    let mut entries = Vec::with_capacity(args.values.len());
    for &value in &args.values {
        let mut cfg = base.clone();
        let pr = match args.over {
            SweepOver::P => value,
            SweepOver::Re => 12.0 * cfg.params.nu.powi(2) * cfg.params.lx * value / cfg.params.h.powi(3),
        };
        cfg.params = cfg.params.with_pressure(pr)?;
        cfg.validate()?;
        let regime = bounds::pressure_regime(&cfg.params).regime;
        entries.push(Entry {
            value,
            cfg,
            regime,
            outcome: None,
        });
    }
    if !args.bounds_only {
        let run_one = |e: &Entry| run(&e.cfg).map_err(CliError::from);
        let results: Vec<_> = if sequential {
            entries.iter().map(run_one).collect()
        } else {
            parallel_map(&entries, run_one)
        };
        for (e, r) in entries.iter_mut().zip(results) {
            e.outcome = Some(r);
        }
        if let Some(dir) = &args.runs_dir {
            for (i, e) in entries.iter().enumerate() {
                if let Some(Ok(out)) = &e.outcome {
                    write_run(&dir.join(format!("entry_{i}")), out)?;
                }
            }
        }
    }
    let mut w = open_output(args.out.as_ref())?;
    writeln!(w, "{SWEEP_HEADER}")?;
    for e in &entries {
        writeln!(w, "{}", entry_line(e))?;
    }
    w.flush()?;
    let diverged = entries.iter().filter(|e| matches!(e.outcome, Some(Err(CliError::Diverged(_))))).count();
    for (i, e) in entries.iter().enumerate() {
        if let Some(Err(err)) = &e.outcome {
            eprintln!("entry {i} (value {}): {err}", e.value);
        }
    }
    if diverged > 0 {
        return Err(CliError::Diverged(format!("{diverged} sweep entries diverged")));
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn parallel_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}
