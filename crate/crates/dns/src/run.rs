//! Driving a configured simulation to `t_end`.

use std::f64::consts::PI;

use serde::Serialize;

use chanlab_core::injection::InjectionRecord;
use chanlab_core::poiseuille;
use chanlab_core::spectral::random_divfree;
use chanlab_core::SpectralField;

use crate::config::{Init, SimulationConfig};
use crate::error::{DnsError, Result};
use crate::residual::{reynolds_residual, TimeAverage};
use crate::solver::Solver;
use crate::stats::{Accumulator, AveragesRecord, GalerkinAccumulator, TimeSeriesRow};
use crate::verdict::{verdict_matrix, VerdictMatrix};

/// Largest CFL estimate accepted for the initial state.
pub const CFL_INIT_MAX: f64 = 0.5;

/// Odd shells up to this `k` are resolved individually in the averages.
pub const SHELL_KMAX: u64 = 99;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Keep the state every `output_stride` steps.
    pub keep_snapshots: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: SimulationConfig,
    pub series: Vec<TimeSeriesRow>,
    pub averages: AveragesRecord,
    /// `None` for unforced runs.
    pub verdict: Option<VerdictMatrix>,
    pub final_field: SpectralField,
    pub snapshots: Vec<(f64, SpectralField)>,
    pub initial_cfl: f64,
    pub max_cfl: f64,
    pub solver: Solver,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary<'a> {
    pub averages: &'a AveragesRecord,
    pub verdict: Option<&'a VerdictMatrix>,
    pub initial_cfl: f64,
    pub max_cfl: f64,
    /// `|u(t_end) − u_P|₀ / |u_P|₀`.
    pub final_poiseuille_error: f64,
}

impl RunOutput {
    pub fn poiseuille_error(&self) -> f64 {
        let p = *self.final_field.params();
        let up = SpectralField::poiseuille(p, self.final_field.resolution()).expect("valid space");
        (&self.final_field - &up).l2_norm() / up.l2_norm()
    }

    pub fn summary(&self) -> RunSummary<'_> {
        RunSummary {
            averages: &self.averages,
            verdict: self.verdict.as_ref(),
            initial_cfl: self.initial_cfl,
            max_cfl: self.max_cfl,
            final_poiseuille_error: self.poiseuille_error(),
        }
    }
}

/// Initial solver for `cfg` (fresh state, snapshot or restart).
pub fn initial_solver(cfg: &SimulationConfig) -> Result<Solver> {
    cfg.validate()?;
    let p = cfg.params;
    let res = cfg.res()?;
    let u0 = match &cfg.init {
        Init::Poiseuille => SpectralField::poiseuille(p, res)?,
        Init::Zero => SpectralField::zeros(p, res)?,
        Init::Perturbed { amplitude, seed } => {
            let mut u = SpectralField::poiseuille(p, res)?;
            let scale = amplitude * poiseuille::quantities(&p).u;
            u.axpy(scale, &random_divfree(p, res, *seed, 1.0)?)?;
            u
        }
        Init::FromFile { path } => {
            let s = Solver::load_restart(path, cfg.dt, cfg.integrator, cfg.dealias, cfg.forcing)?;
            if s.params() != &p || s.state().resolution() != res {
                return Err(DnsError::Config(format!(
                    "{} holds a different channel or resolution",
                    path.display()
                )));
            }
            return Ok(s);
        }
    };
    Ok(Solver::new(u0, cfg.dt, cfg.integrator, cfg.dealias, cfg.forcing))
}

/// Wavenumbers at which Galerkin projections are sampled.
pub fn galerkin_cutoffs(h: f64) -> Vec<f64> {
    [1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0].iter().map(|m| m * PI / h).collect()
}

pub fn run(cfg: &SimulationConfig) -> Result<RunOutput> {
    run_with(cfg, &RunOptions::default())
}

pub fn run_with(cfg: &SimulationConfig, opts: &RunOptions) -> Result<RunOutput> {
    let mut solver = initial_solver(cfg)?;
    let initial_cfl = solver.cfl();
    if initial_cfl > CFL_INIT_MAX {
        return Err(DnsError::Config(format!(
            "initial CFL estimate {initial_cfl:.3} exceeds {CFL_INIT_MAX}; reduce dt"
        )));
    }
    let p = cfg.params;
    let vol = p.volume();
    let steps = cfg.steps();
    let skip = cfg.skip_steps().max(solver.step_index());
    if solver.step_index() >= steps {
        return Err(DnsError::Config(format!(
            "initial state is at step {} but t_end is step {steps}",
            solver.step_index()
        )));
    }
    let stride = cfg.output_stride;

    let mut series = Vec::new();
    let mut snapshots = Vec::new();
    let mut acc: Option<Accumulator> = None;
    let mut galerkin = GalerkinAccumulator::new(galerkin_cutoffs(p.h));
    let mut prev: Option<(f64, f64, f64)> = None;
    let mut max_cfl: f64 = initial_cfl;
    loop {
        let n = solver.step_index();
        let t = solver.time();
        let u = solver.state().clone();
        let um = u.mean_velocity();
        let energy = u.l2_norm_sq();
        let enstrophy = u.grad_norm_sq();
        let injection = solver.forcing() * um * vol;
        let budget = match prev {
            Some((e0, ens0, inj0)) => {
                ((energy - e0) / (2.0 * cfg.dt) + p.nu * 0.5 * (enstrophy + ens0) - 0.5 * (injection + inj0)).abs() / vol
            }
            None => 0.0,
        };
        prev = Some((energy, enstrophy, injection));
        let on_stride = n % stride == 0 || n == steps;
        if on_stride {
            series.push(TimeSeriesRow {
                t,
                u: um,
                energy,
                enstrophy,
                injection,
                budget_residual: budget,
            });
            if opts.keep_snapshots {
                snapshots.push((t, u.clone()));
            }
        }
        max_cfl = max_cfl.max(solver.cfl());
        if n >= skip {
            let h = solver.advection().clone();
            acc.get_or_insert_with(|| Accumulator::new(t, energy, &u))
                .push(t, (um, energy, enstrophy, injection), &u, &h);
            if (n - skip) % stride == 0 || n == steps {
                galerkin.sample(&u, energy, enstrophy);
            }
        }
        if n >= steps {
            break;
        }
        solver.step()?;
    }

    let acc = acc.expect("window is non-empty");
    let w = acc.weight;
    let t0 = acc.t0;
    let t1 = acc.t_last;
    let forcing = solver.forcing();
    let energy_avg = acc.energy / w;
    let enstrophy_avg = acc.enstrophy / w;
    let injection_avg = acc.injection / w / vol;
    let dissipation_avg = p.nu * enstrophy_avg / vol;
    let budget_residual =
        ((acc.energy_end - acc.energy_start) / (2.0 * w) + p.nu * enstrophy_avg - acc.injection / w).abs() / vol;
    let budget_scale = if forcing != 0.0 { injection_avg } else { dissipation_avg };
    let mean_field = acc.field.scaled(1.0 / w);
    let mean_b = acc.advection.scaled(-1.0 / w);
    let rr = reynolds_residual(
        &TimeAverage { t0, t1, field: mean_field.clone() },
        &TimeAverage { t0, t1, field: mean_b },
        forcing,
    )?;
    let shells_avg = InjectionRecord::new(&mean_field, SHELL_KMAX);
    let averages = AveragesRecord {
        t0,
        t1,
        t: w,
        u_t: acc.u / w,
        energy_avg,
        enstrophy_avg,
        injection_avg,
        dissipation_avg,
        energy_start: acc.energy_start,
        energy_end: acc.energy_end,
        budget_residual,
        budget_residual_relative: budget_residual / budget_scale,
        reynolds_residual: rr.dual_norm,
        reynolds_residual_relative: rr.relative,
        shells_avg,
        galerkin: galerkin.finish(),
    };
    let verdict = cfg.forcing.then(|| verdict_matrix(&p, &averages));
    Ok(RunOutput {
        config: cfg.clone(),
        series,
        averages,
        verdict,
        final_field: solver.state().clone(),
        snapshots,
        initial_cfl,
        max_cfl,
        solver,
    })
}
