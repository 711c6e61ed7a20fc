//! Time series and finite-time averages over `[t₀, t₁]`.
//!
//! Averages use the trapezoidal rule on the step grid.

use std::io::Write;

use serde::Serialize;

use chanlab_core::injection::InjectionRecord;
use chanlab_core::SpectralField;

use crate::error::Result;

pub const SERIES_HEADER: &str = "t,U,energy,enstrophy,injection,budget_residual";

/// Instantaneous diagnostics. `energy` is `|u|₀²`, `enstrophy` is `‖u‖²`,
/// `injection` is `(f, u)`; `budget_residual` is
/// `|Δ(|u|₀²/2)/Δt + ν‖u‖² − (f,u)| / (L_x L_y h)` over the preceding step
/// (trapezoidal in time), 0 on the first row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeSeriesRow {
    pub t: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub energy: f64,
    pub enstrophy: f64,
    pub injection: f64,
    pub budget_residual: f64,
}

pub fn write_series_csv(w: &mut impl Write, rows: &[TimeSeriesRow]) -> Result<()> {
    writeln!(w, "{SERIES_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.t, r.u, r.energy, r.enstrophy, r.injection, r.budget_residual
        )?;
    }
    Ok(())
}

/// Galerkin projections `P_κ u` sampled within the window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GalerkinRecord {
    pub kappas: Vec<f64>,
    pub samples: usize,
    /// Sample means of `|u|₀²`, `‖u‖²` and `|P_κ u|₀²`.
    pub energy_avg: f64,
    pub enstrophy_avg: f64,
    pub projected_energy_avg: Vec<f64>,
    /// Largest `(|P_{κ_j} u|₀² − |P_{κ_{j+1}} u|₀²)/|u|₀²` over samples; ≤ 0
    /// when the projected energy is non-decreasing in `κ`.
    pub monotone_defect: f64,
    /// Largest `(⟨|u|₀²⟩ − ⟨|P_κ u|₀²⟩) / (κ^{-2} ⟨‖u‖²⟩)`.
    pub tail_ratio: f64,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct GalerkinAccumulator {
    kappas: Vec<f64>,
    samples: usize,
    energy: f64,
    enstrophy: f64,
    projected: Vec<f64>,
    monotone_defect: f64,
}

impl GalerkinAccumulator {
    pub(crate) fn new(kappas: Vec<f64>) -> Self {
        let n = kappas.len();
        Self {
            kappas,
            projected: vec![0.0; n],
            monotone_defect: f64::NEG_INFINITY,
            ..Default::default()
        }
    }

    pub(crate) fn sample(&mut self, u: &SpectralField, energy: f64, enstrophy: f64) {
        let proj: Vec<f64> = self.kappas.iter().map(|&k| u.galerkin_project(k).l2_norm_sq()).collect();
        for w in proj.windows(2) {
            self.monotone_defect = self.monotone_defect.max((w[0] - w[1]) / energy.max(f64::MIN_POSITIVE));
        }
        for (a, b) in self.projected.iter_mut().zip(&proj) {
            *a += b;
        }
        self.energy += energy;
        self.enstrophy += enstrophy;
        self.samples += 1;
    }

    pub(crate) fn finish(&self) -> GalerkinRecord {
        let n = self.samples.max(1) as f64;
        let energy_avg = self.energy / n;
        let enstrophy_avg = self.enstrophy / n;
        let projected_energy_avg: Vec<f64> = self.projected.iter().map(|p| p / n).collect();
        let tail_ratio = self
            .kappas
            .iter()
            .zip(&projected_energy_avg)
            .map(|(k, p)| (energy_avg - p) / (enstrophy_avg / (k * k)))
            .fold(f64::NEG_INFINITY, f64::max);
        GalerkinRecord {
            kappas: self.kappas.clone(),
            samples: self.samples,
            energy_avg,
            enstrophy_avg,
            projected_energy_avg,
            monotone_defect: self.monotone_defect,
            tail_ratio,
        }
    }
}

/// Finite-time averages over `[t0, t1]`, `t = t1 − t0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragesRecord {
    pub t0: f64,
    pub t1: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// `U_T`.
    #[serde(rename = "U_T")]
    pub u_t: f64,
    /// `⟨|u|₀²⟩_T`.
    pub energy_avg: f64,
    /// `⟨‖u‖²⟩_T`.
    pub enstrophy_avg: f64,
    /// `⟨(f, u)⟩_T / (L_x L_y h)`.
    pub injection_avg: f64,
    /// `ν ⟨‖u‖²⟩_T / (L_x L_y h)`.
    pub dissipation_avg: f64,
    pub energy_start: f64,
    pub energy_end: f64,
    /// `|(|u(t1)|₀² − |u(t0)|₀²)/(2T) + ν⟨‖u‖²⟩ − ⟨(f,u)⟩| / (L_x L_y h)`.
    pub budget_residual: f64,
    /// `budget_residual` over `injection_avg` (over `dissipation_avg` if unforced).
    pub budget_residual_relative: f64,
    pub reynolds_residual: f64,
    pub reynolds_residual_relative: f64,
    /// Shell injections of the averaged mean profile.
    pub shells_avg: InjectionRecord,
    pub galerkin: GalerkinRecord,
}

/// Trapezoidal accumulation of scalars and fields.
#[derive(Debug, Clone)]
pub(crate) struct Accumulator {
    pub t0: f64,
    pub t_last: f64,
    pub weight: f64,
    pub u: f64,
    pub energy: f64,
    pub enstrophy: f64,
    pub injection: f64,
    pub energy_start: f64,
    pub energy_end: f64,
    pub field: SpectralField,
    pub advection: SpectralField,
    last: Option<(f64, f64, f64, f64, SpectralField, SpectralField)>,
}

impl Accumulator {
    pub(crate) fn new(t0: f64, energy: f64, like: &SpectralField) -> Self {
        Self {
            t0,
            t_last: t0,
            weight: 0.0,
            u: 0.0,
            energy: 0.0,
            enstrophy: 0.0,
            injection: 0.0,
            energy_start: energy,
            energy_end: energy,
            field: like.scaled(0.0),
            advection: like.scaled(0.0),
            last: None,
        }
    }

    /// Adds the sample at time `t`; `h` is the advective acceleration.
    pub(crate) fn push(&mut self, t: f64, sample: (f64, f64, f64, f64), u: &SpectralField, h: &SpectralField) {
        let (uu, e, ens, inj) = sample;
        if let Some((lu, le, lens, linj, lf, lh)) = self.last.take() {
            let w = 0.5 * (t - self.t_last);
            self.u += w * (uu + lu);
            self.energy += w * (e + le);
            self.enstrophy += w * (ens + lens);
            self.injection += w * (inj + linj);
            self.field.axpy(w, &lf).expect("same space");
            self.field.axpy(w, u).expect("same space");
            self.advection.axpy(w, &lh).expect("same space");
            self.advection.axpy(w, h).expect("same space");
            self.weight += 2.0 * w;
        }
        self.t_last = t;
        self.energy_end = e;
        self.last = Some((uu, e, ens, inj, u.clone(), h.clone()));
    }
}
