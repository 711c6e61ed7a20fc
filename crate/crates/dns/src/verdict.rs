//! Checks of the rigorous bounds against the finite-time averages of a run.
//!
//! The bounds hold for long-time averages. Over a window of length `T` the
//! energy identity carries the extra term `(|u(t₁)|₀² − |u(t₀)|₀²)/(2T)`; its
//! size relative to the injected power,
//! `s = |Δ|u|₀²| / (2 T L_x L_y h ⟨(f,u)⟩/(L_x L_y h))`, is the O(1/T)
//! allowance. Bounds on quantities of degree up to three in `U` are widened
//! by the factor `(1 ± 3s)`; the discrete budget residual of the window is
//! added to `s` so that time-discretisation error is accounted for as well.

use serde::Serialize;

use chanlab_core::bounds::{self, Regime};
use chanlab_core::injection::tail_bound_exact;
use chanlab_core::params::{reynolds, skin_friction};
use chanlab_core::ChannelParams;

use crate::stats::AveragesRecord;

/// Relative slack kept in every comparison for round-off.
pub const ROUND_OFF: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Relative widening applied to both limits.
    pub allowance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictMatrix {
    pub regime: Regime,
    pub rows: Vec<Verdict>,
}

impl VerdictMatrix {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&Verdict> {
        self.rows.iter().filter(|r| !r.pass).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("check,value,lower,upper,allowance,pass\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                r.check,
                r.value,
                r.lower,
                r.upper,
                r.allowance,
                if r.pass { "PASS" } else { "FAIL" }
            ));
        }
        s
    }
}

fn row(check: &str, value: f64, lower: f64, upper: f64, allowance: f64) -> Verdict {
    let widen = |x: f64, sign: f64| if x.is_finite() { x + sign * allowance * x.abs() } else { x };
    let lo = widen(lower, -1.0);
    let hi = widen(upper, 1.0);
    Verdict {
        check: check.into(),
        value,
        lower,
        upper,
        allowance,
        pass: value.is_finite() && value >= lo && value <= hi,
    }
}

/// The O(1/T) relative allowance `s` described in the module docs.
pub fn window_allowance(avg: &AveragesRecord, p: &ChannelParams) -> f64 {
    let drift = (avg.energy_end - avg.energy_start).abs() / (2.0 * avg.t * p.volume());
    (drift + avg.budget_residual) / avg.injection_avg.abs().max(f64::MIN_POSITIVE)
}

pub fn verdict_matrix(p: &ChannelParams, avg: &AveragesRecord) -> VerdictMatrix {
    let s = window_allowance(avg, p);
    let a = 3.0 * s + ROUND_OFF;
    let regime = bounds::pressure_regime(p).regime;
    let u = avg.u_t;
    let eps = avg.dissipation_avg;
    let e = avg.energy_avg / (2.0 * p.volume());
    let re = reynolds(u, p);
    let cf = skin_friction(u, p).unwrap_or(f64::INFINITY);
    let mut rows = vec![
        row("energy_inequality", eps, f64::NEG_INFINITY, p.forcing() * u, a),
        row("mean_velocity", u, bounds::mean_velocity_lower(p), bounds::mean_velocity_upper(p), a),
        row("dissipation", eps, bounds::dissipation_lower(p), bounds::dissipation_upper(p), a),
        row("energy", e, bounds::energy_lower(p), bounds::energy_upper(p), a),
        row(
            "skin_friction",
            cf,
            bounds::cf_lower(re).unwrap_or(f64::INFINITY),
            bounds::cf_upper(p, re).unwrap_or(f64::NEG_INFINITY),
            a,
        ),
    ];
    if regime == Regime::High {
        let c = bounds::kolmogorov_coefficient(re).unwrap_or(f64::NEG_INFINITY);
        rows.push(row("kolmogorov", eps, f64::NEG_INFINITY, c * u.powi(3) / p.h, a));
    }
    // Largest ratio of averaged tail injection to its bound over the spectrum.
    // At κ₁ the bound is attained by Poiseuille flow, so the ratio is 1 there
    // up to the window allowance.
    let tail_ratio = avg
        .shells_avg
        .kappas
        .iter()
        .map(|&k| {
            let bound = tail_bound_exact(k, p, eps).unwrap_or(f64::NAN);
            avg.shells_avg.tail(k).abs() / bound
        })
        .fold(0.0, f64::max);
    rows.push(row("tail_injection", tail_ratio, f64::NEG_INFINITY, 1.0, a));
    rows.push(row(
        "galerkin_monotone",
        avg.galerkin.monotone_defect,
        f64::NEG_INFINITY,
        ROUND_OFF,
        0.0,
    ));
    rows.push(row("galerkin_tail", avg.galerkin.tail_ratio, f64::NEG_INFINITY, 1.0, ROUND_OFF));
    VerdictMatrix { regime, rows }
}
