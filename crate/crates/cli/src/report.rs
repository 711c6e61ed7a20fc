//! Closed-form reports: bounds, Poiseuille table, injection spectrum.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use chanlab_core::background::{grid_search_optimum, narrow_ramp_parameters, optimal_parameters};
use chanlab_core::bounds::{self, BoundsReport};
use chanlab_core::injection::{spectrum_rows, write_spectrum_csv, ForcingSpectrum};
use chanlab_core::params::attractor_energy_bound;
use chanlab_core::spectral::snapshot;
use chanlab_core::{poiseuille, ChannelParams};

use crate::error::{usage, Result};
use crate::params_args::ParamArgs;
use crate::{f17, open_output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Also report the narrow-ramp profile and a brute-force optimum.
    #[arg(long)]
    pub diagnostics: bool,
    /// Output file (stdout when absent).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct SandwichCheck {
    check: &'static str,
    lower: f64,
    value: f64,
    upper: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct Diagnostics {
    narrow_ramp_u_lower: f64,
    narrow_ramp_constraint: f64,
    optimal_v: f64,
    optimal_delta: f64,
    grid_search_u_lower: f64,
}

#[derive(Debug, Serialize)]
struct FullReport {
    params: ChannelParams,
    #[serde(flatten)]
    bounds: BoundsReport,
    poiseuille: poiseuille::PoiseuilleQuantities,
    sandwich: Vec<SandwichCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<Diagnostics>,
}

fn sandwich(p: &ChannelParams, r: &BoundsReport) -> Vec<SandwichCheck> {
    let q = poiseuille::quantities(p);
    let inf = f64::INFINITY;
    let mut rows = vec![
        ("mean_velocity", r.u_lower, q.u, r.u_upper),
        ("energy", r.e_lower, q.e, r.e_upper),
        ("dissipation", r.eps_lower, q.eps, r.eps_upper),
        (
            "skin_friction",
            bounds::cf_lower(q.re).unwrap_or(0.0),
            q.cf,
            bounds::cf_upper(p, q.re).unwrap_or(inf),
        ),
        ("attractor_energy", 0.0, q.energy_total, attractor_energy_bound(p)),
    ];
    rows.push(("dissipation_balance", 0.0, q.eps, bounds::dissipation_pressure_bound(q.u, p) * (1.0 + 1e-14)));
    rows.into_iter()
        .map(|(check, lower, value, upper)| SandwichCheck {
            check,
            lower,
            value,
            upper,
            pass: lower <= value && value <= upper,
        })
        .collect()
}

pub fn bounds_report(args: &BoundsArgs) -> Result<()> {
    let p = args.params.resolve()?;
    let bounds = BoundsReport::new(&p);
    let diagnostics = args.diagnostics.then(|| {
        let narrow = narrow_ramp_parameters(&p);
        let opt = optimal_parameters(&p);
        Diagnostics {
            narrow_ramp_u_lower: narrow.lower_bound_functional(),
            narrow_ramp_constraint: narrow.constraint_coefficient(),
            optimal_v: opt.v,
            optimal_delta: opt.delta,
            grid_search_u_lower: grid_search_optimum(&p, 20_000).lower_bound_functional(),
        }
    });
    let report = FullReport {
        params: p,
        bounds,
        poiseuille: poiseuille::quantities(&p),
        sandwich: sandwich(&p, &bounds),
        diagnostics,
    };
    let mut w = open_output(args.out.as_ref())?;
    match args.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &report).map_err(|e| usage(e.to_string()))?;
            writeln!(w)?;
        }
        Format::Csv => {
            writeln!(w, "key,value")?;
            let b = &report.bounds;
            let numbers = [
                ("lx", p.lx),
                ("ly", p.ly),
                ("h", p.h),
                ("nu", p.nu),
                ("p", p.p),
                ("u_upper", b.u_upper),
                ("u_lower", b.u_lower),
                ("cf_lower", b.cf_lower),
                ("cf_upper", b.cf_upper),
                ("cf_upper_asymptote", b.cf_upper_asymptote),
                ("eps_lower", b.eps_lower),
                ("eps_upper", b.eps_upper),
                ("e_upper", b.e_upper),
                ("e_lower", b.e_lower),
                ("kolmogorov_coeff", b.kolmogorov_coeff),
                ("kolmogorov_asymptote", b.kolmogorov_asymptote),
                ("threshold_p", b.threshold_p),
                ("grashof", b.grashof),
            ];
            for (k, v) in numbers {
                writeln!(w, "{k},{}", f17(v))?;
            }
            writeln!(w, "regime,{:?}", b.regime)?;
            for s in &report.sandwich {
                writeln!(w, "sandwich_{},{}", s.check, if s.pass { "PASS" } else { "FAIL" })?;
            }
            if let Some(d) = &report.diagnostics {
                writeln!(w, "narrow_ramp_u_lower,{}", f17(d.narrow_ramp_u_lower))?;
                writeln!(w, "narrow_ramp_constraint,{}", f17(d.narrow_ramp_constraint))?;
                writeln!(w, "optimal_v,{}", f17(d.optimal_v))?;
                writeln!(w, "optimal_delta,{}", f17(d.optimal_delta))?;
                writeln!(w, "grid_search_u_lower,{}", f17(d.grid_search_u_lower))?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct PoiseuilleArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Gauss–Legendre points for the independent quadrature.
    #[arg(long, default_value_t = 8)]
    pub quad_points: usize,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Closed forms next to quadrature. The extra `eps_factor_6` row is the
/// dissipation with `6` in place of `12` in the denominator, kept to show
/// that it fails both the quadrature and the balance `ε = U P / L_x`.
pub fn poiseuille_check(args: &PoiseuilleArgs) -> Result<()> {
    let p = args.params.resolve()?;
    let a = poiseuille::quantities(&p);
    let q = poiseuille::quadrature_quantities(&p, args.quad_points)?;
    let alt = 2.0 * a.eps;
    let rows = [
        ("U", a.u, q.u),
        ("e", a.e, q.e),
        ("eps", a.eps, q.eps),
        ("Re", a.re, q.re),
        ("Cf", a.cf, q.cf),
        ("Cf_Re", a.cf * a.re, q.cf * q.re),
        ("energy_total", a.energy_total, q.energy_total),
        ("enstrophy_total", a.enstrophy_total, q.enstrophy_total),
        ("eps_balance", a.u * p.forcing(), q.eps),
        ("eps_factor_6", alt, q.eps),
    ];
    let mut w = open_output(args.out.as_ref())?;
    writeln!(w, "quantity,closed_form,quadrature,relative_difference,consistent")?;
    for (name, c, quad) in rows {
        let rel = (c - quad).abs() / quad.abs();
        writeln!(w, "{name},{},{},{},{}", f17(c), f17(quad), f17(rel), rel <= 1e-12)?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Largest mode index; only odd indices carry forcing.
    #[arg(long, default_value_t = 99)]
    pub kmax: u64,
    /// Snapshot or restart file for the shell injections (Poiseuille when absent).
    #[arg(long)]
    pub field: Option<PathBuf>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

pub fn injection_spectrum(args: &SpectrumArgs) -> Result<()> {
    if args.kmax == 0 {
        return Err(usage("--kmax must be at least 1"));
    }
    let p = args.params.resolve()?;
    let field = match &args.field {
        Some(path) => {
            let u = snapshot::load(path)?;
            if u.params() != &p {
                return Err(usage(format!("{} holds a different channel", path.display())));
            }
            Some(u)
        }
        None => None,
    };
    let rows = spectrum_rows(&p, args.kmax, field.as_ref())?;
    let mut w = open_output(args.out.as_ref())?;
    write_spectrum_csv(&mut w, &rows)?;
    let closure = ForcingSpectrum::new(&p, args.kmax).oracle_series();
    eprintln!(
        "series closure: partial {} + analytic tail {} = {} (target {}, relative error {:.2e})",
        f17(closure.partial),
        f17(closure.analytic_tail),
        f17(closure.total),
        f17(closure.target),
        closure.relative_error()
    );
    Ok(())
}
