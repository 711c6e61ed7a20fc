//! Closed-form rigorous estimates for statistically stationary channel flow.
//!
//! Two pressure regimes are distinguished by the threshold
//! `P* = 27√2 π² ν² L_x / (4 h³)`; below it the background-flow lower bounds
//! use a ramp of width `h/3`, above it a boundary layer thinning like `P^{-1/2}`.
//! At `P = P*` both branches coincide and the low branch is used.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ChannelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PressureRegime {
    pub threshold_p: f64,
    pub regime: Regime,
}

/// `P* = 27√2 π² ν² L_x / (4 h³)`.
pub fn threshold_pressure(p: &ChannelParams) -> f64 {
    27.0 * SQRT_2 * PI * PI * p.nu * p.nu * p.lx / (4.0 * p.h.powi(3))
}

pub fn pressure_regime(p: &ChannelParams) -> PressureRegime {
    let threshold_p = threshold_pressure(p);
    let regime = if p.p <= threshold_p {
        Regime::Low
    } else {
        Regime::High
    };
    PressureRegime {
        threshold_p,
        regime,
    }
}

/// `U ≤ √3 h² P / (6 π ν L_x)`.
pub fn mean_velocity_upper(p: &ChannelParams) -> f64 {
    3f64.sqrt() * p.h * p.h * p.p / (6.0 * PI * p.nu * p.lx)
}

/// `√2 π² ν / (2h)`, the boundary-layer deficit of the high-pressure branch.
fn high_branch_deficit(p: &ChannelParams) -> f64 {
    SQRT_2 * PI * PI * p.nu / (2.0 * p.h)
}

/// Low-pressure lower bound `(2/27) h² P / (ν L_x)`, evaluated at any `P`.
pub fn mean_velocity_lower_low_branch(p: &ChannelParams) -> f64 {
    2.0 / 27.0 * p.h * p.h * p.p / (p.nu * p.lx)
}

/// High-pressure lower bound `2^{5/4}π/3^{3/2} (h/L_x)^{1/2} P^{1/2} − √2π²ν/(2h)`,
/// evaluated at any `P` (not clamped).
pub fn mean_velocity_lower_high_branch(p: &ChannelParams) -> f64 {
    2f64.powf(1.25) * PI / 3f64.powf(1.5) * (p.h / p.lx).sqrt() * p.p.sqrt() - high_branch_deficit(p)
}

/// Lower bound on the mean longitudinal velocity, branch chosen by regime.
/// The high branch is clamped at zero.
pub fn mean_velocity_lower(p: &ChannelParams) -> f64 {
    match pressure_regime(p).regime {
        Regime::Low => mean_velocity_lower_low_branch(p),
        Regime::High => mean_velocity_lower_high_branch(p).max(0.0),
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value })
    }
}

/// `C_f ≥ 2π√3 / Re`.
pub fn cf_lower(re: f64) -> Result<f64> {
    require_positive("Re", re)?;
    Ok(2.0 * PI * 3f64.sqrt() / re)
}

/// Leading constant of the high-pressure friction bound, `27√2/(8π²)`.
pub fn cf_upper_asymptote() -> f64 {
    27.0 * SQRT_2 / (8.0 * PI * PI)
}

/// `C_f ≤ 27/(2 Re)` (low) or `27√2/(8π²) (1 + √2π²/(2 Re))²` (high).
pub fn cf_upper(p: &ChannelParams, re: f64) -> Result<f64> {
    require_positive("Re", re)?;
    Ok(match pressure_regime(p).regime {
        Regime::Low => 27.0 / (2.0 * re),
        Regime::High => {
            let t = 1.0 + SQRT_2 * PI * PI / (2.0 * re);
            cf_upper_asymptote() * t * t
        }
    })
}

/// Lower bound on the dissipation rate: `ε ≥ (P/L_x) · U_lower` on both branches.
///
/// Low branch: `(2/27) h² P² / (ν L_x²)`. High branch:
/// `2^{5/4}π/3^{3/2} h^{1/2} P^{3/2} / L_x^{3/2} − √2π²ν P/(2 h L_x)`.
pub fn dissipation_lower(p: &ChannelParams) -> f64 {
    p.forcing() * mean_velocity_lower(p)
}

/// `ε ≤ √3 h² P² / (6 π ν L_x²)`.
pub fn dissipation_upper(p: &ChannelParams) -> f64 {
    3f64.sqrt() * p.h * p.h * p.p * p.p / (6.0 * PI * p.nu * p.lx * p.lx)
}

/// Energy-balance bound `ε ≤ U P / L_x`.
pub fn dissipation_pressure_bound(u: f64, p: &ChannelParams) -> f64 {
    u * p.forcing()
}

/// Leading constant `3/(2^{5/2}π²)` of [`kolmogorov_coefficient`].
pub fn kolmogorov_asymptote() -> f64 {
    3.0 / (2f64.powf(2.5) * PI * PI)
}

/// `c(Re) = 3/(2^{5/2}π²) + 27π/(4 Re) + 27π²/(2^{7/2} Re²)` in `ε ≤ c(Re) U³/h`,
/// stated for `P ≥ P*`.
pub fn kolmogorov_coefficient(re: f64) -> Result<f64> {
    require_positive("Re", re)?;
    Ok(kolmogorov_asymptote() + 27.0 * PI / (4.0 * re) + 27.0 * PI * PI / (2f64.powf(3.5) * re * re))
}

/// Coefficient obtained by squaring the high-branch velocity bound directly:
/// `c(Re) = 27/(2^{5/2}π²) (1 + √2π²/(2 Re))²`, i.e. `ε ≤ U P/L_x ≤ c U³/h`.
///
/// Its leading term equals [`cf_upper_asymptote`]; the coefficients of
/// [`kolmogorov_coefficient`] do not all follow from that squaring.
pub fn kolmogorov_coefficient_squared_branch(re: f64) -> Result<f64> {
    require_positive("Re", re)?;
    let t = 1.0 + SQRT_2 * PI * PI / (2.0 * re);
    Ok(cf_upper_asymptote() * t * t)
}

/// `e ≤ h⁴ P² / (24 π² ν² L_x²)`.
pub fn energy_upper(p: &ChannelParams) -> f64 {
    let a = p.h * p.h / (p.nu * p.lx);
    a * a * p.p * p.p / (24.0 * PI * PI)
}

/// Kinetic-energy lower bound from the Reynolds equation tested against
/// `A^{-1} f_P`.
///
/// With `r = ⟨|u|₀²⟩^{1/2}` the estimate reads `a r² + b r ≥ c` for
/// `a = h/4`, `b = ν (L_x L_y h)^{1/2}`, `c = L_y h³ P / 12`; the positive root
/// bounds `r` from below and `e = r² / (2 L_x L_y h)`.
pub fn energy_lower(p: &ChannelParams) -> f64 {
    let a = p.h / 4.0;
    let b = p.nu * p.volume().sqrt();
    let c = p.ly * p.h.powi(3) * p.p / 12.0;
    // b + √(b²+4ac) form avoids cancellation when 4ac ≪ b².
    let r = 2.0 * c / (b + (b * b + 4.0 * a * c).sqrt());
    r * r / (2.0 * p.volume())
}

/// All closed-form estimates for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    pub u_upper: f64,
    pub u_lower: f64,
    /// `C_f` lower bound evaluated at `Re(u_upper)`.
    pub cf_lower: f64,
    /// `C_f` upper bound evaluated at `Re(u_lower)`; infinite when `u_lower = 0`.
    pub cf_upper: f64,
    /// Leading constant of the high-regime friction bound.
    pub cf_upper_asymptote: f64,
    pub eps_lower: f64,
    pub eps_upper: f64,
    pub e_upper: f64,
    pub e_lower: f64,
    /// Kolmogorov coefficient at `Re(u_lower)` (infinite when `u_lower = 0`).
    pub kolmogorov_coeff: f64,
    pub kolmogorov_asymptote: f64,
    pub threshold_p: f64,
    pub regime: Regime,
    pub grashof: f64,
}

impl BoundsReport {
    pub fn new(p: &ChannelParams) -> Self {
        let regime = pressure_regime(p);
        let u_upper = mean_velocity_upper(p);
        let u_lower = mean_velocity_lower(p);
        let re_hi = crate::params::reynolds(u_upper, p);
        let re_lo = crate::params::reynolds(u_lower, p);
        Self {
            u_upper,
            u_lower,
            cf_lower: cf_lower(re_hi).unwrap_or(f64::INFINITY),
            cf_upper: cf_upper(p, re_lo).unwrap_or(f64::INFINITY),
            cf_upper_asymptote: cf_upper_asymptote(),
            eps_lower: dissipation_lower(p),
            eps_upper: dissipation_upper(p),
            e_upper: energy_upper(p),
            e_lower: energy_lower(p),
            kolmogorov_coeff: kolmogorov_coefficient(re_lo).unwrap_or(f64::INFINITY),
            kolmogorov_asymptote: kolmogorov_asymptote(),
            threshold_p: regime.threshold_p,
            regime: regime.regime,
            grashof: crate::params::grashof(p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> ChannelParams {
        ChannelParams::unit()
    }

    #[test]
    fn regime_threshold() {
        let r = pressure_regime(&unit());
        assert_relative_eq!(r.threshold_p, 94.215, epsilon = 1e-3);
        assert_eq!(r.regime, Regime::Low);
        let at = unit().with_pressure(r.threshold_p).unwrap();
        assert_eq!(pressure_regime(&at).regime, Regime::Low);
        let high = unit().with_pressure(100.0).unwrap();
        assert_eq!(pressure_regime(&high).regime, Regime::High);
    }

    #[test]
    fn velocity_bounds_unit() {
        assert_relative_eq!(mean_velocity_upper(&unit()), 0.091_888_1, epsilon = 1e-7);
        assert_relative_eq!(mean_velocity_upper(&unit()), 3f64.sqrt() / (6.0 * PI), max_relative = 1e-15);
        assert_relative_eq!(mean_velocity_lower(&unit()), 2.0 / 27.0, max_relative = 1e-15);
        let tripled = unit().with_pressure(3.0).unwrap();
        assert_relative_eq!(mean_velocity_upper(&tripled), 3.0 * mean_velocity_upper(&unit()), max_relative = 1e-15);
    }

    #[test]
    fn branches_meet_at_threshold() {
        let p = unit().with_pressure(threshold_pressure(&unit())).unwrap();
        let lo = mean_velocity_lower_low_branch(&p);
        let hi = mean_velocity_lower_high_branch(&p);
        assert_relative_eq!(lo, hi, max_relative = 1e-12);
        assert_relative_eq!(lo, SQRT_2 * PI * PI / 2.0, max_relative = 1e-12);
        assert_relative_eq!(lo, 6.9789, epsilon = 1e-4);
    }

    #[test]
    fn friction_constants() {
        assert_relative_eq!(cf_lower(1.0).unwrap(), 10.882_796_185, epsilon = 1e-8);
        assert_relative_eq!(cf_upper(&unit(), 1.0).unwrap(), 13.5);
        assert_relative_eq!(cf_upper_asymptote(), 0.483_603_048, epsilon = 1e-9);
        let high = unit().with_pressure(1000.0).unwrap();
        assert_relative_eq!(cf_upper(&high, 10.0).unwrap(), 1.394_139_715, epsilon = 1e-9);
        assert_relative_eq!(cf_lower(2.0).unwrap(), cf_lower(1.0).unwrap() / 2.0);
        assert!(cf_lower(0.0).is_err());
        assert!(cf_upper(&unit(), -1.0).is_err());
        // Poiseuille at unit params: Re = 1/12, Cf = 144.
        assert_relative_eq!(cf_lower(1.0 / 12.0).unwrap(), 130.59, epsilon = 1e-2);
    }

    #[test]
    fn dissipation_bounds_unit() {
        let p = unit();
        assert_relative_eq!(dissipation_lower(&p), 2.0 / 27.0, max_relative = 1e-15);
        assert_relative_eq!(dissipation_upper(&p), 0.091_888_1, epsilon = 1e-7);
        assert_relative_eq!(dissipation_upper(&p), mean_velocity_upper(&p) * p.p / p.lx, max_relative = 1e-15);
        assert_relative_eq!(dissipation_pressure_bound(1.0 / 12.0, &p), 1.0 / 12.0);
        assert_eq!(dissipation_pressure_bound(0.0, &p), 0.0);
        let q = ChannelParams::new(2.0, 1.0, 1.0, 0.1, 3.0).unwrap();
        assert_relative_eq!(dissipation_lower(&q), mean_velocity_lower(&q) * q.p / q.lx, max_relative = 1e-15);
        assert_relative_eq!(
            dissipation_pressure_bound(0.4, &q.with_pressure(6.0).unwrap()),
            2.0 * dissipation_pressure_bound(0.4, &q)
        );
    }

    #[test]
    fn dissipation_branches_continuous() {
        let base = ChannelParams::new(2.0, 1.5, 0.7, 0.05, 1.0).unwrap();
        let p = base.with_pressure(threshold_pressure(&base)).unwrap();
        let lo = p.forcing() * mean_velocity_lower_low_branch(&p);
        let hi = p.forcing() * mean_velocity_lower_high_branch(&p);
        assert_relative_eq!(lo, hi, max_relative = 1e-12);
    }

    #[test]
    fn kolmogorov_values() {
        assert_relative_eq!(kolmogorov_asymptote(), 0.053_733_672, epsilon = 1e-9);
        let c = kolmogorov_coefficient(100.0).unwrap();
        assert_relative_eq!(c, 0.268_146_543, epsilon = 1e-9);
        assert!(kolmogorov_coefficient(0.0).is_err());
        let mut prev = f64::INFINITY;
        for i in 1..200 {
            let c = kolmogorov_coefficient(i as f64 * 0.7).unwrap();
            assert!(c < prev);
            prev = c;
        }
        assert_relative_eq!(
            kolmogorov_coefficient_squared_branch(1e12).unwrap(),
            cf_upper_asymptote(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn energy_bounds_unit() {
        let p = unit();
        assert_relative_eq!(energy_upper(&p), 1.0 / (24.0 * PI * PI), max_relative = 1e-15);
        assert_relative_eq!(energy_upper(&p), 0.004_221_716, epsilon = 1e-9);
        assert_relative_eq!(energy_lower(&p), 0.003_334_66, epsilon = 1e-8);
        let doubled = p.with_pressure(2.0).unwrap();
        assert_relative_eq!(energy_upper(&doubled), 4.0 * energy_upper(&p), max_relative = 1e-15);
    }

    #[test]
    fn energy_lower_large_pressure_asymptote() {
        let base = ChannelParams::new(1.5, 0.8, 1.2, 0.01, 1.0).unwrap();
        let mut prev_err = f64::INFINITY;
        for &pr in &[1e2, 1e4, 1e6, 1e8] {
            let p = base.with_pressure(pr).unwrap();
            let lead = p.h * p.p / (6.0 * p.lx);
            let err = (energy_lower(&p) / lead - 1.0).abs();
            assert!(err < prev_err);
            prev_err = err;
        }
        assert!(prev_err < 1e-3);
    }

    #[test]
    fn high_branch_leading_and_first_order_terms() {
        // cf_upper(High) = A + A√2π²/Re + O(Re⁻²); Richardson on Re·(cf − A).
        let p = unit().with_pressure(1e4).unwrap();
        let a = cf_upper_asymptote();
        let g = |re: f64| re * (cf_upper(&p, re).unwrap() - a);
        let (r1, r2) = (1e4, 2e4);
        let extrapolated = 2.0 * g(r2) - g(r1);
        assert_relative_eq!(extrapolated, a * SQRT_2 * PI * PI, max_relative = 1e-8);
    }

    #[test]
    fn report_is_ordered() {
        for &pr in &[0.01, 1.0, 50.0, 94.0, 95.0, 1e3, 1e6] {
            let p = unit().with_pressure(pr).unwrap();
            let r = BoundsReport::new(&p);
            assert!(r.u_lower <= r.u_upper);
            assert!(r.eps_lower <= r.eps_upper);
            assert!(r.e_lower <= r.e_upper);
            assert!(r.cf_lower <= r.cf_upper);
        }
    }

    #[test]
    fn report_serializes_flat() {
        let r = BoundsReport::new(&unit());
        let v = serde_json::to_value(r).unwrap();
        assert_eq!(v["regime"], "Low");
        assert!((v["u_upper"].as_f64().unwrap() - 0.091_888_1).abs() < 1e-7);
        for key in ["u_lower", "cf_lower", "cf_upper", "eps_lower", "eps_upper", "e_upper", "e_lower", "kolmogorov_coeff"] {
            assert!(v[key].is_number(), "{key}");
        }
    }
}
