//! Channel parameters, derived wavenumbers and the global characteristic
//! quantities (mean velocity, Reynolds number, skin friction).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometry, viscosity and driving pressure of a periodic channel.
///
/// The domain is `(0, lx) × (0, ly) × (0, h)` with no-slip walls at `z = 0`
/// and `z = h`. The flow is driven by the uniform body force `(p / lx) e₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelParams {
    pub lx: f64,
    pub ly: f64,
    pub h: f64,
    pub nu: f64,
    /// Kinematic pressure drop over one streamwise period.
    pub p: f64,
}

impl ChannelParams {
    pub fn new(lx: f64, ly: f64, h: f64, nu: f64, p: f64) -> Result<Self> {
        let params = Self { lx, ly, h, nu, p };
        params.validate()?;
        Ok(params)
    }

    /// Unit box, unit viscosity, unit pressure drop.
    pub fn unit() -> Self {
        Self {
            lx: 1.0,
            ly: 1.0,
            h: 1.0,
            nu: 1.0,
            p: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("lx", self.lx),
            ("ly", self.ly),
            ("h", self.h),
            ("nu", self.nu),
            ("p", self.p),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParam { name, value });
            }
        }
        Ok(())
    }

    /// Same channel with a different pressure drop.
    pub fn with_pressure(&self, p: f64) -> Result<Self> {
        Self::new(self.lx, self.ly, self.h, self.nu, p)
    }

    /// Magnitude of the body force `P / L_x`.
    pub fn forcing(&self) -> f64 {
        self.p / self.lx
    }

    pub fn volume(&self) -> f64 {
        self.lx * self.ly * self.h
    }

    pub fn derived(&self) -> DerivedNumbers {
        DerivedNumbers::new(self)
    }
}

/// Wavenumbers and the Grashof number attached to a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedNumbers {
    /// Smallest Stokes eigenvalue `π²/h²`.
    pub lambda1: f64,
    /// `π/h`.
    pub kappa1: f64,
    /// Macroscale wavenumber `1/h`.
    pub kappa0: f64,
    pub grashof: f64,
}

impl DerivedNumbers {
    pub fn new(p: &ChannelParams) -> Self {
        let kappa1 = PI / p.h;
        Self {
            lambda1: kappa1 * kappa1,
            kappa1,
            kappa0: 1.0 / p.h,
            grashof: grashof(p),
        }
    }
}

/// Mean characteristic quantities of a flow (or of a finite-time average).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowDiagnostics {
    /// Mean longitudinal velocity.
    #[serde(rename = "U")]
    pub u: f64,
    /// Kinetic energy per unit mass.
    pub e: f64,
    /// Energy dissipation rate per unit mass.
    pub eps: f64,
    #[serde(rename = "Re")]
    pub re: f64,
    #[serde(rename = "Cf")]
    pub cf: f64,
}

impl FlowDiagnostics {
    /// Builds the diagnostics from `U`, `e`, `ε`; `Cf` is NaN when `U = 0`.
    pub fn new(u: f64, e: f64, eps: f64, p: &ChannelParams) -> Self {
        Self {
            u,
            e,
            eps,
            re: reynolds(u.max(0.0), p),
            cf: skin_friction(u, p).unwrap_or(f64::NAN),
        }
    }
}

/// Grashof number `G* = √3 L_y^{1/2} h² P / (6 π^{1/2} ν² L_x^{1/2})`.
pub fn grashof(p: &ChannelParams) -> f64 {
    3f64.sqrt() * p.ly.sqrt() * p.h * p.h * p.p / (6.0 * PI.sqrt() * p.nu * p.nu * p.lx.sqrt())
}

/// `|A^{-1/2} f_P|₀² = (f_P, A^{-1} f_P) = L_y h³ P² / (12 L_x)`.
pub fn forcing_dual_norm_sq(p: &ChannelParams) -> f64 {
    p.ly * p.h.powi(3) * p.p * p.p / (12.0 * p.lx)
}

/// Grashof number from its definition `h^{1/2} |A^{-1/2} f_P|₀ / (ν² π^{1/2})`.
pub fn grashof_from_forcing(p: &ChannelParams) -> f64 {
    p.h.sqrt() * forcing_dual_norm_sq(p).sqrt() / (p.nu * p.nu * PI.sqrt())
}

/// Bound on `|u|₀²` over the weak attractor: `ν² h G*² / π = L_y h⁵ P² / (12 π² ν² L_x)`.
pub fn attractor_energy_bound(p: &ChannelParams) -> f64 {
    // ν²h/π · G*² with G*² expanded; all factors positive.
    let ratio = p.h.powi(5) / (p.nu * p.nu) * (p.ly / p.lx);
    ratio * p.p * p.p / (12.0 * PI * PI)
}

/// Skin friction coefficient `C_f = P h / (L_x U²)`.
pub fn skin_friction(u: f64, p: &ChannelParams) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::NonPositive {
            name: "mean velocity",
            value: u,
        });
    }
    Ok(p.p * p.h / (p.lx * u * u))
}

/// Reynolds number `U h / ν`.
pub fn reynolds(u: f64, p: &ChannelParams) -> f64 {
    u * p.h / p.nu
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn grashof_unit() {
        let g = grashof(&ChannelParams::unit());
        assert_relative_eq!(g, 3f64.sqrt() / (6.0 * PI.sqrt()), max_relative = 1e-15);
        assert_relative_eq!(g, 0.162_867_504, epsilon = 1e-9);
    }

    #[test]
    fn grashof_linear_in_pressure() {
        let p = ChannelParams::new(2.0, 3.0, 0.5, 0.1, 1.7).unwrap();
        let p2 = p.with_pressure(3.4).unwrap();
        assert_relative_eq!(grashof(&p2), 2.0 * grashof(&p), max_relative = 1e-15);
    }

    #[test]
    fn attractor_bound_unit_two_routes() {
        let p = ChannelParams::unit();
        let direct = attractor_energy_bound(&p);
        let via_grashof = p.nu * p.nu * p.h / PI * grashof(&p).powi(2);
        assert_relative_eq!(direct, 1.0 / (12.0 * PI * PI), max_relative = 1e-15);
        assert_relative_eq!(direct, via_grashof, max_relative = 1e-14);
        assert_relative_eq!(direct, 0.008_443_4, epsilon = 1e-7);
    }

    #[test]
    fn attractor_bound_quadratic() {
        let p = ChannelParams::new(1.3, 0.7, 2.0, 0.3, 5.0).unwrap();
        let q = p.with_pressure(15.0).unwrap();
        assert_relative_eq!(
            attractor_energy_bound(&q),
            9.0 * attractor_energy_bound(&p),
            max_relative = 1e-14
        );
    }

    #[test]
    fn friction_and_reynolds_examples() {
        let p = ChannelParams::unit();
        assert_relative_eq!(skin_friction(1.0 / 12.0, &p).unwrap(), 144.0, max_relative = 1e-14);
        assert_relative_eq!(reynolds(1.0 / 12.0, &p), 1.0 / 12.0);
        assert_eq!(reynolds(0.0, &p), 0.0);
        let cf1 = skin_friction(0.3, &p).unwrap();
        let cf2 = skin_friction(0.6, &p).unwrap();
        assert_relative_eq!(cf2, cf1 / 4.0, max_relative = 1e-15);
        let mut tall = p;
        tall.h = 2.0;
        assert_relative_eq!(reynolds(0.3, &tall), 2.0 * reynolds(0.3, &p));
    }

    #[test]
    fn nonpositive_velocity_rejected() {
        let p = ChannelParams::unit();
        assert!(skin_friction(0.0, &p).is_err());
        assert!(skin_friction(-1.0, &p).is_err());
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(ChannelParams::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, f64::NAN, 1.0, 1.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 1.0, f64::INFINITY).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, -1.0, 1.0).is_err());
    }

    fn positive() -> impl Strategy<Value = f64> {
        (-2.0f64..2.0).prop_map(|e| 10f64.powf(e))
    }

    proptest! {
        #[test]
        fn grashof_routes_agree(lx in positive(), ly in positive(), h in positive(),
                                nu in positive(), pr in positive()) {
            let p = ChannelParams::new(lx, ly, h, nu, pr).unwrap();
            let a = grashof(&p);
            let b = grashof_from_forcing(&p);
            prop_assert!(((a - b) / a).abs() < 1e-13);
        }

        #[test]
        fn cf_re_identity(u in positive(), lx in positive(), h in positive(),
                          nu in positive(), pr in positive()) {
            let p = ChannelParams::new(lx, 1.0, h, nu, pr).unwrap();
            let lhs = skin_friction(u, &p).unwrap() * reynolds(u, &p);
            let rhs = p.p * p.h * p.h / (p.lx * p.nu * u);
            prop_assert!(((lhs - rhs) / rhs).abs() < 1e-13);
        }

        // Length scale λ, time scale s: lengths ×λ, ν ×λ²/s, P ×λ²/s².
        #[test]
        fn dimensionless_outputs_invariant(lambda in positive(), s in positive(),
                                           lx in positive(), ly in positive(), h in positive(),
                                           nu in positive(), pr in positive()) {
            let p = ChannelParams::new(lx, ly, h, nu, pr).unwrap();
            let q = ChannelParams::new(lx * lambda, ly * lambda, h * lambda,
                                       nu * lambda * lambda / s,
                                       pr * lambda * lambda / (s * s)).unwrap();
            let u_p = p.p * p.h * p.h / (12.0 * p.nu * p.lx);
            let u_q = q.p * q.h * q.h / (12.0 * q.nu * q.lx);
            prop_assert!(((grashof(&p) - grashof(&q)) / grashof(&p)).abs() < 1e-12);
            prop_assert!(((reynolds(u_p, &p) - reynolds(u_q, &q)) / reynolds(u_p, &p)).abs() < 1e-12);
            let (cp, cq) = (skin_friction(u_p, &p).unwrap(), skin_friction(u_q, &q).unwrap());
            prop_assert!(((cp - cq) / cp).abs() < 1e-12);
        }
    }
}
