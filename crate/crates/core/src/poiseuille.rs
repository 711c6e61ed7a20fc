//! Plane Poiseuille flow `u = P z (h − z) / (2 ν L_x) e₁`, the exact steady
//! solution, with an independent quadrature route to its statistics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ChannelParams;
use crate::quadrature::{gauss_legendre_on, require_points};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoiseuilleQuantities {
    #[serde(rename = "U")]
    pub u: f64,
    pub e: f64,
    pub eps: f64,
    #[serde(rename = "Re")]
    pub re: f64,
    #[serde(rename = "Cf")]
    pub cf: f64,
    /// `‖u‖²`.
    pub enstrophy_total: f64,
    /// `|u|₀²`.
    pub energy_total: f64,
}

pub fn profile(z: f64, p: &ChannelParams) -> Result<f64> {
    if !(0.0..=p.h).contains(&z) {
        return Err(Error::OutOfChannel { z, h: p.h });
    }
    Ok(profile_unchecked(z, p))
}

pub(crate) fn profile_unchecked(z: f64, p: &ChannelParams) -> f64 {
    p.p * z * (p.h - z) / (2.0 * p.nu * p.lx)
}

/// `∂u₁/∂z = P (h − 2z) / (2 ν L_x)`.
pub fn profile_slope(z: f64, p: &ChannelParams) -> f64 {
    p.p * (p.h - 2.0 * z) / (2.0 * p.nu * p.lx)
}

/// Closed forms: `U = Ph²/(12νL_x)`, `e = h⁴P²/(240ν²L_x²)`,
/// `ε = h²P²/(12νL_x²)`, `Re = Ph³/(12ν²L_x)`, `C_f = 12/Re`.
pub fn quantities(p: &ChannelParams) -> PoiseuilleQuantities {
    let a = p.p / (p.nu * p.lx);
    let h = p.h;
    let area = p.lx * p.ly;
    let u = a * h * h / 12.0;
    let re = a * h.powi(3) / (12.0 * p.nu);
    PoiseuilleQuantities {
        u,
        e: a * a * h.powi(4) / 240.0,
        eps: p.nu * a * a * h * h / 12.0,
        re,
        cf: 12.0 / re,
        enstrophy_total: area * a * a * h.powi(3) / 12.0,
        energy_total: area * a * a * h.powi(5) / 120.0,
    }
}

/// The same quantities from `n`-point Gauss–Legendre integrals of the profile.
pub fn quadrature_quantities(p: &ChannelParams, n: usize) -> Result<PoiseuilleQuantities> {
    require_points(n, 4)?;
    let (z, w) = gauss_legendre_on(n, 0.0, p.h);
    let (mut flux, mut sq, mut grad) = (0.0, 0.0, 0.0);
    for (&zi, &wi) in z.iter().zip(&w) {
        let u = profile_unchecked(zi, p);
        let du = profile_slope(zi, p);
        flux += wi * u;
        sq += wi * u * u;
        grad += wi * du * du;
    }
    let area = p.lx * p.ly;
    let u = flux / p.h;
    let energy_total = area * sq;
    let enstrophy_total = area * grad;
    let re = u * p.h / p.nu;
    let cf = p.p * p.h / (p.lx * u * u);
    Ok(PoiseuilleQuantities {
        u,
        e: energy_total / (2.0 * p.volume()),
        eps: p.nu * enstrophy_total / p.volume(),
        re,
        cf,
        enstrophy_total,
        energy_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn profile_values() {
        let p = ChannelParams::unit();
        assert_eq!(profile(0.0, &p).unwrap(), 0.0);
        assert_eq!(profile(1.0, &p).unwrap(), 0.0);
        assert_relative_eq!(profile(0.5, &p).unwrap(), 0.125);
        assert_relative_eq!(profile(0.3, &p).unwrap(), profile(0.7, &p).unwrap(), max_relative = 1e-15);
        assert!(profile(-0.1, &p).is_err());
        assert!(profile(1.01, &p).is_err());
    }

    #[test]
    fn unit_quantities() {
        let q = quantities(&ChannelParams::unit());
        assert_relative_eq!(q.u, 1.0 / 12.0, max_relative = 1e-15);
        assert_relative_eq!(q.e, 1.0 / 240.0, max_relative = 1e-15);
        assert_relative_eq!(q.eps, 1.0 / 12.0, max_relative = 1e-15);
        assert_relative_eq!(q.re, 1.0 / 12.0, max_relative = 1e-15);
        assert_relative_eq!(q.cf, 144.0, max_relative = 1e-14);
        assert_relative_eq!(q.energy_total, 1.0 / 120.0, max_relative = 1e-15);
        assert_relative_eq!(q.enstrophy_total, 1.0 / 12.0, max_relative = 1e-15);
    }

    #[test]
    fn quadrature_unit() {
        let q = quadrature_quantities(&ChannelParams::unit(), 8).unwrap();
        assert!((q.e - 1.0 / 240.0).abs() < 1e-14);
        assert!((q.eps - 1.0 / 12.0).abs() < 1e-14);
        assert!((q.u - 1.0 / 12.0).abs() < 1e-14);
        assert!(quadrature_quantities(&ChannelParams::unit(), 3).is_err());
    }

    #[test]
    fn stationary_momentum_balance() {
        // −ν u'' = P/L_x via a centred difference on the quadratic (exact up to round-off).
        let p = ChannelParams::new(2.0, 1.0, 0.7, 0.03, 0.4).unwrap();
        let dz = 1e-3;
        for i in 1..10 {
            let z = 0.07 * i as f64;
            let upp = (profile(z + dz, &p).unwrap() - 2.0 * profile(z, &p).unwrap()
                + profile(z - dz, &p).unwrap())
                / (dz * dz);
            assert_relative_eq!(-p.nu * upp, p.forcing(), max_relative = 1e-6);
        }
    }

    fn positive() -> impl Strategy<Value = f64> {
        (-1.5f64..1.5).prop_map(|e| 10f64.powf(e))
    }

    proptest! {
        #[test]
        fn closed_form_matches_quadrature(lx in positive(), ly in positive(), h in positive(),
                                          nu in positive(), pr in positive(), n in 4usize..20) {
            let p = ChannelParams::new(lx, ly, h, nu, pr).unwrap();
            let a = quantities(&p);
            let b = quadrature_quantities(&p, n).unwrap();
            for (x, y) in [(a.u, b.u), (a.e, b.e), (a.eps, b.eps), (a.re, b.re), (a.cf, b.cf),
                           (a.energy_total, b.energy_total), (a.enstrophy_total, b.enstrophy_total)] {
                prop_assert!(((x - y) / x).abs() < 1e-13, "{x} vs {y}");
            }
        }

        #[test]
        fn identities(lx in positive(), ly in positive(), h in positive(),
                      nu in positive(), pr in positive()) {
            let p = ChannelParams::new(lx, ly, h, nu, pr).unwrap();
            let q = quantities(&p);
            prop_assert!((q.cf * q.re / 12.0 - 1.0).abs() < 1e-14);
            prop_assert!((q.eps / (q.u * p.forcing()) - 1.0).abs() < 1e-14);
            prop_assert!((q.e / (q.energy_total / (2.0 * p.volume())) - 1.0).abs() < 1e-14);
        }
    }
}
