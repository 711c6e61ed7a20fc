//! Piecewise-linear background flows and the lower bound on the mean velocity
//! they certify.
//!
//! The profile ramps from 0 to `V` over a layer of width `δ` at each wall.
//! Energy stability of the perturbation requires the quadratic form
//! `H_U(v) = ν‖v‖²/2 + b(v, U, v)` to be nonnegative; the half-slab Poincaré
//! inequality bounds the shear term by `√2 V δ / π² ‖v‖²`.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::bounds::{pressure_regime, Regime};
use crate::cheb::mat_vec_c;
use crate::error::{Error, Result};
use crate::params::ChannelParams;
use crate::quadrature::gauss_legendre_on;
use crate::spectral::SpectralField;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BackgroundProfile {
    pub v: f64,
    pub delta: f64,
    pub params: ChannelParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintReport {
    /// `ν/2 − √2 V δ / π²`.
    pub coefficient: f64,
    pub satisfied: bool,
    /// Smallest `H_U(v) / ‖v‖²` over the sampled fields.
    pub worst_sample_ratio: f64,
}

impl BackgroundProfile {
    pub fn new(v: f64, delta: f64, params: ChannelParams) -> Result<Self> {
        if !(v >= 0.0 && v.is_finite() && delta > 0.0 && delta < params.h / 2.0) {
            return Err(Error::InvalidProfile { v, delta, h: params.h });
        }
        Ok(Self { v, delta, params })
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        let h = self.params.h;
        if !(0.0..=h).contains(&z) {
            return Err(Error::OutOfChannel { z, h });
        }
        Ok(if z < self.delta {
            self.v * z / self.delta
        } else if z > h - self.delta {
            self.v * (h - z) / self.delta
        } else {
            self.v
        })
    }

    /// `∫₀ʰ U₁ = V (h − δ)`.
    pub fn integral(&self) -> f64 {
        self.v * (self.params.h - self.delta)
    }

    /// `∫₀ʰ U₁'² = 2 V² / δ`.
    pub fn slope_sq_integral(&self) -> f64 {
        2.0 * self.v * self.v / self.delta
    }

    /// `b(v, U, v) = ∫ U₁'(z) v₁ v₃`, integrated exactly over both ramps.
    pub fn shear_term(&self, v: &SpectralField) -> f64 {
        let s = self.v / self.delta;
        let h = self.params.h;
        shear_integral(v, &[(0.0, self.delta, s), (h - self.delta, h, -s)])
    }

    /// `H_U(v) = ν ‖v‖² / 2 + b(v, U, v)`.
    pub fn quadratic_form(&self, v: &SpectralField) -> f64 {
        0.5 * self.params.nu * v.grad_norm_sq() + self.shear_term(v)
    }

    pub fn constraint_coefficient(&self) -> f64 {
        constraint_coefficient(self.v, self.delta, self.params.nu)
    }

    /// Evaluates the spectral constraint on sample fields.
    pub fn check_constraint<'a>(&self, samples: impl IntoIterator<Item = &'a SpectralField>) -> ConstraintReport {
        let coefficient = self.constraint_coefficient();
        let worst_sample_ratio = samples
            .into_iter()
            .map(|v| self.quadratic_form(v) / v.grad_norm_sq())
            .fold(f64::INFINITY, f64::min);
        ConstraintReport {
            coefficient,
            satisfied: coefficient >= 0.0,
            worst_sample_ratio,
        }
    }

    /// `U ≥ (2/h)(V(h − δ) − ν L_x V² / (δ P))`; may be negative.
    pub fn lower_bound_functional(&self) -> f64 {
        let p = &self.params;
        2.0 / p.h * (self.integral() - p.nu * p.lx * self.v * self.v / (self.delta * p.p))
    }
}

/// `∫ s(z) v₁ v₃` for piecewise-constant `s`, given as `(a, b, s)` pieces.
/// Each piece uses Gauss–Legendre exact for the degree-`2N` integrand.
pub fn shear_integral(v: &SpectralField, pieces: &[(f64, f64, f64)]) -> f64 {
    let grid = v.grid();
    let res = v.resolution();
    let p = v.params();
    let nq = grid.n + 1;
    let mut total = 0.0;
    for &(a, b, s) in pieces {
        let (z, w) = gauss_legendre_on(nq, a, b);
        let zeta: Vec<f64> = z.iter().map(|&zi| grid.zeta_of(zi)).collect();
        let e = grid.eval_matrix(&zeta);
        let mut piece = 0.0;
        for jx in 0..res.nx {
            for jy in 0..res.ny {
                let a1 = mat_vec_c(&e, v.pencil(0, jx, jy));
                let a3 = mat_vec_c(&e, v.pencil(2, jx, jy));
                piece += a1.iter().zip(&a3).zip(&w).map(|((x, y), wi)| wi * (x * y.conj()).re).sum::<f64>();
            }
        }
        total += s * piece;
    }
    total * p.lx * p.ly
}

/// `ν/2 − √2 V δ / π²`.
pub fn constraint_coefficient(v: f64, delta: f64, nu: f64) -> f64 {
    nu / 2.0 - SQRT_2 * v * delta / (PI * PI)
}

/// Smallest eigenvalue `π²/(4δ²)` of `−d²/dz²` on `(0, δ)` with `u(0) = 0`
/// and a free end at `δ`.
pub fn poincare_halfslab(delta: f64) -> f64 {
    PI * PI / (4.0 * delta * delta)
}

/// The same eigenvalue by minimising the discrete Rayleigh quotient
/// `∫u'² / ∫u²` on `n` uniform intervals (inverse iteration).
pub fn poincare_halfslab_discrete(delta: f64, n: usize) -> f64 {
    let dz = delta / n as f64;
    let inv = 1.0 / (dz * dz);
    // Unknowns u_1..u_n; trapezoid mass with weight 1/2 at the free end.
    let diag: Vec<f64> = (0..n).map(|i| if i + 1 == n { inv } else { 2.0 * inv }).collect();
    let off = -inv;
    let mass: Vec<f64> = (0..n).map(|i| if i + 1 == n { 0.5 } else { 1.0 }).collect();
    let solve = |rhs: &[f64]| -> Vec<f64> {
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        c[0] = off / diag[0];
        d[0] = rhs[0] / diag[0];
        for i in 1..n {
            let m = diag[i] - off * c[i - 1];
            c[i] = off / m;
            d[i] = (rhs[i] - off * d[i - 1]) / m;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        x
    };
    let rayleigh = |u: &[f64]| -> f64 {
        let mut num = 0.0;
        let mut prev = 0.0;
        for &ui in u {
            num += (ui - prev) * (ui - prev) * inv;
            prev = ui;
        }
        let den: f64 = u.iter().zip(&mass).map(|(x, m)| m * x * x).sum();
        num / den
    };
    let mut u: Vec<f64> = (1..=n).map(|i| i as f64 * dz).collect();
    let mut lambda = rayleigh(&u);
    for _ in 0..200 {
        let rhs: Vec<f64> = u.iter().zip(&mass).map(|(x, m)| m * x).collect();
        u = solve(&rhs);
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        u.iter_mut().for_each(|x| *x /= norm);
        let next = rayleigh(&u);
        if (next - lambda).abs() < 1e-15 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda
}

/// Maximiser of the lower-bound functional over the ramp family subject to
/// the spectral constraint.
///
/// Low regime: `V = h²P/(9νL_x)`, `δ = h/3` (constraint slack or tight at
/// `P*`). High regime: `V = π h^{1/2} P^{1/2} / (3^{1/2} 2^{3/4} L_x^{1/2})`
/// with the constraint saturated, `δ = νπ²/(2√2 V)`. In both regimes the
/// functional equals [`crate::bounds::mean_velocity_lower`].
pub fn optimal_parameters(p: &ChannelParams) -> BackgroundProfile {
    let (v, delta) = match pressure_regime(p).regime {
        Regime::Low => (p.h * p.h * p.p / (9.0 * p.nu * p.lx), p.h / 3.0),
        Regime::High => {
            let v = high_plateau(p);
            (v, p.nu * PI * PI / (2.0 * SQRT_2 * v))
        }
    };
    BackgroundProfile { v, delta, params: *p }
}

fn high_plateau(p: &ChannelParams) -> f64 {
    PI * (p.h * p.p / p.lx).sqrt() / (3f64.sqrt() * 2f64.powf(0.75))
}

/// The high-regime plateau with the narrower ramp
/// `δ = 3^{1/2} ν L_x^{1/2} / (2^{3/4} h^{1/2} P^{1/2})`, for which
/// `V δ = πν/2^{3/2}` leaves a factor `π` of slack in the constraint. The
/// functional is then `2V(1 − π/3) − πν/(√2 h)`, below the saturated choice.
pub fn narrow_ramp_parameters(p: &ChannelParams) -> BackgroundProfile {
    let v = high_plateau(p);
    let delta = 3f64.sqrt() * p.nu * p.lx.sqrt() / (2f64.powf(0.75) * (p.h * p.p).sqrt());
    BackgroundProfile { v, delta, params: *p }
}

/// Brute-force maximum of the functional over `n` ramp widths in `(0, h/2)`,
/// with `V` optimal for each width under the constraint.
pub fn grid_search_optimum(p: &ChannelParams, n: usize) -> BackgroundProfile {
    let mut best = BackgroundProfile { v: 0.0, delta: p.h / 4.0, params: *p };
    let mut best_val = f64::NEG_INFINITY;
    for i in 1..n {
        let delta = 0.5 * p.h * i as f64 / n as f64;
        let free = (p.h - delta) * delta * p.p / (2.0 * p.nu * p.lx);
        let cap = p.nu * PI * PI / (2.0 * SQRT_2 * delta);
        let bp = BackgroundProfile { v: free.min(cap), delta, params: *p };
        let val = bp.lower_bound_functional();
        if val > best_val {
            best_val = val;
            best = bp;
        }
    }
    best
}
