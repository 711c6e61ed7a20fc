//! Energy injected by the pressure forcing into each Stokes wavenumber.
//!
//! The forcing `f_P = (P/L_x) e₁` only projects onto the mean family
//! `(0, 0, k)`, whose eigenspace at `κ = kπ/h` is spanned by
//! `sin(kπz/h) e₁` and `sin(kπz/h) e₂`. Odd `k` carry forcing, even `k` none.
//!
//! Two normalisations of the forcing component are provided. The *lemma*
//! value `2 L_y^{1/2} P / (L_x^{1/2} h^{1/2} κ)` projects onto the single
//! vector `(sin, sin, 0)`; the *oracle* value is the orthogonal projection
//! onto the full two-dimensional eigenspace and is larger by `√2`. Only the
//! oracle satisfies `Σ |(f_P)_κ|² / κ² = |A^{-1/2} f_P|₀²`.

use std::f64::consts::{PI, SQRT_2};
use std::io::Write;

use serde::Serialize;

use crate::cheb::{cheb_derivative, cheb_endpoints};
use crate::error::{Error, Result};
use crate::params::{forcing_dual_norm_sq, ChannelParams};
use crate::quadrature::{gauss_legendre, require_points};
use crate::spectral::SpectralField;

/// Odd `k` with `κ = kπ/h`, if `kappa` sits on the forcing spectrum.
fn odd_mode(kappa: f64, p: &ChannelParams) -> Option<u64> {
    let k = kappa * p.h / PI;
    let r = k.round();
    if r >= 1.0 && (k - r).abs() <= 1e-9 * r && (r as u64) % 2 == 1 {
        Some(r as u64)
    } else {
        None
    }
}

/// `k` with `κ = kπ/h` for any integer `k ≥ 1`.
fn any_mode(kappa: f64, p: &ChannelParams) -> Option<u64> {
    let k = kappa * p.h / PI;
    let r = k.round();
    (r >= 1.0 && (k - r).abs() <= 1e-9 * r).then_some(r as u64)
}

pub fn mode_kappa(k: u64, p: &ChannelParams) -> f64 {
    k as f64 * PI / p.h
}

/// `2 L_y^{1/2} P / (L_x^{1/2} h^{1/2} κ)` at odd modes, 0 elsewhere.
pub fn forcing_mode_norm_lemma(kappa: f64, p: &ChannelParams) -> f64 {
    match odd_mode(kappa, p) {
        Some(_) => 2.0 * p.ly.sqrt() * p.p / (p.lx.sqrt() * p.h.sqrt() * kappa),
        None => 0.0,
    }
}

/// `|(f_P, e)|` with `e = sin(kπz/h) e₁ / (L_x L_y h / 2)^{1/2}`, using the
/// exact `∫₀ʰ sin(kπz/h) dz = h (1 − (−1)^k) / (kπ)`.
pub fn forcing_projection(k: u64, p: &ChannelParams) -> f64 {
    let sin_int = if k % 2 == 1 { 2.0 * p.h / (k as f64 * PI) } else { 0.0 };
    p.forcing() * p.lx * p.ly * sin_int / (0.5 * p.volume()).sqrt()
}

/// Same projection with `∫ sin` by composite Gauss–Legendre
/// (`quad_points` per half period). Rejects `kappa` off `{kπ/h}`.
pub fn forcing_mode_norm_oracle(kappa: f64, p: &ChannelParams, quad_points: usize) -> Result<f64> {
    require_points(quad_points, 2)?;
    let k = any_mode(kappa, p).ok_or(Error::OffSpectrum(kappa))?;
    let (x, w) = gauss_legendre(quad_points);
    let width = p.h / k as f64;
    let omega = kappa;
    let mut sin_int = 0.0;
    for cell in 0..k {
        let a = cell as f64 * width;
        let s: f64 = x
            .iter()
            .zip(&w)
            .map(|(&t, &wi)| wi * (omega * (a + 0.5 * width * (1.0 + t))).sin())
            .sum();
        sin_int += 0.5 * width * s;
    }
    Ok((p.forcing() * p.lx * p.ly * sin_int / (0.5 * p.volume()).sqrt()).abs())
}

/// `Σ_{odd j ≥ k0} j^{-s}` for `s ≥ 2`: direct sum to 1001, then
/// Euler–Maclaurin on `f(m) = (2m+1)^{-s}`.
pub fn odd_power_tail(k0: u64, s: i32) -> f64 {
    assert!(s >= 2);
    let mut k0 = if k0.is_multiple_of(2) { k0 + 1 } else { k0.max(1) };
    let mut direct = Vec::new();
    while k0 < 1001 {
        direct.push((k0 as f64).powi(-s));
        k0 += 2;
    }
    let k = k0 as f64;
    let sf = s as f64;
    let em = k.powi(1 - s) / (2.0 * (sf - 1.0)) + 0.5 * k.powi(-s) + sf * k.powi(-s - 1) / 6.0
        - sf * (sf + 1.0) * (sf + 2.0) * k.powi(-s - 3) / 90.0;
    // Smallest terms first.
    direct.iter().rev().fold(em, |acc, t| acc + t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForcingMode {
    pub k: u64,
    pub kappa: f64,
    pub lemma_norm: f64,
    pub oracle_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForcingSpectrum {
    pub params: ChannelParams,
    pub modes: Vec<ForcingMode>,
}

impl ForcingSpectrum {
    /// Odd modes `k ≤ kmax`, oracle from the exact projection integral.
    pub fn new(p: &ChannelParams, kmax: u64) -> Self {
        Self::build(p, kmax, |k| Ok(forcing_projection(k, p))).expect("closed form never fails")
    }

    /// Odd modes `k ≤ kmax`, oracle by quadrature.
    pub fn with_quadrature(p: &ChannelParams, kmax: u64, quad_points: usize) -> Result<Self> {
        Self::build(p, kmax, |k| forcing_mode_norm_oracle(mode_kappa(k, p), p, quad_points))
    }

    fn build(p: &ChannelParams, kmax: u64, oracle: impl Fn(u64) -> Result<f64>) -> Result<Self> {
        let modes = (1..=kmax)
            .step_by(2)
            .map(|k| {
                let kappa = mode_kappa(k, p);
                Ok(ForcingMode {
                    k,
                    kappa,
                    lemma_norm: forcing_mode_norm_lemma(kappa, p),
                    oracle_norm: oracle(k)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { params: *p, modes })
    }

    /// `Σ_{k ≤ kmax} oracle²/κ²` plus its analytic remainder.
    pub fn oracle_series(&self) -> SeriesClosure {
        let partial: f64 = self.modes.iter().map(|m| (m.oracle_norm / m.kappa).powi(2)).sum();
        let next = self.modes.last().map_or(1, |m| m.k + 2);
        let tail = exact_tail_coefficient(&self.params) * odd_power_tail(next, 4);
        SeriesClosure::new(partial, tail, forcing_dual_norm_sq(&self.params))
    }

    /// Same series with lemma-convention norms.
    pub fn lemma_series(&self) -> SeriesClosure {
        let partial: f64 = self.modes.iter().map(|m| (m.lemma_norm / m.kappa).powi(2)).sum();
        let next = self.modes.last().map_or(1, |m| m.k + 2);
        let tail = 0.5 * exact_tail_coefficient(&self.params) * odd_power_tail(next, 4);
        SeriesClosure::new(partial, tail, forcing_dual_norm_sq(&self.params))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesClosure {
    pub partial: f64,
    pub analytic_tail: f64,
    pub total: f64,
    /// `L_y h³ P² / (12 L_x)`.
    pub target: f64,
}

impl SeriesClosure {
    fn new(partial: f64, analytic_tail: f64, target: f64) -> Self {
        Self {
            partial,
            analytic_tail,
            total: partial + analytic_tail,
            target,
        }
    }

    pub fn relative_error(&self) -> f64 {
        (self.total - self.target).abs() / self.target
    }
}

/// `8 L_y h³ P² / (L_x π⁴)`: `oracle_k² / κ_k² = this · k⁻⁴`.
fn exact_tail_coefficient(p: &ChannelParams) -> f64 {
    8.0 * p.ly * p.h.powi(3) * p.p * p.p / (p.lx * PI.powi(4))
}

/// Norms of the forcing restricted to wavenumbers `≥ κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailForceNorm {
    /// Smallest odd mode included.
    pub k0: u64,
    /// `|A^{-1/2}(f_P)_{κ,∞}|₀²` summed exactly (oracle convention).
    pub exact_sq: f64,
    /// `4 L_y P² / (π L_x κ³)`.
    pub lemma_bound_sq: f64,
    /// `8 L_y P² / (π L_x κ³)`, the same estimate in the oracle convention.
    /// Bounds `exact_sq` from the second odd mode on; at `κ = π/h` it is low
    /// by a factor `π⁴/96`.
    pub corrected_bound_sq: f64,
}

fn check_kappa(kappa: f64, p: &ChannelParams) -> Result<()> {
    let kappa1 = PI / p.h;
    if !(kappa >= kappa1 * (1.0 - 1e-12)) {
        return Err(Error::BelowFirstWavenumber { kappa, kappa1 });
    }
    Ok(())
}

pub fn tail_force_norm(kappa: f64, p: &ChannelParams) -> Result<TailForceNorm> {
    check_kappa(kappa, p)?;
    let mut k0 = (kappa * p.h / PI * (1.0 - 1e-12)).ceil() as u64;
    if k0.is_multiple_of(2) {
        k0 += 1;
    }
    let lemma = 4.0 * p.ly * p.p * p.p / (PI * p.lx * kappa.powi(3));
    Ok(TailForceNorm {
        k0,
        exact_sq: exact_tail_coefficient(p) * odd_power_tail(k0, 4),
        lemma_bound_sq: lemma,
        corrected_bound_sq: 2.0 * lemma,
    })
}

/// `κ^{-3/2} · 2P / (π^{1/2} ν^{1/2} L_x h^{1/2}) · ε^{1/2}`.
pub fn tail_bound(kappa: f64, p: &ChannelParams, eps: f64) -> Result<f64> {
    check_kappa(kappa, p)?;
    Ok(kappa.powf(-1.5) * 2.0 * p.p / (PI.sqrt() * p.nu.sqrt() * p.lx * p.h.sqrt()) * eps.max(0.0).sqrt())
}

/// `κ^{-3/2} · 2P / (π^{1/2} L_x^{3/2} L_y^{1/2} h) · ⟨‖u_{κ,∞}‖⟩`.
pub fn tail_bound_from_gradient(kappa: f64, p: &ChannelParams, grad_avg: f64) -> Result<f64> {
    check_kappa(kappa, p)?;
    Ok(kappa.powf(-1.5) * 2.0 * p.p / (PI.sqrt() * p.lx.powf(1.5) * p.ly.sqrt() * p.h) * grad_avg)
}

/// Cauchy–Schwarz form with the exact tail norm:
/// `|A^{-1/2}(f_P)_{κ,∞}|₀ (ε / (ν L_x L_y h))^{1/2}`. Valid at every `κ ≥ κ₁`.
pub fn tail_bound_exact(kappa: f64, p: &ChannelParams, eps: f64) -> Result<f64> {
    let t = tail_force_norm(kappa, p)?;
    Ok(t.exact_sq.sqrt() * (eps.max(0.0) / (p.nu * p.volume())).sqrt())
}

/// `∫₀ʰ q(z) sin(kπz/h) dz` for the nodal polynomial `q`.
///
/// Large `k` use the terminating integration-by-parts series; small `k` use
/// a Gauss–Legendre rule resolving the oscillation.
struct SineIntegrator {
    h: f64,
    /// `q^{(2m)}(0) + q^{(2m)}(h)` and `q^{(2m)}(0) − q^{(2m)}(h)`.
    even_sum: Vec<f64>,
    even_diff: Vec<f64>,
    /// Smallest `k` from which the series is used.
    k_switch: u64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl SineIntegrator {
    fn new(values_nodal: &[f64], grid: &crate::cheb::ChebGrid) -> Self {
        let h = grid.h;
        let n = grid.n;
        let mut a = grid.coefficients(values_nodal);
        let scale = 2.0 / h;
        let (mut even_sum, mut even_diff) = (Vec::new(), Vec::new());
        let mut factor = 1.0;
        for order in 0..=n {
            if order % 2 == 0 {
                let (bottom, top) = cheb_endpoints(&a);
                even_sum.push(factor * (bottom + top));
                even_diff.push(factor * (bottom - top));
            }
            a = cheb_derivative(&a);
            factor *= scale;
        }
        // Markov: |q''| ≤ (2/h)² N²(N²−1)/3 max|q|; series terms shrink by 100×
        // once ω² exceeds 100 times that factor.
        let nf = n as f64;
        let omega_min = (100.0 * scale * scale * nf * nf * (nf * nf - 1.0) / 3.0).sqrt();
        let k_switch = ((omega_min * h / PI).ceil() as u64).max(1);
        let nq = n + k_switch as usize + 16;
        let (x, w) = gauss_legendre(nq);
        let nodes: Vec<f64> = x.iter().map(|t| 0.5 * h * (1.0 + t)).collect();
        let weights: Vec<f64> = w.iter().map(|wi| 0.5 * h * wi).collect();
        let e = grid.eval_matrix(&x);
        let values = crate::cheb::mat_vec(&e, values_nodal);
        Self {
            h,
            even_sum,
            even_diff,
            k_switch,
            nodes,
            weights,
            values,
        }
    }

    fn integral(&self, k: u64) -> f64 {
        let omega = k as f64 * PI / self.h;
        if k >= self.k_switch {
            let c = if k % 2 == 1 { &self.even_sum } else { &self.even_diff };
            let mut s = 0.0;
            let mut pow = omega;
            for (m, cm) in c.iter().enumerate() {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                s += sign * cm / pow;
                pow *= omega * omega;
            }
            s
        } else {
            self.nodes
                .iter()
                .zip(&self.weights)
                .zip(&self.values)
                .map(|((z, w), q)| w * q * (omega * z).sin())
                .sum()
        }
    }

    /// `Σ_{odd k ≥ k0} (4/(hkπ)) ∫ q sin` from the series, `k0 ≥ k_switch`.
    fn odd_remainder(&self, k0: u64) -> f64 {
        let mut s = 0.0;
        let r = self.h / PI;
        for (m, cm) in self.even_sum.iter().enumerate() {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            // (4/(hkπ)) · c_m (h/(kπ))^{2m+1} = (4/h) c_m r^{2m+2} k^{-(2m+2)} / r
            let pow = 2 * m as i32 + 2;
            s += sign * cm * r.powi(pow - 1) * odd_power_tail(k0, pow);
        }
        4.0 / (self.h * PI) * s
    }
}

/// Shell injection `𝔉_κ(u) = (P/L_x) (4/(hkπ)) ∫₀ʰ ū₁ sin(kπz/h) dz` at odd
/// `k`, where `ū₁` is the horizontal mean of `u₁`; 0 at even or off-spectrum `κ`.
pub fn shell_injection(u: &SpectralField, kappa: f64) -> f64 {
    let p = u.params();
    match odd_mode(kappa, p) {
        Some(k) => {
            let s = SineIntegrator::new(&u.mean_profile(0), u.grid());
            p.forcing() * 4.0 / (p.h * k as f64 * PI) * s.integral(k)
        }
        None => 0.0,
    }
}

/// Per-shell injection for all odd `k ≤ kmax` plus the exact remainder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectionRecord {
    pub kappas: Vec<f64>,
    pub shells: Vec<f64>,
    /// `Σ_{k > kmax} 𝔉_{kπ/h}`.
    pub remainder: f64,
    pub total: f64,
}

impl InjectionRecord {
    pub fn new(u: &SpectralField, kmax: u64) -> Self {
        Self::from_mean_profile(u.params(), &u.mean_profile(0), u.grid(), kmax)
    }

    /// From a nodal mean profile `ū₁(z)` on `grid`.
    pub fn from_mean_profile(p: &ChannelParams, mean_u1: &[f64], grid: &crate::cheb::ChebGrid, kmax: u64) -> Self {
        let s = SineIntegrator::new(mean_u1, grid);
        let f = p.forcing();
        let shell = |k: u64| f * 4.0 / (p.h * k as f64 * PI) * s.integral(k);
        let kmax = kmax.max(1);
        let mut kappas = Vec::new();
        let mut shells = Vec::new();
        for k in (1..=kmax).step_by(2) {
            kappas.push(mode_kappa(k, p));
            shells.push(shell(k));
        }
        let mut next = if kmax.is_multiple_of(2) { kmax + 1 } else { kmax + 2 };
        let mut remainder = 0.0;
        while next < s.k_switch {
            remainder += shell(next);
            next += 2;
        }
        remainder += f * s.odd_remainder(next);
        let total = shells.iter().sum::<f64>() + remainder;
        Self {
            kappas,
            shells,
            remainder,
            total,
        }
    }

    /// `𝔉_{κ,∞}`: injection into all wavenumbers `≥ κ`.
    pub fn tail(&self, kappa: f64) -> f64 {
        self.kappas
            .iter()
            .zip(&self.shells)
            .filter(|(k, _)| **k >= kappa * (1.0 - 1e-12))
            .map(|(_, s)| s)
            .sum::<f64>()
            + self.remainder
    }
}

/// One row of the spectrum dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub kappa: f64,
    pub k: u64,
    pub lemma_norm: f64,
    pub oracle_norm: f64,
    pub shell_injection: f64,
    pub tail_norm_sq: f64,
    pub lemma_bound: f64,
}

pub const SPECTRUM_HEADER: &str = "kappa,k,lemma_norm,oracle_norm,shell_injection,tail_norm_sq,lemma_bound";

/// Rows for odd `k ≤ kmax`; `shell_injection` from `u` (Poiseuille when `None`).
pub fn spectrum_rows(p: &ChannelParams, kmax: u64, u: Option<&SpectralField>) -> Result<Vec<SpectrumRow>> {
    let spectrum = ForcingSpectrum::new(p, kmax);
    let record = match u {
        Some(u) => InjectionRecord::new(u, kmax),
        None => {
            let res = crate::spectral::Resolution::new(1, 1, 5)?;
            InjectionRecord::new(&SpectralField::poiseuille(*p, res)?, kmax)
        }
    };
    spectrum
        .modes
        .iter()
        .zip(&record.shells)
        .map(|(m, &s)| {
            let t = tail_force_norm(m.kappa, p)?;
            Ok(SpectrumRow {
                kappa: m.kappa,
                k: m.k,
                lemma_norm: m.lemma_norm,
                oracle_norm: m.oracle_norm,
                shell_injection: s,
                tail_norm_sq: t.exact_sq,
                lemma_bound: t.lemma_bound_sq,
            })
        })
        .collect()
}

pub fn write_spectrum_csv(w: &mut impl Write, rows: &[SpectrumRow]) -> Result<()> {
    writeln!(w, "{SPECTRUM_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.kappa, r.k, r.lemma_norm, r.oracle_norm, r.shell_injection, r.tail_norm_sq, r.lemma_bound
        )?;
    }
    Ok(())
}

/// `oracle / lemma` at odd modes: `√2`.
pub const CONVENTION_RATIO: f64 = SQRT_2;
