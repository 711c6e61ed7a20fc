use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cheb::{self, inner_c, mat_vec_c, ChebGrid};
use crate::error::{Error, Result};
use crate::par;
use crate::params::ChannelParams;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Numbers of Fourier modes in `x`, `y` and Chebyshev points in `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resolution {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
}

impl Resolution {
    /// `nx`, `ny` must be 1 or even; `nz ≥ 5` (room for a quartic wall factor).
    pub fn new(nx: usize, ny: usize, nz: usize) -> Result<Self> {
        let r = Self { nx, ny, nz };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("nx", self.nx), ("ny", self.ny)] {
            if n == 0 || (n > 1 && n % 2 == 1) {
                return Err(Error::InvalidResolution(format!("{name} = {n} must be 1 or even")));
            }
        }
        if self.nz < 5 {
            return Err(Error::InvalidResolution(format!("nz = {} must be at least 5", self.nz)));
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.nx * self.ny
    }

    pub fn len(&self) -> usize {
        3 * self.modes() * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Stokes-mode label: Fourier indices `(j, l)` and wall-normal index `k ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub j: i64,
    pub l: i64,
    pub k: usize,
}

impl ModeIndex {
    /// `((2πj/L_x)² + (2πl/L_y)² + (kπ/h)²)^{1/2}`; exact on the `(0,0,k)` family.
    pub fn sine_kappa(&self, p: &ChannelParams) -> f64 {
        let kx = 2.0 * PI * self.j as f64 / p.lx;
        let ky = 2.0 * PI * self.l as f64 / p.ly;
        let kz = self.k as f64 * PI / p.h;
        (kx * kx + ky * ky + kz * kz).sqrt()
    }
}

/// Signed wavenumber index of FFT slot `i` out of `n`.
pub fn signed_index(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Velocity field `(u₁, u₂, u₃)` stored as `[component][jx][jy][iz]`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    params: ChannelParams,
    res: Resolution,
    grid: Arc<ChebGrid>,
    data: Vec<Complex64>,
}

impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.res == other.res && self.data == other.data
    }
}

impl SpectralField {
    pub fn zeros(params: ChannelParams, res: Resolution) -> Result<Self> {
        params.validate()?;
        res.validate()?;
        Ok(Self {
            params,
            res,
            grid: cheb::grid(res.nz, params.h),
            data: vec![ZERO; res.len()],
        })
    }

    pub(crate) fn from_data(params: ChannelParams, res: Resolution, data: Vec<Complex64>) -> Result<Self> {
        let mut f = Self::zeros(params, res)?;
        if data.len() != res.len() {
            return Err(Error::Mismatch);
        }
        f.data = data;
        Ok(f)
    }

    /// Mean flow `(u₁(z), u₂(z), 0)`.
    pub fn from_mean_profile(
        params: ChannelParams,
        res: Resolution,
        profile: impl Fn(f64) -> (f64, f64),
    ) -> Result<Self> {
        let mut f = Self::zeros(params, res)?;
        let z = f.grid.z.clone();
        for c in 0..2 {
            let pencil = f.pencil_mut(c, 0, 0);
            for (v, &zi) in pencil.iter_mut().zip(&z) {
                let (a, b) = profile(zi);
                *v = Complex64::new(if c == 0 { a } else { b }, 0.0);
            }
        }
        Ok(f)
    }

    /// Plane Poiseuille flow, exact on any grid with `nz ≥ 3`.
    pub fn poiseuille(params: ChannelParams, res: Resolution) -> Result<Self> {
        Self::from_mean_profile(params, res, |z| {
            (crate::poiseuille::profile_unchecked(z, &params), 0.0)
        })
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn resolution(&self) -> Resolution {
        self.res
    }

    pub fn grid(&self) -> &Arc<ChebGrid> {
        &self.grid
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn same_space(&self, other: &Self) -> Result<()> {
        if self.params == other.params && self.res == other.res {
            Ok(())
        } else {
            Err(Error::Mismatch)
        }
    }

    fn offset(&self, c: usize, jx: usize, jy: usize) -> usize {
        ((c * self.res.nx + jx) * self.res.ny + jy) * self.res.nz
    }

    pub fn pencil(&self, c: usize, jx: usize, jy: usize) -> &[Complex64] {
        let o = self.offset(c, jx, jy);
        &self.data[o..o + self.res.nz]
    }

    pub fn pencil_mut(&mut self, c: usize, jx: usize, jy: usize) -> &mut [Complex64] {
        let o = self.offset(c, jx, jy);
        let nz = self.res.nz;
        &mut self.data[o..o + nz]
    }

    /// `(kx, ky)` of mode slot `(jx, jy)`.
    pub fn wavenumbers(&self, jx: usize, jy: usize) -> (f64, f64) {
        wavenumbers(&self.params, self.res, jx, jy)
    }

    pub fn is_nyquist(&self, jx: usize, jy: usize) -> bool {
        is_nyquist(self.res, jx, jy)
    }

    /// Sets mode `(jx, jy) ≠ (0,0)` from wall-normal velocity `v` and
    /// wall-normal vorticity `η`:
    /// `u₁ = i(k_x v' + k_y η)/k²`, `u₂ = i(k_y v' − k_x η)/k²`, `u₃ = v`.
    pub fn set_mode_from_v_eta(&mut self, jx: usize, jy: usize, v: &[Complex64], eta: &[Complex64]) {
        let (kx, ky) = self.wavenumbers(jx, jy);
        let k2 = kx * kx + ky * ky;
        assert!(k2 > 0.0, "mean mode has no v-η representation");
        let dv = mat_vec_c(&self.grid.d, v);
        let i = Complex64::new(0.0, 1.0);
        let (u1, u2): (Vec<_>, Vec<_>) = dv
            .iter()
            .zip(eta)
            .map(|(&d, &e)| (i * (d * kx + e * ky) / k2, i * (d * ky - e * kx) / k2))
            .unzip();
        self.pencil_mut(0, jx, jy).copy_from_slice(&u1);
        self.pencil_mut(1, jx, jy).copy_from_slice(&u2);
        self.pencil_mut(2, jx, jy).copy_from_slice(v);
    }

    /// Wall-normal vorticity `η = i k_x u₂ − i k_y u₁` of mode `(jx, jy)`.
    pub fn eta(&self, jx: usize, jy: usize) -> Vec<Complex64> {
        let (kx, ky) = self.wavenumbers(jx, jy);
        let i = Complex64::new(0.0, 1.0);
        self.pencil(0, jx, jy)
            .iter()
            .zip(self.pencil(1, jx, jy))
            .map(|(&a, &b)| i * (b * kx - a * ky))
            .collect()
    }

    pub fn axpy(&mut self, a: f64, x: &Self) -> Result<()> {
        self.same_space(x)?;
        for (s, o) in self.data.iter_mut().zip(&x.data) {
            *s += o * a;
        }
        Ok(())
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= a);
        out
    }

    fn mode_sum(&self, f: impl Fn(usize, usize) -> f64 + Sync + Send) -> f64 {
        let ny = self.res.ny;
        self.params.lx * self.params.ly * par::sum_range(self.res.modes(), |m| f(m / ny, m % ny))
    }

    /// `(u, v)`, the `L²(Ω)` inner product.
    pub fn inner_l2(&self, other: &Self) -> Result<f64> {
        self.same_space(other)?;
        let g = &self.grid;
        Ok(self.mode_sum(|jx, jy| {
            (0..3)
                .map(|c| inner_c(&g.mass, self.pencil(c, jx, jy), other.pencil(c, jx, jy)).re)
                .sum()
        }))
    }

    /// `⟪u, v⟫ = Σ ∫ ∂_j u_i ∂_j v_i`.
    pub fn inner_grad(&self, other: &Self) -> Result<f64> {
        self.same_space(other)?;
        let g = &self.grid;
        Ok(self.mode_sum(|jx, jy| {
            let (kx, ky) = self.wavenumbers(jx, jy);
            let k2 = kx * kx + ky * ky;
            (0..3)
                .map(|c| {
                    let (a, b) = (self.pencil(c, jx, jy), other.pencil(c, jx, jy));
                    k2 * inner_c(&g.mass, a, b).re + inner_c(&g.stiff, a, b).re
                })
                .sum()
        }))
    }

    /// `|u|₀²`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.inner_l2(self).expect("same space")
    }

    /// `‖u‖²`.
    pub fn grad_norm_sq(&self) -> f64 {
        self.inner_grad(self).expect("same space")
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().max(0.0).sqrt()
    }

    pub fn grad_norm(&self) -> f64 {
        self.grad_norm_sq().max(0.0).sqrt()
    }

    /// `|∂₃u₃|₀²` and `|∂₁u₁|₀² + |∂₂u₂|₀² + |∂₂u₁|₀² + |∂₁u₂|₀²`.
    pub fn normal_strain_split(&self) -> (f64, f64) {
        let g = &self.grid;
        let d33 = self.mode_sum(|jx, jy| inner_c(&g.stiff, self.pencil(2, jx, jy), self.pencil(2, jx, jy)).re);
        let rest = self.mode_sum(|jx, jy| {
            let (kx, ky) = self.wavenumbers(jx, jy);
            let a = inner_c(&g.mass, self.pencil(0, jx, jy), self.pencil(0, jx, jy)).re;
            let b = inner_c(&g.mass, self.pencil(1, jx, jy), self.pencil(1, jx, jy)).re;
            (kx * kx + ky * ky) * (a + b)
        });
        (d33, rest)
    }

    /// `|∇·u|₀`.
    pub fn divergence_norm(&self) -> f64 {
        let g = &self.grid;
        let i = Complex64::new(0.0, 1.0);
        self.mode_sum(|jx, jy| {
            let (kx, ky) = self.wavenumbers(jx, jy);
            let dw = mat_vec_c(&g.d, self.pencil(2, jx, jy));
            let div: Vec<Complex64> = (0..self.res.nz)
                .map(|iz| i * kx * self.pencil(0, jx, jy)[iz] + i * ky * self.pencil(1, jx, jy)[iz] + dw[iz])
                .collect();
            inner_c(&g.mass, &div, &div).re
        })
        .max(0.0)
        .sqrt()
    }

    /// Largest modulus of any coefficient at either wall.
    pub fn wall_max(&self) -> f64 {
        let n = self.res.nz - 1;
        let mut m: f64 = 0.0;
        for c in 0..3 {
            for jx in 0..self.res.nx {
                for jy in 0..self.res.ny {
                    let p = self.pencil(c, jx, jy);
                    m = m.max(p[0].norm()).max(p[n].norm());
                }
            }
        }
        m
    }

    /// Largest conjugate-symmetry defect `|û(k) − conj(û(−k))|`.
    pub fn symmetry_defect(&self) -> f64 {
        let (nx, ny) = (self.res.nx, self.res.ny);
        let mut m: f64 = 0.0;
        for c in 0..3 {
            for jx in 0..nx {
                for jy in 0..ny {
                    let (px, py) = ((nx - jx) % nx, (ny - jy) % ny);
                    for (a, b) in self.pencil(c, jx, jy).iter().zip(self.pencil(c, px, py)) {
                        m = m.max((a - b.conj()).norm());
                    }
                }
            }
        }
        m
    }

    /// Horizontally averaged component `c` on the nodes.
    pub fn mean_profile(&self, c: usize) -> Vec<f64> {
        self.pencil(c, 0, 0).iter().map(|v| v.re).collect()
    }

    /// Mean longitudinal velocity `U = (1/(L_x L_y h)) ∫ u₁`.
    pub fn mean_velocity(&self) -> f64 {
        let w = &self.grid.cc_weights;
        self.pencil(0, 0, 0).iter().zip(w).map(|(v, wi)| v.re * wi).sum::<f64>() / self.params.h
    }

    /// `(f_P, u) = (P/L_x) ∫ u₁`.
    pub fn forcing_power(&self) -> f64 {
        self.params.forcing() * self.mean_velocity() * self.params.volume()
    }

    /// Discrete Stokes wavenumber of `(jx, jy, k)` with `k ≥ 1`.
    pub fn mode_kappa(&self, jx: usize, jy: usize, k: usize) -> f64 {
        let (kx, ky) = self.wavenumbers(jx, jy);
        (kx * kx + ky * ky + self.grid.dirichlet().mu[k - 1]).sqrt()
    }
}

pub(crate) fn wavenumbers(p: &ChannelParams, res: Resolution, jx: usize, jy: usize) -> (f64, f64) {
    (
        2.0 * PI * signed_index(jx, res.nx) as f64 / p.lx,
        2.0 * PI * signed_index(jy, res.ny) as f64 / p.ly,
    )
}

pub(crate) fn is_nyquist(res: Resolution, jx: usize, jy: usize) -> bool {
    (res.nx > 1 && jx == res.nx / 2) || (res.ny > 1 && jy == res.ny / 2)
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: Self) -> SpectralField {
        let mut out = self.clone();
        out.axpy(1.0, rhs).expect("fields share a space");
        out
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: Self) -> SpectralField {
        let mut out = self.clone();
        out.axpy(-1.0, rhs).expect("fields share a space");
        out
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, a: f64) -> SpectralField {
        self.scaled(a)
    }
}
