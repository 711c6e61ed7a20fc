//! `b(u, v, w) = ∫ (u·∇)v · w` by pseudo-spectral quadrature.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::field::{Resolution, SpectralField};
use super::transform::{to_physical, PlaneGrid};
use crate::error::Result;
use crate::par;
use crate::params::ChannelParams;

/// Quadrature used for the cubic products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dealias {
    /// 3/2 padding in `x`, `y` and Gauss–Legendre in `z` with enough points
    /// for degree `3N`: exact for the discrete fields.
    Exact,
    /// Collocation grid itself (no padding, Clenshaw–Curtis in `z`). Aliased.
    Off,
}

/// Physical quadrature grid for products of three fields.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    params: ChannelParams,
    res: Resolution,
    plane: PlaneGrid,
    eval: DMatrix<f64>,
    eval_dz: DMatrix<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(params: ChannelParams, res: Resolution, dealias: Dealias) -> Self {
        let g = crate::cheb::grid(res.nz, params.h);
        let (eval, weights) = match dealias {
            Dealias::Exact => {
                let nq = (3 * g.n + 1).div_ceil(2);
                let (_, w, e) = g.gauss_evaluation(nq);
                (e, w)
            }
            Dealias::Off => (DMatrix::identity(res.nz, res.nz), g.cc_weights.clone()),
        };
        let eval_dz = &eval * &g.d;
        Self {
            params,
            res,
            plane: PlaneGrid::new(res, dealias == Dealias::Exact),
            eval,
            eval_dz,
            weights,
        }
    }

    pub fn points(&self) -> usize {
        self.weights.len() * self.plane.len()
    }

    fn cell(&self) -> f64 {
        self.params.lx * self.params.ly / self.plane.len() as f64
    }

    /// Values and gradients of `u` on this grid.
    pub fn resolve(&self, u: &SpectralField) -> ResolvedField {
        assert_eq!(u.resolution(), self.res, "field resolution differs from quadrature grid");
        let ncomp = self.res.modes() * self.res.nz;
        let one = |_: usize, _: usize| Complex64::new(1.0, 0.0);
        let p = *u.params();
        let res = self.res;
        let ikx = move |jx: usize, jy: usize| Complex64::new(0.0, super::field::wavenumbers(&p, res, jx, jy).0);
        let iky = move |jx: usize, jy: usize| Complex64::new(0.0, super::field::wavenumbers(&p, res, jx, jy).1);
        let mut values = Vec::with_capacity(3);
        let mut grad = Vec::with_capacity(3);
        for c in 0..3 {
            let spec = &u.data()[c * ncomp..(c + 1) * ncomp];
            values.push(to_physical(spec, self.res, &self.eval, self.plane, one));
            grad.push([
                to_physical(spec, self.res, &self.eval, self.plane, ikx),
                to_physical(spec, self.res, &self.eval, self.plane, iky),
                to_physical(spec, self.res, &self.eval_dz, self.plane, one),
            ]);
        }
        ResolvedField { values, grad }
    }

    fn sum_planes(&self, f: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
        let n = self.plane.len();
        let cell = self.cell();
        par::sum_range(self.weights.len(), |iq| {
            let base = iq * n;
            let s: f64 = (base..base + n).map(&f).sum();
            s * self.weights[iq] * cell
        })
    }

    /// `b(u, v, w)` from resolved fields.
    pub fn trilinear(&self, u: &ResolvedField, v: &ResolvedField, w: &ResolvedField) -> f64 {
        self.sum_planes(|p| {
            let mut s = 0.0;
            for i in 0..3 {
                let adv = u.values[0][p] * v.grad[i][0][p]
                    + u.values[1][p] * v.grad[i][1][p]
                    + u.values[2][p] * v.grad[i][2][p];
                s += adv * w.values[i][p];
            }
            s
        })
    }

    /// `∫ |u| |∇v| |w|`, the natural magnitude of `b(u, v, w)`.
    pub fn trilinear_scale(&self, u: &ResolvedField, v: &ResolvedField, w: &ResolvedField) -> f64 {
        self.sum_planes(|p| {
            let nu: f64 = (0..3).map(|i| u.values[i][p].powi(2)).sum::<f64>().sqrt();
            let nw: f64 = (0..3).map(|i| w.values[i][p].powi(2)).sum::<f64>().sqrt();
            let ng: f64 = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .map(|(i, j)| v.grad[i][j][p].powi(2))
                .sum::<f64>()
                .sqrt();
            nu * ng * nw
        })
    }

    /// `∫ |u|²` on this grid (a quadrature check of the spectral norm).
    pub fn l2_norm_sq(&self, u: &ResolvedField) -> f64 {
        self.sum_planes(|p| (0..3).map(|i| u.values[i][p].powi(2)).sum())
    }
}

/// A field evaluated on a [`QuadratureGrid`]: `values[i]` is `u_i`,
/// `grad[i][j]` is `∂_j u_i`.
#[derive(Debug, Clone)]
pub struct ResolvedField {
    pub values: Vec<Vec<f64>>,
    pub grad: Vec<[Vec<f64>; 3]>,
}

/// `b(u, v, w)` with exact (dealiased) quadrature.
pub fn trilinear(u: &SpectralField, v: &SpectralField, w: &SpectralField) -> Result<f64> {
    trilinear_with(u, v, w, Dealias::Exact)
}

pub fn trilinear_with(u: &SpectralField, v: &SpectralField, w: &SpectralField, dealias: Dealias) -> Result<f64> {
    u.same_space(v)?;
    u.same_space(w)?;
    let q = QuadratureGrid::new(*u.params(), u.resolution(), dealias);
    Ok(q.trilinear(&q.resolve(u), &q.resolve(v), &q.resolve(w)))
}
