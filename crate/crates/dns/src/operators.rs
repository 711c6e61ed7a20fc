//! Discrete operators of the wall-normal velocity–vorticity formulation.
//!
//! For a Fourier mode with `k² = k_x² + k_y² > 0` the state is `v = u₃` and
//! `η = i k_x u₂ − i k_y u₁`. With `L = D² − k²` and the advective
//! acceleration `H = −(u·∇)u`,
//!
//! ```text
//! ∂_t L v = h_v + ν L² v,   h_v = −D(i k_x H₁ + i k_y H₂) − k² H₃
//! ∂_t η   = h_g + ν L η,    h_g = i k_x H₂ − i k_y H₁
//! ```
//!
//! with `v = Dv = 0` and `η = 0` at both walls. The mean mode carries
//! `∂_t U = H₁ + ν U'' + P/L_x` and `∂_t W = H₂ + ν W''`. Pressure never
//! appears and `u` is rebuilt divergence-free from `(v, η)`.
//!
//! Every implicit solve is `(σ L − ν L²) v = r_v`, `(σ − ν L) η = r_η`,
//! `(σ − ν D²) U = r_U`; `σ = 0` gives the steady Stokes problem.

use std::sync::Arc;

use nalgebra::{DMatrix, LU};
use num_complex::Complex64;

use chanlab_core::cheb::{self, mat_vec_c, mat_vec_c_into, ChebGrid};
use chanlab_core::par;
use chanlab_core::spectral::transform::{to_physical, to_spectral, PlaneGrid};
use chanlab_core::{ChannelParams, Resolution, SpectralField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Advective term on a padded grid: 3/2 rule in `x` and `y`, and in `z`
/// products are formed on a finer Chebyshev–Gauss–Lobatto grid and
/// truncated back to degree `N`.
#[derive(Debug, Clone)]
pub struct Advection {
    params: ChannelParams,
    res: Resolution,
    plane: PlaneGrid,
    up: DMatrix<f64>,
    up_dz: DMatrix<f64>,
    down: DMatrix<f64>,
    /// Wall-normal spacing attributed to each physical plane.
    dz: Vec<f64>,
}

impl Advection {
    pub fn new(params: ChannelParams, res: Resolution, dealias: bool) -> Self {
        let g = cheb::grid(res.nz, params.h);
        let n = g.n;
        let (up, down, zq) = if dealias {
            // 2M − 2N > N keeps aliases of degree-2N products above N.
            let m = (3 * n).div_ceil(2) + 1;
            let fine = cheb::grid(m + 1, params.h);
            (g.interp_to(&fine), g.truncate_from(&fine), fine.z.clone())
        } else {
            (DMatrix::identity(res.nz, res.nz), DMatrix::identity(res.nz, res.nz), g.z.clone())
        };
        let up_dz = &up * &g.d;
        let q = zq.len();
        let dz = (0..q)
            .map(|i| {
                let below = if i + 1 < q { (zq[i] - zq[i + 1]).abs() } else { f64::INFINITY };
                let above = if i > 0 { (zq[i - 1] - zq[i]).abs() } else { f64::INFINITY };
                below.min(above)
            })
            .collect();
        Self {
            params,
            res,
            plane: PlaneGrid::new(res, dealias),
            up,
            up_dz,
            down,
            dz,
        }
    }

    /// `H = −(u·∇)u` and the largest `|u₁|/Δx + |u₂|/Δy + |u₃|/Δz` on the
    /// product grid (`Δx = L_x/m_x` etc.).
    pub fn evaluate(&self, u: &SpectralField) -> (SpectralField, f64) {
        let res = self.res;
        let p = self.params;
        let ncomp = res.modes() * res.nz;
        let one = |_: usize, _: usize| Complex64::new(1.0, 0.0);
        let kx = move |jx: usize, jy: usize| I * wavenumbers(&p, res, jx, jy).0;
        let ky = move |jx: usize, jy: usize| I * wavenumbers(&p, res, jx, jy).1;
        let comp = |c: usize| &u.data()[c * ncomp..(c + 1) * ncomp];
        let vals: Vec<Vec<f64>> = (0..3)
            .map(|c| to_physical(comp(c), res, &self.up, self.plane, one))
            .collect();
        let grads: Vec<[Vec<f64>; 3]> = (0..3)
            .map(|c| {
                [
                    to_physical(comp(c), res, &self.up, self.plane, kx),
                    to_physical(comp(c), res, &self.up, self.plane, ky),
                    to_physical(comp(c), res, &self.up_dz, self.plane, one),
                ]
            })
            .collect();
        let npts = vals[0].len();
        let plane_len = self.plane.len();
        let hx = p.lx / self.plane.mx as f64;
        let hy = p.ly / self.plane.my as f64;
        let mut out = SpectralField::zeros(p, res).expect("valid space");
        let nq = self.up.nrows();
        let mut speed: f64 = 0.0;
        for i in 0..3 {
            let h: Vec<f64> = par::map_range(npts, |q| {
                -(vals[0][q] * grads[i][0][q] + vals[1][q] * grads[i][1][q] + vals[2][q] * grads[i][2][q])
            });
            let spec = to_spectral(&h, nq, res, self.plane);
            let dst = &mut out.data_mut()[i * ncomp..(i + 1) * ncomp];
            for m in 0..res.modes() {
                mat_vec_c_into(&self.down, &spec[m * nq..(m + 1) * nq], &mut dst[m * res.nz..(m + 1) * res.nz]);
            }
        }
        for q in 0..npts {
            let iq = q / plane_len;
            let s = vals[0][q].abs() / hx + vals[1][q].abs() / hy + vals[2][q].abs() / self.dz[iq];
            speed = speed.max(s);
        }
        (out, speed)
    }
}

fn wavenumbers(p: &ChannelParams, res: Resolution, jx: usize, jy: usize) -> (f64, f64) {
    use chanlab_core::spectral::signed_index;
    (
        2.0 * std::f64::consts::PI * signed_index(jx, res.nx) as f64 / p.lx,
        2.0 * std::f64::consts::PI * signed_index(jy, res.ny) as f64 / p.ly,
    )
}

/// Flat index of the mode `(−j_x, −j_y)`; real fields are stored through
/// the smaller of the two.
fn mirror(res: Resolution, jx: usize, jy: usize) -> usize {
    ((res.nx - jx) % res.nx) * res.ny + (res.ny - jy) % res.ny
}

fn is_nyquist(res: Resolution, jx: usize, jy: usize) -> bool {
    (res.nx > 1 && jx == res.nx / 2) || (res.ny > 1 && jy == res.ny / 2)
}

/// Factorised implicit operators for one value of `σ`.
#[derive(Debug, Clone)]
struct ModeLu {
    v: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    eta: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

#[derive(Debug, Clone)]
pub struct ImplicitSolver {
    params: ChannelParams,
    res: Resolution,
    grid: Arc<ChebGrid>,
    sigma: f64,
    modes: Vec<Option<ModeLu>>,
    mean: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

/// Right-hand sides of one implicit solve, per mode: `(r_v, r_η)` for
/// `k² > 0`, `(r_U, r_W)` for the mean.
pub type ModeRhs = (Vec<Complex64>, Vec<Complex64>);

impl ImplicitSolver {
    pub fn new(params: ChannelParams, res: Resolution, sigma: f64) -> Self {
        let grid = cheb::grid(res.nz, params.h);
        let nu = params.nu;
        let nz = res.nz;
        let n = nz - 1;
        let eye = DMatrix::<f64>::identity(nz, nz);
        let modes = par::map_range(res.modes(), |m| {
            let (jx, jy) = (m / res.ny, m % res.ny);
            let (kx, ky) = wavenumbers(&params, res, jx, jy);
            let k2 = kx * kx + ky * ky;
            if k2 == 0.0 || is_nyquist(res, jx, jy) {
                return None;
            }
            let l = &grid.d2 - &eye * k2;
            let mut a = &l * sigma - (&l * &l) * nu;
            for (row, src) in [(0, 0), (n, n)] {
                a.row_mut(row).copy_from(&eye.row(src));
            }
            a.row_mut(1).copy_from(&grid.d.row(0));
            a.row_mut(n - 1).copy_from(&grid.d.row(n));
            let mut b = &eye * sigma - &l * nu;
            b.row_mut(0).copy_from(&eye.row(0));
            b.row_mut(n).copy_from(&eye.row(n));
            Some(ModeLu { v: a.lu(), eta: b.lu() })
        });
        let mut c = &eye * sigma - &grid.d2 * nu;
        c.row_mut(0).copy_from(&eye.row(0));
        c.row_mut(n).copy_from(&eye.row(n));
        Self {
            params,
            res,
            grid,
            sigma,
            modes,
            mean: c.lu(),
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Solves every mode and assembles the velocity. Boundary rows of the
    /// right-hand sides are overwritten with the wall conditions. Only one
    /// mode of each conjugate pair is solved; the other is its conjugate.
    pub fn solve(&self, rhs: &[ModeRhs]) -> SpectralField {
        let res = self.res;
        let nz = res.nz;
        let n = nz - 1;
        let g = &self.grid;
        let pencils: Vec<Option<[Vec<Complex64>; 3]>> = par::map_range(res.modes(), |m| {
            let (jx, jy) = (m / res.ny, m % res.ny);
            if mirror(res, jx, jy) < m {
                return None;
            }
            let (r1, r2) = &rhs[m];
            if m == 0 {
                let mut a = r1.clone();
                let mut b = r2.clone();
                for r in [&mut a, &mut b] {
                    r[0] = ZERO;
                    r[n] = ZERO;
                }
                let mut u1 = solve_complex(&self.mean, &a);
                let mut u2 = solve_complex(&self.mean, &b);
                for r in [&mut u1, &mut u2] {
                    r[0] = ZERO;
                    r[n] = ZERO;
                    r.iter_mut().for_each(|v| v.im = 0.0);
                }
                return Some([u1, u2, vec![ZERO; nz]]);
            }
            let lu = self.modes[m].as_ref()?;
            let mut rv = r1.clone();
            for i in [0, 1, n - 1, n] {
                rv[i] = ZERO;
            }
            let mut re = r2.clone();
            re[0] = ZERO;
            re[n] = ZERO;
            let v = solve_complex(&lu.v, &rv);
            let eta = solve_complex(&lu.eta, &re);
            let (kx, ky) = wavenumbers(&self.params, res, jx, jy);
            let k2 = kx * kx + ky * ky;
            let dv = mat_vec_c(&g.d, &v);
            let mut u1: Vec<Complex64> = dv.iter().zip(&eta).map(|(&d, &e)| I * (d * kx + e * ky) / k2).collect();
            let mut u2: Vec<Complex64> = dv.iter().zip(&eta).map(|(&d, &e)| I * (d * ky - e * kx) / k2).collect();
            let mut u3 = v;
            for r in [&mut u1, &mut u2, &mut u3] {
                r[0] = ZERO;
                r[n] = ZERO;
            }
            Some([u1, u2, u3])
        });
        let mut out = SpectralField::zeros(self.params, res).expect("valid space");
        for (m, p) in pencils.into_iter().enumerate() {
            if let Some(p) = p {
                let (jx, jy) = (m / res.ny, m % res.ny);
                let (px, py) = ((res.nx - jx) % res.nx, (res.ny - jy) % res.ny);
                for (c, vals) in p.iter().enumerate() {
                    out.pencil_mut(c, jx, jy).copy_from_slice(vals);
                    if (px, py) != (jx, jy) {
                        let conj: Vec<Complex64> = vals.iter().map(|v| v.conj()).collect();
                        out.pencil_mut(c, px, py).copy_from_slice(&conj);
                    }
                }
            }
        }
        out
    }
}

fn solve_complex(lu: &LU<f64, nalgebra::Dyn, nalgebra::Dyn>, r: &[Complex64]) -> Vec<Complex64> {
    let n = r.len();
    let mut b = DMatrix::<f64>::zeros(n, 2);
    for (i, v) in r.iter().enumerate() {
        b[(i, 0)] = v.re;
        b[(i, 1)] = v.im;
    }
    let x = lu.solve(&b).expect("implicit operator is nonsingular");
    (0..n).map(|i| Complex64::new(x[(i, 0)], x[(i, 1)])).collect()
}

/// Per-mode projections used to build right-hand sides.
pub struct ModeView {
    /// `L v` (or `U` for the mean).
    pub a: Vec<Complex64>,
    /// `η` (or `W` for the mean).
    pub b: Vec<Complex64>,
}

/// `(L v, η)` of every mode of `u`, with `(U, W)` for the mean.
pub fn state_view(u: &SpectralField) -> Vec<ModeView> {
    let res = u.resolution();
    let g = u.grid().clone();
    par::map_range(res.modes(), |m| {
        let (jx, jy) = (m / res.ny, m % res.ny);
        if m == 0 {
            return ModeView {
                a: u.pencil(0, 0, 0).to_vec(),
                b: u.pencil(1, 0, 0).to_vec(),
            };
        }
        let (kx, ky) = u.wavenumbers(jx, jy);
        let k2 = kx * kx + ky * ky;
        let v = u.pencil(2, jx, jy);
        let d2v = mat_vec_c(&g.d2, v);
        ModeView {
            a: d2v.iter().zip(v).map(|(a, b)| a - b * k2).collect(),
            b: u.eta(jx, jy),
        }
    })
}

/// `(h_v, h_g)` of every mode of an acceleration field `f`, with `(f₁, f₂)`
/// for the mean.
pub fn forcing_view(f: &SpectralField) -> Vec<ModeView> {
    let res = f.resolution();
    let g = f.grid().clone();
    par::map_range(res.modes(), |m| {
        let (jx, jy) = (m / res.ny, m % res.ny);
        if m == 0 {
            return ModeView {
                a: f.pencil(0, 0, 0).to_vec(),
                b: f.pencil(1, 0, 0).to_vec(),
            };
        }
        let (kx, ky) = f.wavenumbers(jx, jy);
        let k2 = kx * kx + ky * ky;
        let (f1, f2, f3) = (f.pencil(0, jx, jy), f.pencil(1, jx, jy), f.pencil(2, jx, jy));
        let horiz: Vec<Complex64> = f1.iter().zip(f2).map(|(a, b)| I * (a * kx + b * ky)).collect();
        let dh = mat_vec_c(&g.d, &horiz);
        ModeView {
            a: dh.iter().zip(f3).map(|(d, w)| -d - w * k2).collect(),
            b: f1.iter().zip(f2).map(|(a, b)| I * (b * kx - a * ky)).collect(),
        }
    })
}

/// Solves `ν A u = P f` (Leray projection implied) with no-slip walls.
#[derive(Debug, Clone)]
pub struct StokesSolver {
    inner: ImplicitSolver,
}

impl StokesSolver {
    pub fn new(params: ChannelParams, res: Resolution) -> Self {
        Self {
            inner: ImplicitSolver::new(params, res, 0.0),
        }
    }

    pub fn solve(&self, f: &SpectralField) -> SpectralField {
        let rhs: Vec<ModeRhs> = forcing_view(f).into_iter().map(|m| (m.a, m.b)).collect();
        self.inner.solve(&rhs)
    }
}

/// `u` with `ν A u = P f`; the singular case does not arise because `A` is
/// invertible under no-slip walls.
pub fn stokes_inverse(f: &SpectralField) -> SpectralField {
    StokesSolver::new(*f.params(), f.resolution()).solve(f)
}

/// The uniform acceleration `(c, 0, 0)` as a field.
pub fn uniform_x(params: ChannelParams, res: Resolution, c: f64) -> SpectralField {
    SpectralField::from_mean_profile(params, res, |_| (c, 0.0)).expect("valid space")
}

/// `Δu` componentwise on the nodes.
pub fn laplacian(u: &SpectralField) -> SpectralField {
    let res = u.resolution();
    let g = u.grid().clone();
    let mut out = u.scaled(0.0);
    for c in 0..3 {
        for jx in 0..res.nx {
            for jy in 0..res.ny {
                let (kx, ky) = u.wavenumbers(jx, jy);
                let k2 = kx * kx + ky * ky;
                let src = u.pencil(c, jx, jy);
                let d2 = mat_vec_c(&g.d2, src);
                let dst = out.pencil_mut(c, jx, jy);
                for ((o, a), b) in dst.iter_mut().zip(&d2).zip(src) {
                    *o = a - b * k2;
                }
            }
        }
    }
    out
}
