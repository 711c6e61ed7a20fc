//! Spectral ↔ physical transforms on (optionally padded) horizontal grids.
//!
//! Physical planes are stored `[iz][iy][ix]`. Inverse transforms run the `y`
//! FFTs on `[jx][jy]` rows, transpose, then the `x` FFTs; forward transforms
//! retrace those steps and divide by `mx·my`.

use std::sync::{Arc, LazyLock, Mutex};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::{is_nyquist, signed_index, Resolution};
use crate::cheb::mat_vec_c_into;
use crate::par;

static PLANNER: LazyLock<Mutex<FftPlanner<f64>>> = LazyLock::new(|| Mutex::new(FftPlanner::new()));

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut p = PLANNER.lock().unwrap();
    if inverse {
        p.plan_fft_inverse(n)
    } else {
        p.plan_fft_forward(n)
    }
}

/// Physical grid size for `n` modes: `3n/2` with dealiasing, else `n`.
pub fn pad_size(n: usize, dealias: bool) -> usize {
    if dealias && n > 1 {
        3 * n / 2
    } else {
        n
    }
}

fn slot(j: i64, m: usize) -> usize {
    j.rem_euclid(m as i64) as usize
}

fn transpose(src: &[Complex64], rows: usize, cols: usize, dst: &mut [Complex64]) {
    for r in 0..rows {
        for c in 0..cols {
            dst[c * rows + r] = src[r * cols + c];
        }
    }
}

/// Horizontal grid on which physical values live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaneGrid {
    pub mx: usize,
    pub my: usize,
}

impl PlaneGrid {
    pub fn new(res: Resolution, dealias: bool) -> Self {
        Self {
            mx: pad_size(res.nx, dealias),
            my: pad_size(res.ny, dealias),
        }
    }

    pub fn len(&self) -> usize {
        self.mx * self.my
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One component `[jx][jy][iz]` to physical values `[iq][iy][ix]` where
/// `zmat` (rows `iq`) evaluates each pencil in the wall-normal direction.
/// `mult(jx, jy)` scales each mode (e.g. `i k_x` for an `x` derivative).
pub fn to_physical(
    spec: &[Complex64],
    res: Resolution,
    zmat: &DMatrix<f64>,
    plane: PlaneGrid,
    mult: impl Fn(usize, usize) -> Complex64 + Sync,
) -> Vec<f64> {
    let nq = zmat.nrows();
    let nz = res.nz;
    // Wall-normal evaluation, stored [iq][jx][jy].
    let mut zvals = vec![Complex64::new(0.0, 0.0); nq * res.modes()];
    let mut tmp = vec![Complex64::new(0.0, 0.0); nq];
    for jx in 0..res.nx {
        for jy in 0..res.ny {
            if is_nyquist(res, jx, jy) {
                continue;
            }
            let m = jx * res.ny + jy;
            let pencil = &spec[m * nz..(m + 1) * nz];
            let s = mult(jx, jy);
            if s == Complex64::new(0.0, 0.0) || pencil.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
                continue;
            }
            mat_vec_c_into(zmat, pencil, &mut tmp);
            for (iq, v) in tmp.iter().enumerate() {
                zvals[iq * res.modes() + m] = v * s;
            }
        }
    }
    let (mx, my) = (plane.mx, plane.my);
    let fy = plan(my, true);
    let fx = plan(mx, true);
    let planes = par::map_range(nq, |iq| {
        let mut buf = vec![Complex64::new(0.0, 0.0); mx * my];
        let src = &zvals[iq * res.modes()..(iq + 1) * res.modes()];
        for jx in 0..res.nx {
            let px = slot(signed_index(jx, res.nx), mx);
            for jy in 0..res.ny {
                let py = slot(signed_index(jy, res.ny), my);
                buf[px * my + py] = src[jx * res.ny + jy];
            }
        }
        fy.process(&mut buf);
        let mut t = vec![Complex64::new(0.0, 0.0); mx * my];
        transpose(&buf, mx, my, &mut t);
        fx.process(&mut t);
        t.into_iter().map(|v| v.re).collect::<Vec<f64>>()
    });
    planes.concat()
}

/// Physical planes `[iq][iy][ix]` back to Fourier modes `[jx][jy][iq]`
/// (truncated to `res`, Nyquist zeroed).
pub fn to_spectral(phys: &[f64], nq: usize, res: Resolution, plane: PlaneGrid) -> Vec<Complex64> {
    let (mx, my) = (plane.mx, plane.my);
    let fx = plan(mx, false);
    let fy = plan(my, false);
    let scale = 1.0 / (mx * my) as f64;
    let modes = par::map_range(nq, |iq| {
        let mut buf: Vec<Complex64> = phys[iq * mx * my..(iq + 1) * mx * my]
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        fx.process(&mut buf);
        let mut t = vec![Complex64::new(0.0, 0.0); mx * my];
        transpose(&buf, my, mx, &mut t);
        fy.process(&mut t);
        let mut out = vec![Complex64::new(0.0, 0.0); res.modes()];
        for jx in 0..res.nx {
            let px = slot(signed_index(jx, res.nx), mx);
            for jy in 0..res.ny {
                if is_nyquist(res, jx, jy) {
                    continue;
                }
                let py = slot(signed_index(jy, res.ny), my);
                out[jx * res.ny + jy] = t[px * my + py] * scale;
            }
        }
        out
    });
    let mut spec = vec![Complex64::new(0.0, 0.0); nq * res.modes()];
    for (iq, m) in modes.iter().enumerate() {
        for (k, v) in m.iter().enumerate() {
            spec[k * nq + iq] = *v;
        }
    }
    spec
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_single_mode() {
        let res = Resolution::new(8, 4, 5).unwrap();
        let nz = res.nz;
        let mut spec = vec![Complex64::new(0.0, 0.0); res.modes() * nz];
        // mode (j, l) = (2, -1) and its conjugate partner.
        let a = Complex64::new(0.3, -0.7);
        let (jx, jy) = (2, 3);
        let (cx, cy) = (8 - 2, 1);
        for iz in 0..nz {
            spec[(jx * 4 + jy) * nz + iz] = a * (iz + 1) as f64;
            spec[(cx * 4 + cy) * nz + iz] = a.conj() * (iz + 1) as f64;
        }
        let id = DMatrix::identity(nz, nz);
        for dealias in [false, true] {
            let plane = PlaneGrid::new(res, dealias);
            let phys = to_physical(&spec, res, &id, plane, |_, _| Complex64::new(1.0, 0.0));
            // u(x,y) = 2 Re(a e^{i(2·2πx/mx... )}) at iz = 0.
            let ix = 1;
            let iy = 1;
            let phase = 2.0 * std::f64::consts::PI * (2.0 * ix as f64 / plane.mx as f64 - iy as f64 / plane.my as f64);
            let expect = 2.0 * (a * Complex64::from_polar(1.0, phase)).re;
            assert!((phys[iy * plane.mx + ix] - expect).abs() < 1e-13);
            let back = to_spectral(&phys, nz, res, plane);
            for (x, y) in back.iter().zip(&spec) {
                assert!((x - y).norm() < 1e-13);
            }
        }
    }
}
