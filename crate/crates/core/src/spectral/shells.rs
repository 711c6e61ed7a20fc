//! Wavenumber shells and Galerkin projections.
//!
//! Within each Fourier mode `(k_x, k_y)` every velocity component is expanded
//! in the discrete Dirichlet eigenbasis `φ_m` of the wall-normal grid, and the
//! piece `φ_m` is assigned the wavenumber `κ = (k_x² + k_y² + μ_m)^{1/2}`. The
//! expansion is orthogonal in both `|·|₀` and `‖·‖`, so shell energies and
//! enstrophies add up exactly. On the mean family `μ_m → (mπ/h)²`, the Stokes
//! spectrum, and `μ_1 ≥ π²/h²` always.

use num_complex::Complex64;

use super::field::SpectralField;
use crate::cheb::mat_vec_c;

/// Consecutive wavenumber bands `[0, c₀), [c₀, c₁), …, [c_last, ∞)`.
#[derive(Debug, Clone)]
pub struct ShellDecomposition {
    pub cutoffs: Vec<f64>,
    pub pieces: Vec<SpectralField>,
}

impl SpectralField {
    /// Keeps the part of `self` whose wavenumber satisfies `lo ≤ κ < hi`.
    pub fn band(&self, lo: f64, hi: f64) -> SpectralField {
        let res = self.resolution();
        let grid = self.grid().clone();
        let basis = grid.dirichlet();
        let n = grid.n;
        let mut out = SpectralField::zeros(*self.params(), res).expect("valid space");
        for jx in 0..res.nx {
            for jy in 0..res.ny {
                let (kx, ky) = self.wavenumbers(jx, jy);
                let k2 = kx * kx + ky * ky;
                let keep: Vec<bool> = basis
                    .mu
                    .iter()
                    .map(|mu| {
                        let kappa = (k2 + mu).sqrt();
                        kappa >= lo && kappa < hi
                    })
                    .collect();
                if keep.iter().all(|&k| k) {
                    for c in 0..3 {
                        let src = self.pencil(c, jx, jy).to_vec();
                        let dst = out.pencil_mut(c, jx, jy);
                        dst[1..n].copy_from_slice(&src[1..n]);
                    }
                    continue;
                }
                if !keep.iter().any(|&k| k) {
                    continue;
                }
                for c in 0..3 {
                    let interior = &self.pencil(c, jx, jy)[1..n];
                    let mut coef = mat_vec_c(&basis.project, interior);
                    for (a, &k) in coef.iter_mut().zip(&keep) {
                        if !k {
                            *a = Complex64::new(0.0, 0.0);
                        }
                    }
                    let back = mat_vec_c(&basis.phi, &coef);
                    out.pencil_mut(c, jx, jy)[1..n].copy_from_slice(&back);
                }
            }
        }
        out
    }

    /// `P_κ u`: all components with wavenumber below `kappa`.
    pub fn galerkin_project(&self, kappa: f64) -> SpectralField {
        self.band(0.0, kappa)
    }

    /// `Q_κ u = u − P_κ u`.
    pub fn galerkin_tail(&self, kappa: f64) -> SpectralField {
        self.band(kappa, f64::INFINITY)
    }

    /// Splits `self` into bands at the ascending `cutoffs`.
    pub fn shells(&self, cutoffs: &[f64]) -> ShellDecomposition {
        let mut edges = vec![0.0];
        edges.extend_from_slice(cutoffs);
        edges.push(f64::INFINITY);
        let pieces = edges.windows(2).map(|w| self.band(w[0], w[1])).collect();
        ShellDecomposition {
            cutoffs: cutoffs.to_vec(),
            pieces,
        }
    }
}

impl ShellDecomposition {
    pub fn sum(&self) -> SpectralField {
        let mut total = self.pieces[0].scaled(0.0);
        for p in &self.pieces {
            total.axpy(1.0, p).expect("pieces share a space");
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ChannelParams;
    use crate::spectral::{random_divfree, Resolution};
    use std::f64::consts::PI;

    fn field() -> SpectralField {
        let p = ChannelParams::new(3.0, 2.0, 1.2, 1.0, 1.0).unwrap();
        random_divfree(p, Resolution::new(8, 4, 17).unwrap(), 11, 0.5).unwrap()
    }

    #[test]
    fn shells_sum_and_are_orthogonal() {
        let u = field();
        let d = u.shells(&[4.0, 8.0, 15.0, 30.0]);
        let back = d.sum();
        assert!((&back - &u).l2_norm() < 1e-12 * u.l2_norm());
        let e: f64 = d.pieces.iter().map(|p| p.l2_norm_sq()).sum();
        let g: f64 = d.pieces.iter().map(|p| p.grad_norm_sq()).sum();
        assert!((e / u.l2_norm_sq() - 1.0).abs() < 1e-11);
        assert!((g / u.grad_norm_sq() - 1.0).abs() < 1e-11);
        for i in 0..d.pieces.len() {
            for j in 0..i {
                let a = d.pieces[i].inner_l2(&d.pieces[j]).unwrap();
                let b = d.pieces[i].inner_grad(&d.pieces[j]).unwrap();
                assert!(a.abs() < 1e-11 * u.l2_norm_sq());
                assert!(b.abs() < 1e-11 * u.grad_norm_sq());
            }
        }
    }

    #[test]
    fn projection_limits() {
        let u = field();
        let h = u.params().h;
        assert_eq!(u.galerkin_project(PI / h).l2_norm(), 0.0);
        let all = u.galerkin_project(f64::INFINITY);
        assert!((&all - &u).l2_norm() < 1e-12 * u.l2_norm());
    }

    #[test]
    fn tail_bounded_by_enstrophy() {
        let u = field();
        for kappa in [3.0, 5.0, 10.0, 20.0, 40.0] {
            let p = u.galerkin_project(kappa);
            assert!(p.l2_norm() <= u.l2_norm() * (1.0 + 1e-12));
            assert!(p.grad_norm() <= u.grad_norm() * (1.0 + 1e-12));
            let tail = u.l2_norm_sq() - p.l2_norm_sq();
            assert!(tail <= u.grad_norm_sq() / (kappa * kappa) * (1.0 + 1e-10) + 1e-14);
        }
    }
}
