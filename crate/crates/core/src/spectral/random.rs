use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::field::{is_nyquist, signed_index, Resolution, SpectralField};
use crate::cheb::cheb_eval;
use crate::error::Result;
use crate::params::ChannelParams;

/// Random real divergence-free field with rms velocity 1.
///
/// Each mode is built from a wall-normal velocity `v = (1−ζ²)² p(ζ)` and a
/// vorticity `η = (1−ζ²) q(ζ)`; the mean mode carries `(1−ζ²) r(ζ)` in both
/// horizontal components. Polynomial coefficients are Gaussian with
/// amplitudes decaying like `((1 + h|k|)(1 + m))^{-slope}`. Deterministic in
/// `seed`.
pub fn random_divfree(params: ChannelParams, res: Resolution, seed: u64, slope: f64) -> Result<SpectralField> {
    let mut u = SpectralField::zeros(params, res)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = u.grid().clone();
    let n = grid.n;
    let zeta = grid.zeta.clone();

    let draw_poly = |rng: &mut ChaCha8Rng, degree: usize, kscale: f64| -> Vec<Complex64> {
        let coefs: Vec<(f64, f64)> = (0..=degree)
            .map(|m| {
                let amp = (kscale * (1.0 + m as f64)).powf(-slope);
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                (amp * re, amp * im)
            })
            .collect();
        let (re, im): (Vec<f64>, Vec<f64>) = coefs.into_iter().unzip();
        zeta.iter()
            .map(|&x| Complex64::new(cheb_eval(&re, x), cheb_eval(&im, x)))
            .collect()
    };

    for jx in 0..res.nx {
        for jy in 0..res.ny {
            if is_nyquist(res, jx, jy) {
                continue;
            }
            let (j, l) = (signed_index(jx, res.nx), signed_index(jy, res.ny));
            if j == 0 && l == 0 {
                for c in 0..2 {
                    let r = draw_poly(&mut rng, n - 2, 1.0);
                    let pencil = u.pencil_mut(c, 0, 0);
                    for (i, v) in pencil.iter_mut().enumerate() {
                        *v = Complex64::new((1.0 - zeta[i] * zeta[i]) * r[i].re, 0.0);
                    }
                }
                continue;
            }
            // Generate on the half spectrum, mirror to the conjugate partner.
            if !(j > 0 || (j == 0 && l > 0)) {
                continue;
            }
            let (kx, ky) = u.wavenumbers(jx, jy);
            let kscale = 1.0 + params.h * (kx * kx + ky * ky).sqrt();
            let p = draw_poly(&mut rng, n - 4, kscale);
            let q = draw_poly(&mut rng, n - 2, kscale);
            let v: Vec<Complex64> = (0..=n).map(|i| p[i] * (1.0 - zeta[i] * zeta[i]).powi(2)).collect();
            let eta: Vec<Complex64> = (0..=n).map(|i| q[i] * (1.0 - zeta[i] * zeta[i])).collect();
            u.set_mode_from_v_eta(jx, jy, &v, &eta);
            let (px, py) = ((res.nx - jx) % res.nx, (res.ny - jy) % res.ny);
            for c in 0..3 {
                let conj: Vec<Complex64> = u.pencil(c, jx, jy).iter().map(|z| z.conj()).collect();
                u.pencil_mut(c, px, py).copy_from_slice(&conj);
            }
        }
    }
    // Exact zeros at the walls (the wall factors vanish only to round-off).
    for c in 0..3 {
        for jx in 0..res.nx {
            for jy in 0..res.ny {
                let p = u.pencil_mut(c, jx, jy);
                p[0] = Complex64::new(0.0, 0.0);
                p[n] = Complex64::new(0.0, 0.0);
            }
        }
    }
    let norm = u.l2_norm();
    if norm > 0.0 {
        u = u.scaled(params.volume().sqrt() / norm);
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (ChannelParams, Resolution) {
        (
            ChannelParams::new(2.0, 1.0, 1.5, 1.0, 1.0).unwrap(),
            Resolution::new(8, 4, 13).unwrap(),
        )
    }

    #[test]
    fn deterministic_in_seed() {
        let (p, r) = setup();
        let a = random_divfree(p, r, 42, 1.0).unwrap();
        let b = random_divfree(p, r, 42, 1.0).unwrap();
        let c = random_divfree(p, r, 43, 1.0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn solenoidal_real_no_slip() {
        let (p, r) = setup();
        let u = random_divfree(p, r, 9, 1.0).unwrap();
        assert!(u.divergence_norm() <= 1e-12 * u.grad_norm());
        assert!(u.symmetry_defect() == 0.0);
        assert_eq!(u.wall_max(), 0.0);
        assert!((u.l2_norm_sq() / p.volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_vanishes_at_walls_for_normal_component() {
        let (p, r) = setup();
        let u = random_divfree(p, r, 4, 1.0).unwrap();
        let g = u.grid().clone();
        let dw = crate::cheb::mat_vec_c(&g.d, u.pencil(2, 1, 1));
        let scale = u.pencil(2, 1, 1).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dw[0].norm() < 1e-10 * scale.max(1e-300) * 100.0);
        assert!(dw[g.n].norm() < 1e-10 * scale.max(1e-300) * 100.0);
    }
}
