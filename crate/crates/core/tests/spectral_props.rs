use std::f64::consts::PI;

use proptest::prelude::*;

use chanlab_core::spectral::{random_divfree, snapshot, trilinear, Dealias, QuadratureGrid};
use chanlab_core::{ChannelParams, Resolution, SpectralField};

fn space() -> impl Strategy<Value = (ChannelParams, Resolution)> {
    (0.5f64..6.0, 0.5f64..6.0, 0.3f64..3.0, 1usize..5, 1usize..4, 5usize..18).prop_map(|(lx, ly, h, nx, ny, nz)| {
        (
            ChannelParams::new(lx, ly, h, 1.0, 1.0).unwrap(),
            Resolution::new(2 * nx, if ny == 1 { 1 } else { 2 * ny }, nz).unwrap(),
        )
    })
}

fn field() -> impl Strategy<Value = SpectralField> {
    (space(), any::<u64>(), 0.0f64..3.0).prop_map(|((p, r), seed, slope)| random_divfree(p, r, seed, slope).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn random_fields_are_admissible(u in field()) {
        let scale = u.grad_norm();
        prop_assert!(u.divergence_norm() <= 1e-12 * scale.max(1.0));
        prop_assert_eq!(u.wall_max(), 0.0);
        prop_assert_eq!(u.symmetry_defect(), 0.0);
    }

    #[test]
    fn poincare_inequality(u in field()) {
        let h = u.params().h;
        prop_assert!(u.l2_norm_sq() <= (h / PI).powi(2) * u.grad_norm_sq() * (1.0 + 1e-12));
    }

    #[test]
    fn normal_strain_is_at_most_half(u in field()) {
        let (d33, rest) = u.normal_strain_split();
        prop_assert!(d33 <= 0.5 * (d33 + rest) * (1.0 + 1e-10) + 1e-14);
    }

    #[test]
    fn parseval_matches_physical_quadrature(u in field()) {
        let q = QuadratureGrid::new(*u.params(), u.resolution(), Dealias::Exact);
        let a = q.l2_norm_sq(&q.resolve(&u));
        let b = u.l2_norm_sq();
        prop_assert!((a - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn shells_partition_energy_and_enstrophy(u in field(), c0 in 1.0f64..4.0, ratio in 1.2f64..3.0) {
        let k1 = PI / u.params().h;
        let cuts: Vec<f64> = (0..4).map(|i| k1 * c0 * ratio.powi(i)).collect();
        let s = u.shells(&cuts);
        let e: f64 = s.pieces.iter().map(|p| p.l2_norm_sq()).sum();
        let g: f64 = s.pieces.iter().map(|p| p.grad_norm_sq()).sum();
        prop_assert!((e - u.l2_norm_sq()).abs() <= 1e-11 * u.l2_norm_sq());
        prop_assert!((g - u.grad_norm_sq()).abs() <= 1e-11 * u.grad_norm_sq());
        for i in 0..s.pieces.len() {
            for j in i + 1..s.pieces.len() {
                let x = s.pieces[i].inner_l2(&s.pieces[j]).unwrap();
                prop_assert!(x.abs() <= 1e-11 * u.l2_norm_sq());
            }
        }
    }

    #[test]
    fn galerkin_tail_bounded_by_enstrophy(u in field(), m in 1.0f64..6.0) {
        let kappa = m * PI / u.params().h;
        let pk = u.galerkin_project(kappa);
        prop_assert!(pk.l2_norm_sq() <= u.l2_norm_sq() * (1.0 + 1e-12));
        prop_assert!(pk.grad_norm_sq() <= u.grad_norm_sq() * (1.0 + 1e-12));
        let tail = u.l2_norm_sq() - pk.l2_norm_sq();
        prop_assert!(tail <= u.grad_norm_sq() / (kappa * kappa) * (1.0 + 1e-10) + 1e-14);
    }

    #[test]
    fn snapshot_round_trip_is_bitwise(u in field()) {
        let mut buf = Vec::new();
        snapshot::write_field(&mut buf, &u).unwrap();
        let back = snapshot::read_field(&mut buf.as_slice()).unwrap();
        prop_assert_eq!(back.params(), u.params());
        prop_assert_eq!(back.data(), u.data());
    }

    #[test]
    fn trilinear_is_skew_in_last_two(((p, r), s) in (space(), any::<u64>())) {
        let u = random_divfree(p, r, s, 1.0).unwrap();
        let v = random_divfree(p, r, s ^ 1, 1.0).unwrap();
        let w = random_divfree(p, r, s ^ 2, 1.0).unwrap();
        let scale = u.l2_norm() * v.grad_norm() * w.l2_norm() + 1e-300;
        let a = trilinear(&u, &v, &w).unwrap();
        let b = trilinear(&u, &w, &v).unwrap();
        prop_assert!((a + b).abs() <= 1e-11 * scale);
        prop_assert!(trilinear(&u, &v, &v).unwrap().abs() <= 1e-11 * scale);
    }
}

#[test]
fn same_seed_same_field() {
    let p = ChannelParams::unit();
    let r = Resolution::new(6, 4, 11).unwrap();
    let a = random_divfree(p, r, 9, 1.0).unwrap();
    let b = random_divfree(p, r, 9, 1.0).unwrap();
    assert_eq!(a.data(), b.data());
}

#[test]
fn discretized_poiseuille_norms() {
    let p = ChannelParams::unit();
    let u = SpectralField::poiseuille(p, Resolution::new(4, 4, 33).unwrap()).unwrap();
    assert!((u.l2_norm_sq() - 1.0 / 120.0).abs() < 1e-14);
    assert!((u.grad_norm_sq() - 1.0 / 12.0).abs() < 1e-13);
}
