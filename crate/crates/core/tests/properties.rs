use hypersym::fields::{Grid3, Sym3};
use hypersym::forms4::CircleAxis;
use hypersym::generators::{fhy_triple, random_valid_triple, FhyCoefficients};
use hypersym::hypersymplectic::{metric_from_gformula, sl3_act, verify_hypersymplectic};
use hypersym::isotopy::{compute_b, hyperkahler_endpoint, interpolate};
use hypersym::structural::extract;
use hypersym::Tolerances;
use nalgebra::Matrix3;
use proptest::prelude::*;

fn grid() -> Grid3 {
    Grid3::new(8).unwrap()
}

fn unimodular(entries: [f64; 9]) -> Option<Matrix3<f64>> {
    let m = Matrix3::identity() + Matrix3::from_row_slice(&entries);
    let det: f64 = m.determinant();
    (det > 0.2).then(|| m / det.cbrt())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn q_matrix_is_invariant_under_sl3(seed in 0u64..1000, e in prop::array::uniform9(-0.5f64..0.5)) {
        let Some(p) = unimodular(e) else { return Ok(()) };
        let tol = Tolerances::default();
        let t = random_valid_triple(seed, grid(), 0.4).unwrap();
        let g0 = metric_from_gformula(&t, &tol).unwrap();
        let g1 = metric_from_gformula(&sl3_act(&p, &t).unwrap(), &tol).unwrap();
        for l in [0, 100, 511] {
            prop_assert!((g0.at(l) - g1.at(l)).abs().max() < 1e-11);
        }
    }

    #[test]
    fn sigma_is_affine_along_the_path(seed in 0u64..1000, s in 0.0f64..1.0) {
        let tol = Tolerances::default();
        let t = random_valid_triple(seed, grid(), 0.5).unwrap();
        let sd = extract(&t, &tol).unwrap();
        let b = compute_b(&sd).unwrap();
        let end = hyperkahler_endpoint(&sd, &b).unwrap();
        let mid = extract(&interpolate(&t, &end, s).unwrap(), &tol).unwrap();
        let bhat = b.b_sym;
        for l in [0, 77, 300] {
            let want = sd.sigma.at(l).scale(1.0 - s).add(&bhat.scale(s));
            prop_assert!(mid.sigma.at(l).sub(&want).max_abs() < 1e-12);
        }
        prop_assert!(verify_hypersymplectic(&interpolate(&t, &end, s).unwrap(), &tol).passed);
    }

    #[test]
    fn endpoint_sigma_is_constant(a in 1.1f64..3.0, c in 0.5f64..2.0, amp in 0.0f64..0.4) {
        let mut m = FhyCoefficients::constant(Sym3::diag(a, 1.0, c));
        m.entries[1].cos = vec![amp];
        let tol = Tolerances::default();
        let t = fhy_triple(&m, grid(), CircleAxis::X3).unwrap();
        let sd = extract(&t, &tol).unwrap();
        let b = compute_b(&sd).unwrap();
        let end = extract(&hyperkahler_endpoint(&sd, &b).unwrap(), &tol).unwrap();
        for l in 0..grid().len() {
            prop_assert!(end.sigma.at(l).sub(&b.b_sym).max_abs() < 1e-12);
        }
    }
}
