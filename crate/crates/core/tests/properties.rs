use finsler_core::geometry::*;
use finsler_core::jets::{fd, homogeneity_check, partial, MultiIndex, Var};
use finsler_core::symmetry::*;
use finsler_core::*;
use proptest::prelude::*;

fn profile() -> impl Strategy<Value = RadialProfile> {
    prop_oneof![
        (0.5..2.0f64).prop_map(|gm| RadialProfile::schwarzschild(1, gm)),
        (0.5..1.5f64, 0.005..0.02f64).prop_map(|(gm, b)| RadialProfile::schwarzschild_de_sitter(1, gm, b)),
        (0.5..1.5f64, 0.0..0.2f64).prop_map(|(gm, q)| RadialProfile::reissner_nordstrom(1, gm, q)),
        (0.01..0.05f64).prop_map(|b| RadialProfile::de_sitter(1, b)),
    ]
}

/// Ansatz and a point outside the outer horizon (`r` grows with `GM`) but
/// inside the cosmological one.
fn ansatz_point() -> impl Strategy<Value = (Ansatz, EvalPoint)> {
    (
        profile(),
        0.0..0.8f64,
        0.0..1.0f64,
        -3.0..3.0f64,
        0.2..2.9f64,
        0.0..6.2f64,
        prop::array::uniform4(-1.0..1.0f64),
    )
        .prop_filter_map("inadmissible", |(p, eps, u, t, th, ph, y)| {
            let r = if p.gm > 0.0 { 3.2 * p.gm + 2.0 * u } else { 0.5 + 2.0 * u };
            let a = build_ansatz(p, TwoDBase::finsler_sphere(eps)).ok()?;
            let at = EvalPoint::new(vec![t, r, th, ph], y.to_vec()).ok()?;
            let l = a.value_at(&at).ok()?;
            (p.f(r) > 0.05 && l.abs() > 1e-2 * at.y_norm_sq()).then_some((a, at))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lagrangian_is_two_homogeneous((a, at) in ansatz_point()) {
        prop_assert!(homogeneity_check(&a, &at, 2).unwrap() < 1e-10);
    }

    #[test]
    fn metric_and_spray_scale_correctly((a, at) in ansatz_point(), lambda in 0.2..5.0f64) {
        let scaled = at.scaled(lambda);
        let g0 = metric(&a, &at).unwrap().g;
        let g1 = metric(&a, &scaled).unwrap().g;
        prop_assert!((&g1 - &g0).amax() < 1e-10 * g0.amax());
        let s0 = spray(&a, &at).unwrap();
        let s1 = spray(&a, &scaled).unwrap();
        prop_assert!((&s1 - &s0 * (lambda * lambda)).amax() < 1e-10 * (lambda * lambda) * s0.amax().max(1e-3));
    }

    #[test]
    fn curvature_is_invariant_under_direction_scaling((a, at) in ansatz_point(), lambda in 0.2..5.0f64) {
        let r0 = ricci_scalar(&a, &at).unwrap();
        let r1 = ricci_scalar(&a, &at.scaled(lambda)).unwrap();
        prop_assert!((r0 - r1).abs() < 1e-9 * r0.abs().max(1e-2));
    }

    #[test]
    fn spray_ignores_time_and_azimuth((a, at) in ansatz_point(), dt in -5.0..5.0f64, dphi in -3.0..3.0f64) {
        let mut moved = at.clone();
        moved.x[0] += dt;
        moved.x[3] += dphi;
        let s0 = spray(&a, &at).unwrap();
        let s1 = spray(&a, &moved).unwrap();
        prop_assert!((&s1 - &s0).amax() < 1e-12 * s0.amax().max(1.0));
    }

    #[test]
    fn jets_agree_with_finite_differences((a, at) in ansatz_point(), i in 0usize..4, j in 0usize..4) {
        let vars = [Var::X(1), Var::X(2)];
        let idx = MultiIndex::from_vars(4, &[vars[i % 2], Var::Y(j)]).unwrap();
        let exact = partial(&a, &at, &idx).unwrap();
        let approx = fd::field_partial(&a, &at, &idx, 1e-3, true);
        prop_assert!((exact - approx).abs() < 1e-6 * exact.abs().max(1.0));
    }

    #[test]
    fn killing_residual_is_sublinear(
        (a, at) in ansatz_point(),
        ca in -2.0..2.0f64,
        cb in -2.0..2.0f64,
    ) {
        let v = CoordinateField { dim: 4, index: 2 };
        let w = RotationField { dim: 4, axis: Rotation::X };
        let combo = Combination { a: ca, first: v, b: cb, second: w };
        let rv = killing_residual(&a, &v, &at).unwrap();
        let rw = killing_residual(&a, &w, &at).unwrap();
        let rc = killing_residual(&a, &combo, &at).unwrap();
        prop_assert!(rc <= ca.abs() * rv + cb.abs() * rw + 1e-12);
    }

    #[test]
    fn killing_residual_ignores_direction_scale((a, at) in ansatz_point(), lambda in 0.2..5.0f64) {
        let v = CoordinateField { dim: 4, index: 3 };
        let r0 = killing_residual(&a, &v, &at).unwrap();
        let r1 = killing_residual(&a, &v, &at.scaled(lambda)).unwrap();
        prop_assert!(r0 < 1e-10 && r1 < 1e-10);
        let w = CoordinateField { dim: 4, index: 1 };
        let r0 = killing_residual(&a, &w, &at).unwrap();
        let r1 = killing_residual(&a, &w, &at.scaled(lambda)).unwrap();
        prop_assert!((r0 - r1).abs() < 1e-10 * r0.max(1.0));
    }
}

#[test]
fn killing_system_is_linear_in_coefficients() {
    let a = build_ansatz(RadialProfile::de_sitter(1, 0.05), TwoDBase::finsler_sphere(0.3)).unwrap();
    let at = EvalPoint::new(vec![0.1, 2.0, 1.0, 0.4], vec![0.5, -0.3, 0.8, 0.2]).unwrap();
    let geo = MetricJet::new(&a, &at).unwrap();
    let v = RotationField { dim: 4, axis: Rotation::Y };
    let w = CoordinateField { dim: 4, index: 1 };
    let (vv, vj) = jacobian(&v, &at.x).unwrap();
    let (wv, wj) = jacobian(&w, &at.x).unwrap();
    let (cv, cj) = jacobian(&Combination { a: 1.5, first: v, b: -0.7, second: w }, &at.x).unwrap();
    let kv = geo.lie_derivative(&vv, &vj);
    let kw = geo.lie_derivative(&wv, &wj);
    let kc = geo.lie_derivative(&cv, &cj);
    assert!((kc - (kv * 1.5 - kw * 0.7)).amax() < 1e-13);
}
