mod common;

use common::{radial_grid, surface_grid, Textbook};
use finsler_core::catalog::oracle::*;
use finsler_core::geometry::*;
use finsler_core::*;

fn catalog() -> Vec<(RadialProfile, TwoDBase, f64, f64)> {
    let mut out = Vec::new();
    for eps in [0.0, 0.3, 0.7] {
        let fs = TwoDBase::finsler_sphere(eps);
        out.push((RadialProfile::schwarzschild(1, 1.0), fs, 3.0, 50.0));
        out.push((RadialProfile::schwarzschild_de_sitter(1, 1.0, 0.01), fs, 3.0, 8.0));
        out.push((RadialProfile::reissner_nordstrom(1, 1.0, 0.04), fs, 3.0, 50.0));
        out.push((RadialProfile::de_sitter(1, 0.05), fs, 0.5, 4.0));
    }
    out.push((RadialProfile::schwarzschild(-1, 1.0), TwoDBase::Hyperbolic, 0.5, 20.0));
    out.push((RadialProfile::schwarzschild(0, 1.0), TwoDBase::Flat, 0.5, 1.9));
    out
}

#[test]
fn spray_matches_closed_form() {
    for (p, b, lo, hi) in catalog() {
        let a = build_ansatz(p, b).unwrap();
        for at in radial_grid(&a, lo, hi, 25, 8, 1) {
            let g = spray(&a, &at).unwrap();
            let o = oracle_spray(&p, &b, &at).unwrap();
            let scale = o.amax().max(1e-3);
            assert!((&g - &o).amax() <= 1e-8 * scale, "{} at {at:?}", a.label());
        }
    }
}

#[test]
fn ricci_scalar_matches_closed_form() {
    for (p, b, lo, hi) in catalog() {
        let a = build_ansatz(p, b).unwrap();
        for at in radial_grid(&a, lo, hi, 25, 8, 2) {
            let ric = ricci_scalar(&a, &at).unwrap();
            let o = oracle_ricci(&p, &b, &at).unwrap();
            assert!((ric - o).abs() <= 1e-8 * o.abs().max(1.0), "{}: {ric} vs {o}", a.label());
        }
    }
}

#[test]
fn curvature_predecessor_matches_closed_form() {
    for (p, b, lo, hi) in catalog() {
        let a = build_ansatz(p, b).unwrap();
        for at in radial_grid(&a, lo, hi, 10, 4, 3) {
            let r = scaled_curvature_predecessor(&a, &at).unwrap();
            let o = oracle_scaled_predecessor(&p, &b, &at).unwrap();
            let scale = o.amax().max(1e-3);
            assert!((&r - &o).amax() <= 1e-8 * scale, "{}", a.label());
        }
    }
}

#[test]
fn finsler_sphere_has_unit_ricci() {
    for eps in [0.1, 0.3, 0.5, 0.7] {
        let s = Surface(TwoDBase::finsler_sphere(eps));
        for at in surface_grid(&s, 100, 4) {
            let ric = ricci_scalar(&s, &at).unwrap();
            assert!((ric - 1.0).abs() < 1e-8, "eps {eps}: {ric}");
            assert!(flag_residual(&s, &at, 1.0).unwrap() < 1e-8 * at.y_norm_sq().max(1.0));
        }
    }
}

#[test]
fn other_bases_have_their_curvature() {
    for base in [TwoDBase::Hyperbolic, TwoDBase::Flat, TwoDBase::RiemannSphere] {
        let s = Surface(base);
        for at in surface_grid(&s, 30, 5) {
            let ric = ricci_scalar(&s, &at).unwrap();
            assert!((ric - base.curvature() as f64).abs() < 1e-8);
        }
    }
}

#[test]
fn round_limit_matches_textbook_relativity() {
    let p = RadialProfile::reissner_nordstrom(1, 1.0, 0.3);
    let a = build_ansatz(p, TwoDBase::finsler_sphere(0.0)).unwrap();
    for at in radial_grid(&a, 3.0, 50.0, 10, 3, 6) {
        let tb = Textbook::new(&p, at.x[1], at.x[2]);
        let l = tb.lagrangian(&at.y);
        assert!((a.value_at(&at).unwrap() - l).abs() < 1e-12 * l.abs().max(1.0));

        let s = spray(&a, &at).unwrap();
        let ts = tb.spray(&at.y);
        for mu in 0..4 {
            assert!((s[mu] - ts[mu]).abs() < 1e-9 * ts[mu].abs().max(1e-2));
        }
        let state = einstein_tensor(&a, &at).unwrap();
        let tp = tb.predecessor(&at.y);
        let ric_y: f64 = (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .map(|(a, b)| tb.ricci[a][b] * at.y[a] * at.y[b])
            .sum();
        assert!((state.ric - ric_y / l).abs() < 1e-9 * (ric_y / l).abs().max(1e-3));
        let te = tb.einstein();
        let scale = te.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for mu in 0..4 {
            for nu in 0..4 {
                assert!((state.r_pred_scaled[(mu, nu)] - tp[mu][nu]).abs() < 1e-9 * scale.max(1e-3));
                assert!((state.ric_tensor[(mu, nu)] - tb.ricci[mu][nu]).abs() < 1e-9 * scale);
                assert!((state.einstein[(mu, nu)] - te[mu][nu]).abs() < 1e-9 * scale);
            }
        }
        assert!((state.scalar_curvature - tb.scalar).abs() < 1e-9 * scale);
    }
}

#[test]
fn charged_solution_einstein_tensor() {
    let p = RadialProfile::reissner_nordstrom(1, 1.0, 0.04);
    let base = TwoDBase::finsler_sphere(0.3);
    let a = build_ansatz(p, base).unwrap();
    let vol = base.ht_volume().unwrap();
    let q2 = p.charge_squared(1.0, vol);
    for at in radial_grid(&a, 3.0, 50.0, 8, 2, 7) {
        let state = einstein_tensor(&a, &at).unwrap();
        let expected = charged_einstein(&p, &base, &at).unwrap();
        let scale = expected.amax();
        assert!((&state.einstein - &expected).amax() < 1e-8 * scale);
        assert!((&state.ric_tensor - &expected).amax() < 1e-8 * scale);
        assert!(state.scalar_curvature.abs() < 1e-8);
        let t = state.energy_momentum(vol, 1.0);
        let te = charged_energy_momentum(&p, &base, &at, q2).unwrap();
        assert!((&t - &te).amax() < 1e-8 * te.amax());
    }
}
