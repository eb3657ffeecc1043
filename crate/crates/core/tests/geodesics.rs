mod common;

use common::bound_orbit;
use finsler_core::geometry::*;
use finsler_core::*;

#[test]
fn lagrangian_is_conserved() {
    let a = build_ansatz(RadialProfile::schwarzschild(1, 1.0), TwoDBase::finsler_sphere(0.3)).unwrap();
    let start = bound_orbit(&a, 10.0, 1.3, 0.2, 0.01);
    assert!((a.value_at(&start).unwrap() + 1.0).abs() < 1e-12);
    let traj = integrate_geodesic(&a, &start, 100.0, 1e-11).unwrap();
    assert!((traj.final_tau() - 100.0).abs() < 1e-9);
    assert!(traj.max_relative_drift(&a).unwrap() < 1e-8);
}

#[test]
fn dense_output_matches_samples() {
    let a = build_ansatz(RadialProfile::reissner_nordstrom(1, 1.0, 0.1), TwoDBase::RiemannSphere).unwrap();
    let traj = integrate_geodesic(&a, &bound_orbit(&a, 12.0, 1.0, 0.1, 0.0), 20.0, 1e-11).unwrap();
    let mid = &traj.samples[traj.samples.len() / 2];
    let p = traj.interpolate(mid.tau).unwrap();
    assert!((p.x[1] - mid.state[1]).abs() < 1e-12);
    let q = traj.interpolate(0.5 * (mid.tau + traj.samples[traj.samples.len() / 2 + 1].tau)).unwrap();
    assert!(a.value_at(&q).is_ok());
    assert!(traj.interpolate(-1.0).is_none());
}

#[test]
fn radial_infall_reports_the_horizon() {
    let a = build_ansatz(RadialProfile::schwarzschild(1, 1.0), TwoDBase::finsler_sphere(0.3)).unwrap();
    let start = EvalPoint::new(vec![0.0, 3.0, 1.0, 0.0], vec![3.0f64.sqrt(), -1.0, 0.0, 0.01]).unwrap();
    match integrate_geodesic(&a, &start, 100.0, 1e-10) {
        Err(Error::Integration { tau, partial, .. }) => {
            assert!(tau > 0.0 && tau < 100.0);
            let last = partial.last_point();
            assert!(last.x[1] < 3.0 && last.x[1] > 1.5);
        }
        other => panic!("expected an integration error, got {other:?}"),
    }
}

#[test]
fn radial_direction_is_singular_on_the_randers_base() {
    let a = build_ansatz(RadialProfile::schwarzschild(1, 1.0), TwoDBase::finsler_sphere(0.3)).unwrap();
    let start = EvalPoint::new(vec![0.0, 5.0, 1.0, 0.0], vec![1.0, -0.2, 0.0, 0.0]).unwrap();
    assert!(matches!(integrate_geodesic(&a, &start, 1.0, 1e-10), Err(Error::Domain(_))));
}

#[test]
fn invalid_options() {
    let a = build_ansatz(RadialProfile::schwarzschild(1, 1.0), TwoDBase::RiemannSphere).unwrap();
    let p = bound_orbit(&a, 10.0, 1.0, 0.0, 0.0);
    assert!(matches!(integrate_geodesic(&a, &p, 10.0, 0.0), Err(Error::Config(_))));
    assert!(matches!(integrate_geodesic(&a, &p, -1.0, 1e-10), Err(Error::Config(_))));
}
