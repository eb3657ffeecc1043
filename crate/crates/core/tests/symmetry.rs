use std::f64::consts::TAU;

use finsler_core::symmetry::*;
use finsler_core::*;

fn rank_4d(profile: RadialProfile, eps: f64, r: (f64, f64)) -> KillingAnalysis {
    let a = build_ansatz(profile, TwoDBase::finsler_sphere(eps)).unwrap();
    let region = SampleRegion::new(vec![(-1.0, 1.0), r, (0.25, 2.9), (0.0, TAU)]);
    let family = spacetime_family(&FamilyOptions::default(), &region);
    let sample = region.admissible(&a, 120).unwrap();
    killing_analysis(&a, &family, &sample, RANK_THRESHOLD).unwrap()
}

#[test]
fn round_sphere_has_three_rotations() {
    let s = Surface(TwoDBase::RiemannSphere);
    let region = SampleRegion::new(vec![(0.25, 2.9), (0.0, TAU)]);
    let family = surface_family(&FamilyOptions::default());
    let sample = region.admissible(&s, 300).unwrap();
    assert_eq!(killing_rank(&s, &family, &sample).unwrap(), 3);
}

#[test]
fn finsler_sphere_keeps_only_the_axial_rotation() {
    let s = Surface(TwoDBase::finsler_sphere(0.3));
    let region = SampleRegion::new(vec![(0.25, 2.9), (0.0, TAU)]);
    let family = surface_family(&FamilyOptions::default());
    let sample = region.admissible(&s, 300).unwrap();
    let k = killing_analysis(&s, &family, &sample, RANK_THRESHOLD).unwrap();
    assert_eq!(k.rank, 1);
    // the null vector is V^phi = const
    let v = &k.null_vectors[0];
    let (i, _) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .unwrap();
    assert_eq!(
        family[i].factor,
        Factor::Angular { cos_power: 0, inverse_sine: false, fourier: 0 }
    );
    assert_eq!(family[i].component, 1);
}

#[test]
fn finslerian_schwarzschild_has_two() {
    let k = rank_4d(RadialProfile::schwarzschild(1, 1.0), 0.3, (3.0, 8.0));
    assert_eq!(k.rank, 2);
    assert!(k.equations >= 10 * k.unknowns);
}

#[test]
fn constant_curvature_spacetime_counts() {
    let p = RadialProfile::de_sitter(1, 0.05);
    let finsler = rank_4d(p, 0.3, (1.0, 4.0));
    let round = rank_4d(p, 0.0, (1.0, 4.0));
    // time translation and axial rotation survive; the round limit adds the
    // two other rotations
    assert_eq!(finsler.rank, 2);
    assert_eq!(round.rank, 4);
    assert!(round.rank > finsler.rank);
}
