mod common;

use alberti::*;
use fragments::{CutoffSpec, Fragment, LipschitzMap};
use grid_measure::Grid;

fn line_family(count: usize, angle: f64, centre: [f64; 2]) -> FragmentFamily {
    let d = [angle.cos(), angle.sin()];
    let entries = (0..count)
        .map(|i| {
            let off = (i as f64 - (count as f64 - 1.0) / 2.0) * 0.002;
            let p = [centre[0] - 0.5 * d[0] - off * d[1], centre[1] - 0.5 * d[1] + off * d[0]];
            let g = Fragment::segment(0.0, 1.0, p.to_vec(), vec![p[0] + d[0], p[1] + d[1]]).unwrap();
            FamilyEntry::new(1.0 / count as f64, g, DensityProfile::Speed).unwrap()
        })
        .collect();
    FragmentFamily::new(LipschitzMap::identity(2), entries).unwrap()
}

#[test]
fn empty_family_gives_zeros() {
    let fam = FragmentFamily::empty(LipschitzMap::identity(2));
    let cut = CutoffSpec::new(vec![0.5, 0.5], 0.03).unwrap();
    let r = localized_estimates(&fam, &cut, &[1.0, 0.0], 0.2, 0.45, 2.0).unwrap();
    assert_eq!((r.lhs1, r.rhs1, r.lhs2, r.rhs2, r.mu_3r, r.nu_2r), (0.0, 0.0, 0.0, 0.0, 0.0, 0.0));
    assert!(r.holds1 && r.holds2);
}

#[test]
fn axis_line_through_the_centre() {
    let g = Fragment::segment(0.0, 1.0, vec![0.0, 0.5], vec![1.0, 0.5]).unwrap();
    let fam = FragmentFamily::new(LipschitzMap::identity(2), vec![FamilyEntry::new(1.0, g, DensityProfile::Speed).unwrap()]).unwrap();
    let r0 = 0.01;
    let cut = CutoffSpec::new(vec![0.5, 0.5], r0).unwrap();
    // boundary strips of length R (1 - 2 eps) = 0.08 stay clear of B(x, 2r)
    let r = localized_estimates(&fam, &cut, &[1.0, 0.0], 0.45, 0.45, 0.8).unwrap();
    // velocity equals e on the whole domain
    assert!(r.lhs1 < 1e-12, "{r:?}");
    // psi rises to 2 and falls back along the line
    assert!((r.lhs2 - 4.0 * r0).abs() < 1e-12);
    assert!((r.mu_3r - 6.0 * r0).abs() < 1e-12);
    assert_eq!(r.nu_2r, 0.0);
    assert!(r.holds1 && r.holds2 && r.support_inside);
    assert!(r.rhs2 - r.lhs2 > 1.0);
}

/// `mu(B(x, rho))` for the 256 Fubini lines: the total chord length in the ball.
fn fubini_ball(rho: f64) -> f64 {
    (0..256)
        .map(|i| {
            let y = (i as f64 + 0.5) / 256.0 - 0.5;
            if y.abs() < rho { 2.0 * (rho * rho - y * y).sqrt().min(0.5) / 256.0 } else { 0.0 }
        })
        .sum()
}

#[test]
fn fubini_lines_at_the_largest_radius() {
    // r = 1/8 needs R > 24 r / delta > 1, and no point of a unit-length curve is
    // density-good beyond R = 1 / (2 (1 - eps)); every entry is zeroed and the
    // defect term carries the estimate
    let fam = common::fubini_lines(256, DensityProfile::Speed);
    let cut = CutoffSpec::new(vec![0.5, 0.5], 0.125).unwrap();
    let r = localized_estimates(&fam, &cut, &[1.0, 0.0], 0.49, 0.45, 7.0).unwrap();
    assert!(r.holds1 && r.holds2, "{r:?}");
    assert_eq!(r.zeroed, 256);
    assert!((r.mu_3r - fubini_ball(0.375)).abs() < 1e-12);
    assert!((r.nu_2r - fubini_ball(0.25)).abs() < 1e-12);
}

#[test]
fn fubini_lines_hold_at_every_radius() {
    let fam = common::fubini_lines(256, DensityProfile::Speed);
    for r0 in [1.0 / 64.0, 1.0 / 96.0, 1.0 / 128.0, 1.0 / 192.0, 1.0 / 256.0] {
        let cut = CutoffSpec::new(vec![0.5, 0.5], r0).unwrap();
        let r = localized_estimates(&fam, &cut, &[1.0, 0.0], 0.49, 0.45, 0.9).unwrap();
        assert!(r.holds1 && r.holds2, "r = {r0}: {r:?}");
        assert!(r.support_inside);
        assert!(r.lhs1 < 1e-12 && r.lhs2 > 0.0, "r = {r0}: {r:?}");
        assert_eq!(r.nu_2r, 0.0);
        assert!((r.mu_3r - fubini_ball(3.0 * r0)).abs() < 1e-12);
    }
}

#[test]
fn curvewise_difference_matches_grid_for_parallel_lines() {
    let angle = 10f64.to_radians();
    let fam = line_family(20, angle, [0.0, 0.0]);
    let cut = CutoffSpec::new(vec![0.0, 0.0], 0.01).unwrap();
    let (eps, delta, big_r) = (0.45, 0.45, 0.8);
    let rep = localized_estimates(&fam, &cut, &[1.0, 0.0], eps, delta, big_r).unwrap();
    let (field, _) = extended_families(&fam, &cut, &[1.0, 0.0], eps, delta, big_r).unwrap();
    let grid = Grid::new(2, 128, 2.0, vec![-1.0, -1.0]).unwrap();
    let vector = disintegrate_vector(&field, &grid).unwrap();
    // unit-speed curves: the scalar cutoff measure is psi mu
    let scalar = disintegrate_scalar(&field, &grid).unwrap();
    let diff: f64 = (0..grid.len())
        .map(|i| {
            let (a, b) = (scalar.mass()[i] - vector.values()[2 * i], -vector.values()[2 * i + 1]);
            (a * a + b * b).sqrt()
        })
        .sum();
    assert!(rep.lhs1 > 0.0);
    assert!((diff - rep.lhs1).abs() < 1e-10 * rep.lhs1.max(1.0), "{diff} vs {}", rep.lhs1);
    assert!(rep.holds1 && rep.holds2);
}

#[test]
fn radius_and_cone_preconditions() {
    let fam = common::fubini_lines(4, DensityProfile::Speed);
    let big = CutoffSpec::new(vec![0.5, 0.5], 0.45 * 2.0 / 12.0).unwrap();
    match localized_estimates(&fam, &big, &[1.0, 0.0], 0.2, 0.45, 2.0) {
        Err(AlbertiError::Precondition { name, .. }) => assert_eq!(name, "radius"),
        other => panic!("{other:?}"),
    }
    let steep = line_family(3, 60f64.to_radians(), [0.5, 0.5]);
    let cut = CutoffSpec::new(vec![0.5, 0.5], 0.03).unwrap();
    match localized_estimates(&steep, &cut, &[1.0, 0.0], 0.2, 0.45, 2.0) {
        Err(AlbertiError::Cone { index, t1, t2 }) => {
            assert_eq!(index, 0);
            assert!(t1 < t2);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn fragments_missing_the_good_set_are_zeroed() {
    // a short piece whose good set is empty at this scale
    let g = Fragment::segment(0.0, 0.01, vec![0.5, 0.5], vec![0.51, 0.5]).unwrap();
    let fam = FragmentFamily::new(LipschitzMap::identity(2), vec![FamilyEntry::new(1.0, g, DensityProfile::Speed).unwrap()]).unwrap();
    let cut = CutoffSpec::new(vec![0.5, 0.5], 0.03).unwrap();
    let r = localized_estimates(&fam, &cut, &[1.0, 0.0], 0.2, 0.45, 2.0).unwrap();
    assert_eq!(r.zeroed, 1);
    assert_eq!(r.lhs2, 0.0);
    assert!(r.nu_2r > 0.0);
    assert!(r.holds1);
}
