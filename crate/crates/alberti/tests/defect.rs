mod common;

use alberti::*;
use fragments::{Fragment, IntervalUnion, LipschitzMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn on_line(domain: &IntervalUnion, y: f64) -> Fragment {
    // speed 0.8 along the x axis, restricted to the domain
    Fragment::segment(0.0, 1.0, vec![0.1, y], vec![0.9, y]).unwrap().restrict(domain)
}

#[test]
fn full_domains_lose_two_boundary_strips() {
    let grid = common::unit_square(64);
    for (eps, big_r) in [(0.1, 0.05), (0.25, 0.2), (0.4, 0.1)] {
        let fam = common::fubini_lines(16, DensityProfile::Speed);
        let nu = defect_measure(&fam, eps, big_r, &grid).unwrap();
        let strip = big_r * (1.0 - 2.0 * eps);
        // unit-speed lines: each strip carries its length times the weight
        assert!((nu.total() - 2.0 * strip).abs() < 1e-12, "{} vs {}", nu.total(), 2.0 * strip);
        let ball = defect_ball_mass(&fam, eps, big_r, &[0.5, 0.5], 2.0).unwrap();
        assert!((ball - 2.0 * strip).abs() < 1e-12);
    }
}

#[test]
fn defect_shrinks_to_zero_with_the_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let grid = common::unit_square(32);
    let entries = (0..20)
        .map(|_| {
            let cuts: Vec<(f64, f64)> = (0..3)
                .map(|_| {
                    let a = rng.gen_range(0.0..0.9);
                    (a, a + rng.gen_range(0.01..0.1))
                })
                .collect();
            let g = on_line(&IntervalUnion::new(cuts).unwrap(), rng.gen_range(0.1..0.9));
            FamilyEntry::new(rng.gen_range(0.1..1.0), g, DensityProfile::Speed).unwrap()
        })
        .collect();
    let fam = FragmentFamily::new(LipschitzMap::identity(2), entries).unwrap();
    let mut last: Option<Vec<f64>> = None;
    for big_r in [0.5, 0.2, 0.1, 0.05, 0.01, 1e-3, 1e-5, 1e-7] {
        let nu = defect_measure(&fam, 0.2, big_r, &grid).unwrap();
        if let Some(prev) = &last {
            for (a, b) in nu.mass().iter().zip(prev) {
                assert!(*a <= b + 1e-14);
            }
        }
        last = Some(nu.mass().to_vec());
    }
    assert!(last.unwrap().iter().sum::<f64>() < 1e-5);
}

/// Radius scan over dyadic radii; Cantor endpoints are dyadic, so every critical
/// radius of a dyadic point is on the scan.
fn scan_good(k: &IntervalUnion, t: f64, eps: f64, big_r: f64, dr: f64) -> bool {
    let steps = (big_r / dr).round() as usize;
    (0..=steps).all(|i| {
        let r = i as f64 * dr;
        k.measure_in(t - r, t + r) >= 2.0 * (1.0 - eps) * r
    })
}

#[test]
fn cantor_domains_are_mostly_bad() {
    let k = common::cantor(5);
    let eps = 0.1;
    let gap = 2.0 * 0.25f64.powi(5);
    let grid = common::unit_square(32);
    let g = Fragment::segment(0.0, 1.0, vec![0.1, 0.5], vec![0.9, 0.5]).unwrap().restrict(&k);
    let fam = FragmentFamily::new(LipschitzMap::identity(2), vec![FamilyEntry::new(1.0, g, DensityProfile::Speed).unwrap()]).unwrap();
    let mu = fam.total_mass();
    for big_r in [gap, 4.0 * gap, 0.1] {
        let ratio = defect_measure(&fam, eps, big_r, &grid).unwrap().total() / mu;
        assert!(ratio >= 0.2, "R = {big_r}: ratio {ratio}");
        // dyadic sample of the Cantor set
        let dt = 2f64.powi(-16);
        let (mut bad, mut all) = (0usize, 0usize);
        for i in 0..(1 << 16) {
            let t = (i as f64 + 0.5) * dt;
            if k.contains(t) {
                all += 1;
                if !scan_good(&k, t, eps, big_r, dt / 2.0) {
                    bad += 1;
                }
            }
        }
        let oracle = bad as f64 / all as f64;
        assert!((ratio - oracle).abs() < 0.01, "R = {big_r}: {ratio} vs scan {oracle}");
    }
}
