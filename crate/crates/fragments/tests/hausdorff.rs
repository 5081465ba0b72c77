mod common;

use fragments::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn iu(v: &[(f64, f64)]) -> IntervalUnion {
    IntervalUnion::new(v.to_vec()).unwrap()
}

#[test]
fn interval_union_normalizes() {
    let u = iu(&[(0.5, 0.7), (0.1, 0.2), (0.15, 0.3), (0.7, 0.8), (0.9, 0.9)]);
    assert_eq!(u.intervals(), &[(0.1, 0.3), (0.5, 0.8), (0.9, 0.9)]);
    assert!((u.measure() - 0.5).abs() < 1e-15);
    assert!((u.measure_in(0.25, 0.6) - 0.15).abs() < 1e-15);
    assert!(u.contains(0.9) && !u.contains(0.85));
    assert!(IntervalUnion::new(vec![(0.2, 0.1)]).is_err());
    assert!(IntervalUnion::new(vec![(-0.1, 0.1)]).is_err());
}

#[test]
fn hausdorff_examples() {
    let a = iu(&[(0.0, 0.3), (0.6, 0.61)]);
    assert_eq!(hausdorff_intervals(&a, &a).unwrap(), 0.0);
    assert_eq!(hausdorff_intervals(&IntervalUnion::full(), &iu(&[(0.0, 0.0)])).unwrap(), 1.0);
    let p = |v: &[f64]| v.iter().map(|x| vec![*x]).collect::<Vec<_>>();
    let d = hausdorff_points(&p(&[0.0, 0.5]), &p(&[0.1, 0.4])).unwrap();
    assert!((d - 0.1).abs() < 1e-15);
    assert!(hausdorff_intervals(&a, &IntervalUnion::empty()).is_err());
    assert!(hausdorff_points(&[], &p(&[0.1])).is_err());
}

fn sample(u: &IntervalUnion, step: f64) -> Vec<Vec<f64>> {
    let mut out = vec![];
    for &(a, b) in u.intervals() {
        let k = ((b - a) / step).ceil() as usize;
        for i in 0..=k {
            out.push(vec![a + (b - a) * i as f64 / k.max(1) as f64]);
        }
    }
    out
}

/// Brute force over dense samples is within one sample step of the exact value.
#[test]
fn interval_distance_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let step = 1e-3;
    for _ in 0..200 {
        let a = common::dyadic_union(&mut rng, 4, 8);
        let b = common::dyadic_union(&mut rng, 4, 8);
        let exact = hausdorff_intervals(&a, &b).unwrap();
        let brute = hausdorff_points(&sample(&a, step), &sample(&b, step)).unwrap();
        assert!((exact - brute).abs() <= step, "{exact} vs {brute} for {a:?} {b:?}");
    }
}

#[test]
fn point_distance_is_a_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let set = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
        (0..rng.gen_range(1..12)).map(|_| vec![rng.gen(), rng.gen()]).collect()
    };
    for _ in 0..1000 {
        let (a, b, c) = (set(&mut rng), set(&mut rng), set(&mut rng));
        let ab = hausdorff_points(&a, &b).unwrap();
        assert_eq!(ab, hausdorff_points(&b, &a).unwrap());
        let ac = hausdorff_points(&a, &c).unwrap();
        let cb = hausdorff_points(&c, &b).unwrap();
        assert!(ab <= ac + cb + 1e-12);
        assert_eq!(hausdorff_points(&a, &a).unwrap(), 0.0);
    }
}

#[test]
fn interval_distance_is_a_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let a = common::dyadic_union(&mut rng, 4, 10);
        let b = common::dyadic_union(&mut rng, 4, 10);
        let c = common::dyadic_union(&mut rng, 4, 10);
        let ab = hausdorff_intervals(&a, &b).unwrap();
        assert_eq!(ab, hausdorff_intervals(&b, &a).unwrap());
        let ac = hausdorff_intervals(&a, &c).unwrap();
        let cb = hausdorff_intervals(&c, &b).unwrap();
        assert!(ab <= ac + cb + 1e-12);
    }
}

#[test]
fn closure_difference_cases() {
    let k = iu(&[(0.0, 1.0)]);
    assert_eq!(k.closure_difference(&iu(&[(0.2, 0.8)])).intervals(), &[(0.0, 0.2), (0.8, 1.0)]);
    assert!(iu(&[(0.2, 0.5)]).closure_difference(&iu(&[(0.2, 0.5)])).is_empty());
    assert_eq!(k.closure_difference(&IntervalUnion::empty()), k);
    assert_eq!(iu(&[(0.1, 0.3), (0.6, 0.6)]).closure_difference(&iu(&[(0.0, 0.2)])).intervals(), &[(0.2, 0.3), (0.6, 0.6)]);
    assert_eq!(k.closure_difference(&iu(&[(0.5, 0.5)])), k);
}
