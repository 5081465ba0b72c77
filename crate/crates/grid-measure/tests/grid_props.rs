use grid_measure::*;
use proptest::prelude::*;

fn masses(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..10.0], len)
}

fn grid16() -> Grid {
    Grid::new(2, 16, 2.0, vec![-1.0, -1.0]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mollify_preserves_mass(mass in masses(256), s in 0.05f64..0.6) {
        let mu = ScalarGridMeasure::new(grid16(), mass).unwrap();
        let before = mu.total();
        let after = mollify(&mu, s).unwrap().measure.total();
        prop_assert!((before - after).abs() <= 1e-10 * before.max(1e-300));
    }

    #[test]
    fn rasterize_preserves_mass(pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.0f64..5.0), 0..200)) {
        let list: Vec<PointMass> = pts.iter().map(|(x, y, w)| PointMass::new(vec![*x, *y], *w)).collect();
        let total: f64 = pts.iter().map(|p| p.2).sum();
        let mu = rasterize(&list, &grid16()).unwrap();
        prop_assert!((mu.total() - total).abs() <= 1e-10 * total.max(1.0));
    }

    #[test]
    fn restrict_is_monotone(mass in masses(256), r1 in 0.0f64..1.5, dr in 0.0f64..1.0, cx in -0.5f64..0.5, cy in -0.5f64..0.5) {
        let mu = ScalarGridMeasure::new(grid16(), mass).unwrap();
        let small = restrict(&mu, &[cx, cy], r1);
        let big = restrict(&mu, &[cx, cy], r1 + dr);
        prop_assert!(small.total() <= mu.total());
        for (a, b) in small.mass().iter().zip(big.mass()) {
            prop_assert!(a <= b);
        }
    }

    #[test]
    fn holder_and_weak_bounds(mass in masses(256), p in 1.0f64..6.0) {
        let mu = ScalarGridMeasure::new(grid16(), mass).unwrap();
        let l1 = norm(&mu, NormSpec::Lp(1.0)).unwrap();
        let lp = norm(&mu, NormSpec::Lp(p)).unwrap();
        let support = mu.support_volume();
        let conj = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
        let factor = if conj.is_infinite() { 1.0 } else { support.powf(1.0 / conj) };
        prop_assert!(l1 <= factor * lp * (1.0 + 1e-12) + 1e-300);
        let weak = norm(&mu, NormSpec::WeakL1).unwrap();
        prop_assert!(weak <= l1 * (1.0 + 1e-12));
    }
}
