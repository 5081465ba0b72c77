use fragments::*;
use proptest::prelude::*;

fn union() -> impl Strategy<Value = IntervalUnion> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..0.3), 1..6)
        .prop_map(|v| IntervalUnion::new(v.into_iter().map(|(a, l)| (a, (a + l).min(1.0))).collect()).unwrap())
}

/// A 1-Lipschitz fragment in the plane with knots at the endpoints and midpoints.
fn fragment() -> impl Strategy<Value = Fragment> {
    (union(), prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64)).prop_map(|(k, dirs)| {
        let mut ts = k.endpoints();
        ts.extend(k.intervals().iter().map(|(a, b)| 0.5 * (a + b)));
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ts.dedup();
        let mut p = [0.0, 0.0];
        let mut knots = vec![Knot { t: ts[0], value: p.to_vec() }];
        for (w, d) in ts.windows(2).zip(dirs.iter().cycle()) {
            let l = (d.0 * d.0 + d.1 * d.1).sqrt().max(1.0);
            p = [p[0] + (w[1] - w[0]) * d.0 / l, p[1] + (w[1] - w[0]) * d.1 / l];
            knots.push(Knot { t: w[1], value: p.to_vec() });
        }
        Fragment::new(2, k, knots).unwrap()
    })
}

proptest! {
    #[test]
    fn cutoff_is_bounded_and_lipschitz(g in fragment(), x in (-0.5f64..0.5, -0.5f64..0.5), r in 0.01f64..0.3) {
        let cut = CutoffSpec::new(vec![x.0, x.1], r).unwrap();
        let p = extend_cutoff(&g, &cut).unwrap();
        for i in 0..=500 {
            let t = i as f64 / 500.0;
            let v = p.eval(t);
            prop_assert!((0.0..=2.0).contains(&v));
            let u = (t + 1e-3).min(1.0);
            prop_assert!((p.eval(u) - v).abs() <= (u - t) / r * (1.0 + 1e-9) + 1e-12);
        }
        for k in g.knots() {
            prop_assert!((p.eval(k.t) - cut.psi(&k.value)).abs() < 1e-12);
        }
    }

    #[test]
    fn restriction_keeps_values(g in fragment(), k in union()) {
        let h = g.restrict(&k);
        prop_assert_eq!(h.domain(), &g.domain().intersect(&k));
        for kn in h.knots() {
            let v = g.eval(kn.t).unwrap();
            prop_assert!((v[0] - kn.value[0]).abs() < 1e-12 && (v[1] - kn.value[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn good_set_monotone(k in union(), e1 in 0.0f64..0.5, de in 0.0f64..0.49, r1 in 0.0f64..0.3, dr in 0.0f64..0.3) {
        // boundaries are computed roots; allow one rounding step
        let inside = |a: &IntervalUnion, b: &IntervalUnion| {
            a.intervals().iter().all(|&(s, t)| b.distance(s) < 1e-12 && b.distance(t) < 1e-12)
                && a.intersect(b).measure() >= a.measure() - 1e-12
        };
        let g = density_good_set(&k, e1, r1 + dr).unwrap();
        prop_assert!(inside(&g, &density_good_set(&k, e1 + de, r1 + dr).unwrap()));
        prop_assert!(inside(&g, &density_good_set(&k, e1, r1).unwrap()));
    }

    #[test]
    fn hausdorff_symmetric(a in union(), b in union()) {
        prop_assert_eq!(hausdorff_intervals(&a, &b).unwrap(), hausdorff_intervals(&b, &a).unwrap());
    }
}
