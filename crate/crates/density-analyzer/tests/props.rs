mod common;

use density_analyzer::{local_support_estimate, scale_induction_certificate, AnalyzerConfig, Branch};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bootstrap_iff_the_measured_ratio_exceeds_c(
        lines in 256usize..2048,
        x0 in 0.05f64..0.95,
        x1 in 0.05f64..0.95,
        k in 0.3f64..1.0,
        doubling in 8.5f64..10.0,
    ) {
        let mut cfg = AnalyzerConfig::for_dim(2);
        cfg.doubling = doubling;
        let fams = common::fubini_square(lines);
        let x = [x0, x1];
        let r = k * cfg.ladder.top();
        let step = local_support_estimate(&fams, &cfg, &x, r).unwrap();
        let m1 = common::square_ball_oracle(lines, &x, r);
        let m3 = common::square_ball_oracle(lines, &x, 3.0 * r);
        prop_assume!((m3 - doubling * m1).abs() > 1e-9 * m3);
        prop_assert_eq!(step.branch == Branch::NonDoublingBootstrap, m3 > doubling * m1);
    }

    #[test]
    fn every_step_has_one_branch_and_larger_seeds_stay_positive(
        x0 in 0.41f64..0.59,
        x1 in 0.41f64..0.59,
        a in 0.05f64..1.0,
        b in 0.05f64..1.0,
    ) {
        let cfg = AnalyzerConfig::for_dim(2);
        let fams = common::fubini_square(4096);
        let x = [x0, x1];
        let measured = scale_induction_certificate(&fams, &cfg, &x, None).unwrap();
        prop_assert_eq!(measured.steps.len(), cfg.ladder.count);
        prop_assert!(measured.steps.iter().all(|s| s.branch != Branch::fail("unset")));
        let c_max = measured.seed_constant;
        let (lo, hi) = (a.min(b) * c_max, a.max(b) * c_max);
        let small = scale_induction_certificate(&fams, &cfg, &x, Some(lo)).unwrap();
        let large = scale_induction_certificate(&fams, &cfg, &x, Some(hi)).unwrap();
        if small.is_positive() {
            prop_assert!(large.is_positive());
        }
        prop_assert!(small.c_emp >= 0.0 && large.c_emp >= small.c_emp);
    }
}
