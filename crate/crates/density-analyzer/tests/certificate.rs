mod common;

use alberti::{DensityProfile, FamilyEntry};
use density_analyzer::{scale_induction_certificate, AnalyzerConfig, Branch, CertificateStatus};
use fragments::Fragment;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LINES: usize = 16384;

#[test]
fn interior_square_point_is_positive_with_the_lebesgue_density() {
    let cfg = AnalyzerConfig::for_dim(2);
    let fams = common::fubini_square(LINES);
    let cert = scale_induction_certificate(&fams, &cfg, &[0.5, 0.5], None).unwrap();
    assert!(cert.is_positive(), "{:?}", cert.status);
    assert_eq!(cert.steps.len(), cfg.ladder.count);
    assert!(cert.c_emp > 0.0);
    // Theta = liminf mu(B(x, r)) / (2r)^2 = pi / 4 for Lebesgue measure
    let exact = std::f64::consts::PI / 4.0;
    assert!((cert.theta_estimate - exact).abs() < 0.01 * exact, "{}", cert.theta_estimate);
    // the certified bound holds at every examined radius and its triple
    for r in cfg.ladder.radii().into_iter().flat_map(|r| [r, 2.0 * r, 3.0 * r]) {
        let m = common::square_ball_oracle(LINES, &[0.5, 0.5], r);
        assert!(m >= cert.c_emp * (r / 9.0).powi(2), "r = {r}");
    }
}

#[test]
fn point_off_the_support_has_no_seed() {
    let cfg = AnalyzerConfig::for_dim(2);
    let fams = common::fubini_square(256);
    let top = cfg.ladder.top();
    let cert = scale_induction_certificate(&fams, &cfg, &[1.0 + 2.0 * top, 0.5], None).unwrap();
    assert_eq!(cert.status, CertificateStatus::NoSeed);
    assert_eq!(cert.c_emp, 0.0);
    assert_eq!(cert.steps.len(), cfg.ladder.count);
}

#[test]
fn inserted_shell_gives_exactly_one_bootstrap() {
    let mut cfg = AnalyzerConfig::for_dim(2);
    // off the borderline ratio 9 of Lebesgue measure
    cfg.doubling = 12.0;
    let x = [0.5, 0.5];
    let top = cfg.ladder.top();
    let mut fams = common::fubini_square(LINES);
    let extra = 256;
    for (axis, f) in fams.iter_mut().enumerate() {
        for k in 0..extra {
            let off = 2.05 * top + 0.9 * top * (k as f64 + 0.5) / extra as f64;
            for c in [x[1 - axis] - off, x[1 - axis] + off] {
                let (p, q) = if axis == 0 { (vec![0.0, c], vec![1.0, c]) } else { (vec![c, 0.0], vec![c, 1.0]) };
                let w = 20.0 * 0.9 * top / extra as f64;
                f.family.entries.push(FamilyEntry::new(w, Fragment::segment(0.0, 1.0, p, q).unwrap(), DensityProfile::Speed).unwrap());
            }
        }
    }
    let cert = scale_induction_certificate(&fams, &cfg, &x, None).unwrap();
    assert!(cert.is_positive(), "{:?}", cert.status);
    assert_eq!(cert.bootstrap_count(), 1);
    assert_eq!(cert.steps.last().unwrap().branch, Branch::NonDoublingBootstrap);
}

#[test]
fn square_and_cantor_separate() {
    let cfg = AnalyzerConfig::for_dim(2);
    let square = common::fubini_square(LINES);
    let cantor = common::four_corner(5, 16);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let count = 20;
    let mut positive = 0;
    let mut failed = 0;
    for _ in 0..count {
        let x = [rng.gen_range(0.4..0.6), rng.gen_range(0.4..0.6)];
        positive += scale_induction_certificate(&square, &cfg, &x, None).unwrap().is_positive() as usize;
        let y = common::cantor_point(5, rng.gen());
        let cert = scale_induction_certificate(&cantor, &cfg, &y, None).unwrap();
        failed += matches!(cert.status, CertificateStatus::HypothesisFail { .. }) as usize;
    }
    assert!(positive * 100 >= 95 * count, "{positive}/{count} square points positive");
    assert!(failed * 100 >= 95 * count, "{failed}/{count} Cantor points failed");
}
