use fourier_decomposition::*;
use grid_measure::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(cells: usize) -> Grid {
    Grid::new(2, cells, 2.0, vec![-1.0, -1.0]).unwrap()
}

fn disc(cells: usize, radius: f64) -> ScalarGridMeasure {
    ScalarGridMeasure::from_indicator(grid(cells), 1.0, |x| x[0] * x[0] + x[1] * x[1] <= radius * radius).unwrap()
}

fn identity_t(mu: &ScalarGridMeasure, a: &[f64]) -> MatrixGridMeasure {
    MatrixGridMeasure::from_scalar(mu, a)
}

#[test]
fn exponent_ranges() {
    assert!(check_exponent(1, f64::INFINITY).is_ok());
    assert!(check_exponent(2, 50.0).is_ok());
    assert!(check_exponent(2, f64::INFINITY).is_err());
    assert!(check_exponent(3, 1.49).is_ok());
    assert!(check_exponent(3, 1.5).is_err());
    assert!(check_exponent(2, 0.9).is_err());
    assert!((default_exponent(2) - 4.0 / 3.0).abs() < 1e-15);
}

#[test]
fn zero_inputs_give_zero_parts() {
    let g = grid(32);
    let req = DecompositionRequest::new(ScalarGridMeasure::zeros(g.clone()), MatrixGridMeasure::zeros(g), vec![0.0, 0.0], 0.5).unwrap();
    let out = decompose_divergence(&req).unwrap();
    assert!(out.g.iter().all(|x| *x == 0.0));
    assert!(out.b.iter().all(|x| *x == 0.0));
    assert_eq!(out.report.good_ratio, None);
}

#[test]
fn zero_defect_disc_has_no_bad_part() {
    let mu = disc(64, 0.5);
    let t = identity_t(&mu, &[1.0, 0.0, 0.0, 1.0]);
    let req = DecompositionRequest::new(mu.clone(), t, vec![0.0, 0.0], 0.5).unwrap();
    let out = decompose_divergence(&req).unwrap();
    assert!(out.report.b_norm <= 1e-8 * mu.total());
    for (a, b) in out.g.iter().zip(mu.mass()) {
        assert!((a - b).abs() <= 1e-12);
    }
    assert_eq!(out.report.branch, Branch::Constructed);
}

#[test]
fn support_violation_is_an_input_error() {
    let mu = disc(32, 0.8);
    let t = identity_t(&mu, &[1.0, 0.0, 0.0, 1.0]);
    let req = DecompositionRequest::new(mu, t, vec![0.0, 0.0], 0.3).unwrap();
    assert!(matches!(decompose_divergence(&req), Err(DecompError::Input(_))));
    let req = req.with_p(0.5);
    assert!(matches!(decompose_divergence(&req), Err(DecompError::Parameter(_))));
}

#[test]
fn line_measure_divergence_grows_linearly_in_resolution() {
    let mut logs = vec![];
    for cells in [64usize, 128, 256] {
        let g = grid(cells);
        let k = 20_000;
        let pts: Vec<PointMass> = (0..k)
            .map(|i| PointMass::new(vec![-0.5 + (i as f64 + 0.5) / k as f64, 1e-9], 1.0 / k as f64))
            .collect();
        let mu = rasterize(&pts, &g).unwrap();
        let t = identity_t(&mu, &[1.0, 0.0, 0.0, 1.0]);
        let req = DecompositionRequest::new(mu, t, vec![0.0, 0.0], 0.6).unwrap();
        let out = decompose_divergence(&req).unwrap();
        logs.push(((cells as f64).ln(), out.report.div_norm.ln()));
    }
    // least-squares slope of log |Div T| against log N
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let slope = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / logs.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((0.8..1.3).contains(&slope), "slope {slope}");
}

#[test]
fn p_one_and_large_defect_branches() {
    let mu = disc(32, 0.5);
    let t = identity_t(&mu, &[1.0, 0.0, 0.0, 1.0]);
    let req = DecompositionRequest::new(mu.clone(), t, vec![0.0, 0.0], 0.5).unwrap().with_p(1.0);
    let out = decompose_divergence(&req).unwrap();
    assert_eq!(out.report.branch, Branch::TrivialExponent);
    assert_eq!(out.g, mu.mass());

    let t = identity_t(&mu, &[-2.0, 0.0, 0.0, 1.0]);
    let req = DecompositionRequest::new(mu.clone(), t, vec![0.0, 0.0], 0.5).unwrap();
    let out = decompose_divergence(&req).unwrap();
    assert_eq!(out.report.branch, Branch::LargeDefect);
    assert_eq!(out.b, mu.mass());
}

fn random_pair(rng: &mut ChaCha8Rng, cells: usize) -> (ScalarGridMeasure, MatrixGridMeasure) {
    let g = grid(cells);
    let mass: Vec<f64> = (0..g.len())
        .map(|i| {
            let c = g.cell_center(i);
            if c[0] * c[0] + c[1] * c[1] <= 0.25 && rng.gen_bool(0.7) { rng.gen::<f64>() } else { 0.0 }
        })
        .collect();
    let mu = ScalarGridMeasure::new(g.clone(), mass).unwrap();
    let amp = rng.gen::<f64>() * 1.5;
    let vals: Vec<f64> = (0..g.len())
        .flat_map(|i| {
            let m = mu.mass()[i];
            [m, 0.0, 0.0, m].into_iter().map(|x| x + amp * (rng.gen::<f64>() - 0.5) * m).collect::<Vec<_>>()
        })
        .collect();
    (mu, MatrixGridMeasure::new(g, vals).unwrap())
}

#[test]
fn exactness_and_positivity_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (mu, t) = random_pair(&mut rng, 32);
        let req = DecompositionRequest::new(mu.clone(), t, vec![0.0, 0.0], 0.5).unwrap();
        for out in [decompose_divergence(&req).unwrap(), scaled_decompose(&req).unwrap()] {
            let top = mu.mass().iter().cloned().fold(0.0, f64::max);
            for i in 0..mu.mass().len() {
                assert!(out.g[i] >= 0.0);
                assert!((out.g[i] + out.b[i] - mu.mass()[i]).abs() <= 1e-10 * top);
            }
        }
    }
}

#[test]
fn centred_differences_agree_with_spectral_on_smooth_data() {
    let mu = mollify(&disc(128, 0.3), 0.15).unwrap().measure;
    let t = identity_t(&mu, &[1.0, 0.2, 0.0, 1.1]);
    let req = DecompositionRequest::new(mu.clone(), t, vec![0.0, 0.0], 0.5).unwrap();
    let a = decompose_divergence(&req).unwrap();
    let b = decompose_divergence(&req.with_mode(DerivativeMode::CenteredDifference)).unwrap();
    let rel = (a.report.b_norm - b.report.b_norm).abs() / a.report.b_norm;
    assert!(rel < 0.02, "{rel}");
}

#[test]
fn scaled_identity_matches_plain() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mu, t) = random_pair(&mut rng, 32);
    let req = DecompositionRequest::new(mu, t, vec![0.0, 0.0], 1.0).unwrap();
    let a = decompose_divergence(&req).unwrap();
    let b = scaled_decompose(&req).unwrap();
    for i in 0..a.g.len() {
        assert!((a.g[i] - b.g[i]).abs() <= 1e-8);
        assert!((a.b[i] - b.b[i]).abs() <= 1e-8);
    }
}

#[test]
fn scaled_zero_defect_with_diagonal_frame() {
    let mu = mollify(&disc(64, 0.4), 0.1).unwrap().measure;
    let frame = FrameMatrix::diagonal(&[1.0, 2.0]).unwrap();
    let t = identity_t(&mu, &frame.as_vector());
    let req = DecompositionRequest::new(mu.clone(), t, vec![0.0, 0.0], 1.0).unwrap().with_frame(frame);
    assert!(scaled_decompose(&req).unwrap().report.b_norm <= 1e-8 * mu.total());
    assert!(decompose_divergence(&req).unwrap().report.b_norm <= 1e-8 * mu.total());
}

#[test]
fn dilation_rescales_good_norm_as_predicted() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mu, t) = random_pair(&mut rng, 32);
    let frame = FrameMatrix::new(vec![vec![1.0, 0.3], vec![-0.2, 1.5]]).unwrap();
    let p = 1.3;
    let base = DecompositionRequest::new(mu.clone(), t.clone(), vec![0.0, 0.0], 0.5).unwrap().with_frame(frame.clone()).with_p(p);
    let g2 = Grid::new(2, 32, 4.0, vec![-2.0, -2.0]).unwrap();
    let mu2 = ScalarGridMeasure::new(g2.clone(), mu.mass().to_vec()).unwrap();
    let t2 = MatrixGridMeasure::new(g2, t.values().to_vec()).unwrap();
    let big = DecompositionRequest::new(mu2, t2, vec![0.0, 0.0], 1.0).unwrap().with_frame(frame.clone()).with_p(p);
    let a = scaled_decompose(&base).unwrap().report;
    let b = scaled_decompose(&big).unwrap().report;
    // ratio of the right-hand sides (r^n |I^-1|^n det I)^{-1/p'} at r and 2r
    let rhs = |r: f64| (r.powi(2) * frame.inv_norm().powi(2) * frame.det()).powf(-(1.0 - 1.0 / p));
    let predicted = rhs(1.0) / rhs(0.5);
    let observed = b.g_norm_p / a.g_norm_p;
    assert!((observed / predicted - 1.0).abs() < 0.05, "{observed} vs {predicted}");
    assert!((b.b_norm - a.b_norm).abs() <= 1e-9 * a.b_norm.max(1e-300));
}

#[test]
fn support_lower_bound_examples() {
    assert_eq!(support_lower_bound(1.0, 0.0, 0.5, 2.0).unwrap(), SupportBound::Bound { volume: 1.0 });
    assert!(matches!(support_lower_bound(1.0, 0.6, 0.5, 2.0).unwrap(), SupportBound::Refused { .. }));
    assert!(support_lower_bound(0.0, 0.0, 0.5, 2.0).is_err());
    assert!(support_lower_bound(1.0, 0.0, 0.0, 2.0).is_err());
}

#[test]
fn support_bound_below_square_volume() {
    let g = Grid::new(2, 64, 2.0, vec![-0.5, -0.5]).unwrap();
    let mu = ScalarGridMeasure::from_indicator(g, 1.0, |x| (0.0..1.0).contains(&x[0]) && (0.0..1.0).contains(&x[1])).unwrap();
    let t = identity_t(&mu, &[1.0, 0.0, 0.0, 1.0]);
    let req = DecompositionRequest::new(mu.clone(), t, vec![0.5, 0.5], 0.75).unwrap();
    let out = decompose_divergence(&req).unwrap().report;
    let bound = support_lower_bound(out.mu_norm, out.b_norm, out.g_norm_p, out.p).unwrap().value().unwrap();
    let nonzero = mu.mass().iter().filter(|m| **m > 0.0).count() as f64 * mu.grid().cell_volume();
    assert!(bound <= nonzero && nonzero <= 1.0 + 1e-12, "{bound}");
}

#[test]
fn quantified_bound_on_disc_is_positive_and_stable() {
    let mut c = vec![];
    for cells in [64usize, 128] {
        let mu = disc(cells, 0.5);
        let t = identity_t(&mu, &[1.0, 0.0, 0.0, 1.0]);
        let req = DecompositionRequest::new(mu, t, vec![0.0, 0.0], 0.5).unwrap();
        let est = quantified_support_bound(&req, 1.0, 200.0).unwrap();
        assert!(est.c_emp > 0.0);
        c.push(est.c_emp);
    }
    assert!(c[0] / c[1] < 2.0 && c[1] / c[0] < 2.0);
}

#[test]
fn quantified_bound_names_failed_hypothesis() {
    let mu = disc(64, 0.5);
    let t = identity_t(&mu, &[-1.0, 0.0, 0.0, 1.0]);
    // |I mu - T| = 2 |mu|
    let req = DecompositionRequest::new(mu.clone(), t, vec![0.0, 0.0], 0.5).unwrap();
    match quantified_support_bound(&req, 1.0, 200.0) {
        Err(DecompError::Hypothesis { name, .. }) => assert_eq!(name, "defect-bound"),
        other => panic!("{other:?}"),
    }
    let t = identity_t(&mu, &[1.0, 0.0, 0.0, 1.0]);
    let req = DecompositionRequest::new(mu, t, vec![0.0, 0.0], 0.5).unwrap();
    match quantified_support_bound(&req, 1.0, 1e-3) {
        Err(DecompError::Hypothesis { name, .. }) => assert_eq!(name, "divergence-bound"),
        other => panic!("{other:?}"),
    }
    let req = req.with_frame(FrameMatrix::diagonal(&[0.5, 1.0]).unwrap());
    match quantified_support_bound(&req, 1.0, 200.0) {
        Err(DecompError::Hypothesis { name, .. }) => assert_eq!(name, "frame-bound"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn result_serializes_to_json_without_arrays() {
    let mu = disc(16, 0.5);
    let t = identity_t(&mu, &[1.0, 0.0, 0.0, 1.0]);
    let req = DecompositionRequest::new(mu, t, vec![0.0, 0.0], 0.5).unwrap();
    let out = decompose_divergence(&req).unwrap();
    let frame_json = serde_json::to_value(&out.frame).unwrap();
    assert_eq!(frame_json["rows"][1][1], 1.0);
    let back: FrameMatrix = serde_json::from_value(frame_json).unwrap();
    assert_eq!(back, out.frame);
}
