use gmtlab::*;
use grid_measure::{Grid, GridMeasure};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid(cells: usize) -> Grid {
    Grid::new(2, cells, 2.0, vec![-0.5, -0.5]).unwrap()
}

fn family_mass(f: &density_analyzer::DirectedFamily) -> f64 {
    f.family.entries.iter().map(|e| e.weight * e.fragment.domain().measure()).sum()
}

#[test]
fn cantor_constructions() {
    let k = cantor_intervals(3);
    assert_eq!(k.len(), 8);
    assert!(k.iter().all(|(a, b)| (b - a - 1.0 / 64.0).abs() < 1e-15));
    assert_eq!(k[1], (3.0 / 64.0, 1.0 / 16.0));
    // removed length sum_k 2^(k-1) 4^-k
    for g in 0..=7 {
        let kept: f64 = fat_cantor_intervals(g).iter().map(|(a, b)| b - a).sum();
        let removed: f64 = (1..=g).map(|k| 2f64.powi(k as i32 - 1) * 0.25f64.powi(k as i32)).sum();
        assert!((kept - (1.0 - removed)).abs() < 1e-14);
    }
}

#[test]
fn square_realizes_lebesgue_with_zero_defect() {
    let fams = families(&Generator::SquareFubini { lines: 128 }).unwrap();
    let g = grid(64);
    let (mu, t) = realize(&fams, &g, Tensor::Families).unwrap();
    let h2 = g.cell_volume();
    for (i, m) in mu.mass().iter().enumerate() {
        let c = g.cell_center(i);
        let inside = (0.0..1.0).contains(&c[0]) && (0.0..1.0).contains(&c[1]);
        assert!((m - if inside { h2 } else { 0.0 }).abs() < 1e-15, "cell {i}");
    }
    let defect = t.defect(&mu, &[1.0, 0.0, 0.0, 1.0]).unwrap();
    assert!(defect.cell_magnitudes().iter().sum::<f64>() < 1e-12);
}

#[test]
fn family_masses_match_closed_forms() {
    let four = families(&Generator::FourCornerCantor { generation: 3, per_square: 4 }).unwrap();
    // 8 rows of 4 lines of weight 1/256 over K_3, whose length is 1/8
    for f in &four {
        assert!((family_mass(f) - 32.0 / 256.0 / 8.0).abs() < 1e-14);
    }
    let fat = families(&Generator::CantorFragments { generation: 4, lines: 64 }).unwrap();
    let kept: f64 = fat_cantor_intervals(4).iter().map(|(a, b)| b - a).sum();
    assert!((family_mass(&fat[0]) - kept).abs() < 1e-12);

    let (inner, outer) = (0.2, 0.45);
    let ann = families(&Generator::Annulus { center: [0.5, 0.5], inner, outer, lines: 4096 }).unwrap();
    let area = std::f64::consts::PI * (outer * outer - inner * inner);
    for f in &ann {
        assert!((family_mass(f) - area).abs() < 1e-4, "{} vs {area}", family_mass(f));
    }

    let line = families(&Generator::LineMeasure { from: [0.2, 0.2], to: [0.8, 1.0] }).unwrap();
    assert!((family_mass(&line[0]) - 1.0).abs() < 1e-15);
    assert!(line[1].family.is_empty());
    assert!((line[0].direction[0] - 0.6).abs() < 1e-15 && (line[1].direction[0] + 0.8).abs() < 1e-15);

    let mix = families(&Generator::Mixture { lines: 16, line_y: 0.5, line_weight: 1.5 }).unwrap();
    assert!((family_mass(&mix[0]) - 1.0 - 3.0).abs() < 1e-14);
    assert!((family_mass(&mix[1]) - 1.0).abs() < 1e-14);
}

#[test]
fn identity_tensor_is_the_reference_measure() {
    let fams = families(&Generator::Mixture { lines: 64, line_y: 0.5, line_weight: 1.0 }).unwrap();
    let (mu, t) = realize(&fams, &grid(64), Tensor::Identity).unwrap();
    assert!((mu.total() - 2.0).abs() < 1e-12);
    assert_eq!(t.entry(0, 1), vec![0.0; mu.mass().len()]);
    assert_eq!(t.entry(1, 1), mu.mass().to_vec());
}

#[test]
fn support_samples_lie_on_the_support() {
    let g = 4;
    let fams = families(&Generator::FourCornerCantor { generation: g, per_square: 2 }).unwrap();
    let k = cantor_intervals(g);
    let in_k = |t: f64| k.iter().any(|&(a, b)| a <= t && t <= b);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pts = sample_points(&fams, &Points::Support { count: 500 }, &mut rng).unwrap();
    assert!(pts.iter().all(|p| in_k(p[0]) && in_k(p[1])));

    let fams = families(&Generator::Annulus { center: [0.5, 0.5], inner: 0.2, outer: 0.45, lines: 256 }).unwrap();
    let pts = sample_points(&fams, &Points::Support { count: 500 }, &mut rng).unwrap();
    for p in pts {
        let r = (p[0] - 0.5).hypot(p[1] - 0.5);
        assert!((0.2 - 1e-12..=0.45 + 1e-12).contains(&r), "{p:?}");
    }
}

#[test]
fn box_samples_hold_degenerate_axes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pts = sample_points(&[], &Points::Box { count: 50, lo: vec![0.2, 0.5], hi: vec![0.8, 0.5] }, &mut rng).unwrap();
    assert!(pts.iter().all(|p| p[1] == 0.5 && (0.2..0.8).contains(&p[0])));
}
