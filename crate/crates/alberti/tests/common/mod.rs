#![allow(dead_code)]

use alberti::*;
use fragments::{Fragment, IntervalUnion, Knot, LipschitzMap};
use grid_measure::Grid;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn unit_square(cells: usize) -> Grid {
    Grid::new(2, cells, 1.0, vec![0.0, 0.0]).unwrap()
}

/// `count` horizontal unit lines at heights `(i + 1/2) / count`, weight `1 / count`.
pub fn fubini_lines(count: usize, profile: DensityProfile) -> FragmentFamily {
    let entries = (0..count)
        .map(|i| {
            let y = (i as f64 + 0.5) / count as f64;
            let g = Fragment::segment(0.0, 1.0, vec![0.0, y], vec![1.0, y]).unwrap();
            FamilyEntry::new(1.0 / count as f64, g, profile.clone()).unwrap()
        })
        .collect();
    FragmentFamily::new(LipschitzMap::identity(2), entries).unwrap()
}

/// Length of the segment `p q` inside the box `[lo, hi]`, by slab clipping.
pub fn clipped_length(p: &[f64], q: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    let (mut a, mut b) = (0.0f64, 1.0f64);
    for k in 0..p.len() {
        let d = q[k] - p[k];
        if d == 0.0 {
            if p[k] < lo[k] || p[k] > hi[k] {
                return 0.0;
            }
            continue;
        }
        let (u, v) = ((lo[k] - p[k]) / d, (hi[k] - p[k]) / d);
        a = a.max(u.min(v));
        b = b.min(u.max(v));
    }
    let len: f64 = p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    (b - a).max(0.0) * len
}

/// A random polyline on `[0, 1]` with Lipschitz constant below 1, inside `[0.2, 0.8]^2`.
pub fn random_curve(rng: &mut ChaCha8Rng, pieces: usize) -> Fragment {
    let mut p = [rng.gen_range(0.35..0.65), rng.gen_range(0.35..0.65)];
    let mut knots = vec![Knot { t: 0.0, value: p.to_vec() }];
    for i in 1..=pieces {
        let dt = 1.0 / pieces as f64;
        let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let s = rng.gen_range(0.0..0.3);
        p = [(p[0] + dt * s * a.cos()).clamp(0.2, 0.8), (p[1] + dt * s * a.sin()).clamp(0.2, 0.8)];
        knots.push(Knot { t: i as f64 / pieces as f64, value: p.to_vec() });
    }
    Fragment::new(2, IntervalUnion::full(), knots).unwrap()
}

pub fn random_tent(rng: &mut ChaCha8Rng) -> DensityProfile {
    let a = rng.gen_range(0.05..0.4);
    let b = rng.gen_range(0.6..0.95);
    let m = rng.gen_range(a + 0.01..b - 0.01);
    DensityProfile::tent(a, m, b, rng.gen_range(0.1..2.0)).unwrap()
}

/// Generation-`gen` middle-half Cantor union in `[0, 1]`.
pub fn cantor(gen: u32) -> IntervalUnion {
    let mut iv = vec![(0.0, 1.0)];
    for _ in 0..gen {
        iv = iv
            .into_iter()
            .flat_map(|(a, b): (f64, f64)| {
                let q = (b - a) / 4.0;
                [(a, a + q), (b - q, b)]
            })
            .collect();
    }
    IntervalUnion::new(iv).unwrap()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
