#![allow(dead_code)]

use alberti::{DensityProfile, FamilyEntry, FragmentFamily};
use density_analyzer::DirectedFamily;
use fragments::{Fragment, IntervalUnion, LipschitzMap};

/// Unit-speed lines across `[0,1]^2` at spacing `s`, horizontal and vertical.
pub fn fubini_square(lines: usize) -> Vec<DirectedFamily> {
    let s = 1.0 / lines as f64;
    let family = |axis: usize| {
        let entries = (0..lines)
            .map(|k| {
                let c = (k as f64 + 0.5) * s;
                let (p, q) = if axis == 0 { (vec![0.0, c], vec![1.0, c]) } else { (vec![c, 0.0], vec![c, 1.0]) };
                FamilyEntry::new(s, Fragment::segment(0.0, 1.0, p, q).unwrap(), DensityProfile::Speed).unwrap()
            })
            .collect();
        FragmentFamily::new(LipschitzMap::identity(2), entries).unwrap()
    };
    vec![DirectedFamily::new(family(0), vec![1.0, 0.0]), DirectedFamily::new(family(1), vec![0.0, 1.0])]
}

/// Middle-half Cantor intervals of generation `g` in `[0, 1]`.
pub fn cantor_intervals(g: usize) -> Vec<(f64, f64)> {
    let mut iv = vec![(0.0, 1.0)];
    for _ in 0..g {
        iv = iv.iter().flat_map(|&(a, b)| {
            let q = (b - a) / 4.0;
            [(a, a + q), (b - q, b)]
        }).collect();
    }
    iv
}

/// Lines through the four-corner Cantor set `K_g x K_g`, `per` lines per
/// square side, each restricted to `K_g`.
pub fn four_corner(g: usize, per: usize) -> Vec<DirectedFamily> {
    let iv = cantor_intervals(g);
    let side = iv[0].1 - iv[0].0;
    let s = side / per as f64;
    let domain = IntervalUnion::new(iv.clone()).unwrap();
    let family = |axis: usize| {
        let mut entries = vec![];
        for &(a, _) in &iv {
            for k in 0..per {
                let c = a + (k as f64 + 0.5) * s;
                let (p, q) = if axis == 0 { (vec![0.0, c], vec![1.0, c]) } else { (vec![c, 0.0], vec![c, 1.0]) };
                let full = Fragment::segment(0.0, 1.0, p, q).unwrap();
                entries.push(FamilyEntry::new(s, full.restrict(&domain), DensityProfile::Speed).unwrap());
            }
        }
        FragmentFamily::new(LipschitzMap::identity(2), entries).unwrap()
    };
    vec![DirectedFamily::new(family(0), vec![1.0, 0.0]), DirectedFamily::new(family(1), vec![0.0, 1.0])]
}

/// Length of `{t in [a, b] : |(t, c) - (x0, x1)| <= rho}` for the axis line at
/// offset `c`, `axis` giving the line's direction.
pub fn chord(a: f64, b: f64, c: f64, x: &[f64], axis: usize, rho: f64) -> f64 {
    let (along, across) = if axis == 0 { (x[0], x[1]) } else { (x[1], x[0]) };
    let d2 = rho * rho - (c - across).powi(2);
    if d2 <= 0.0 {
        return 0.0;
    }
    let w = d2.sqrt();
    ((along + w).min(b) - (along - w).max(a)).max(0.0)
}

/// `mu(B(x, rho))` of the Fubini square, as the mean of the two families.
pub fn square_ball_oracle(lines: usize, x: &[f64], rho: f64) -> f64 {
    let s = 1.0 / lines as f64;
    let one = |axis| (0..lines).map(|k| s * chord(0.0, 1.0, (k as f64 + 0.5) * s, x, axis, rho)).sum::<f64>();
    0.5 * (one(0) + one(1))
}

/// Ball mass of one four-corner family, summing chords over the Cantor intervals.
pub fn four_corner_ball_oracle(g: usize, per: usize, x: &[f64], rho: f64, axis: usize) -> f64 {
    let iv = cantor_intervals(g);
    let s = (iv[0].1 - iv[0].0) / per as f64;
    let mut total = 0.0;
    for &(a, _) in &iv {
        for k in 0..per {
            let c = a + (k as f64 + 0.5) * s;
            total += s * iv.iter().map(|&(lo, hi)| chord(lo, hi, c, x, axis, rho)).sum::<f64>();
        }
    }
    total
}

/// A point of `K_g x K_g` drawn from the given unit numbers.
pub fn cantor_point(g: usize, u: [f64; 4]) -> [f64; 2] {
    let iv = cantor_intervals(g);
    let m = iv.len();
    let pick = |a: f64, b: f64| {
        let (lo, hi) = iv[((a * m as f64) as usize).min(m - 1)];
        lo + b * (hi - lo)
    };
    [pick(u[0], u[1]), pick(u[2], u[3])]
}
