#![allow(dead_code)]

use fragments::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random union of up to `max` intervals with endpoints on the grid `k / 2^bits`.
pub fn dyadic_union(rng: &mut ChaCha8Rng, max: usize, bits: u32) -> IntervalUnion {
    let scale = (1u64 << bits) as f64;
    let count = rng.gen_range(1..=max);
    let iv = (0..count)
        .map(|_| {
            let a = rng.gen_range(0..=(1u64 << bits));
            let len = rng.gen_range(0..=(1u64 << bits) / 4);
            let b = (a + len).min(1u64 << bits);
            (a as f64 / scale, b as f64 / scale)
        })
        .collect();
    IntervalUnion::new(iv).unwrap()
}

/// Random point in the cone `C(e, eps)` of `R^2` with `<w, e> >= delta` and `|w| <= 1`.
fn cone_velocity(rng: &mut ChaCha8Rng, e: [f64; 2], eps: f64, delta: f64) -> [f64; 2] {
    let lam: f64 = 1.0 - eps * eps / 2.0;
    let max_angle = lam.acos().min(delta.acos());
    let beta = rng.gen_range(-max_angle..=max_angle);
    let s = rng.gen_range(delta / beta.cos()..=1.0);
    let perp = [-e[1], e[0]];
    [s * (beta.cos() * e[0] + beta.sin() * perp[0]), s * (beta.cos() * e[1] + beta.sin() * perp[1])]
}

/// A member of `Gamma(phi, e, eps, delta)`: every increment between consecutive
/// knots, across gaps too, has a velocity in the cone with enough speed along `e`.
/// With `lift`, the fragment lives in `R^3` and `phi` projects away the last axis.
pub fn random_member(
    rng: &mut ChaCha8Rng,
    e: [f64; 2],
    eps: f64,
    delta: f64,
    lift: bool,
) -> (Fragment, LipschitzMap) {
    let domain = loop {
        let d = dyadic_union(rng, 5, 10);
        if d.measure() > 0.05 {
            break d;
        }
    };
    let mut ts = domain.endpoints();
    for _ in 0..rng.gen_range(0..6) {
        let t: f64 = rng.gen();
        if domain.contains(t) {
            ts.push(t);
        }
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup();
    let mut p = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), 0.0];
    let mut knots = vec![Knot { t: ts[0], value: p.to_vec() }];
    for w in ts.windows(2) {
        let dt = w[1] - w[0];
        let v = cone_velocity(rng, e, eps, delta);
        let mut z = 0.0;
        if lift {
            // vertical component within what the unit speed bound leaves
            let vz2: f64 = 1.0 - v[0] * v[0] - v[1] * v[1];
            z = rng.gen_range(-1.0..=1.0) * vz2.max(0.0).sqrt() * 0.99;
        }
        p = [p[0] + dt * v[0], p[1] + dt * v[1], p[2] + dt * z];
        knots.push(Knot { t: w[1], value: p.to_vec() });
    }
    if lift {
        let phi = LipschitzMap::affine(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], vec![0.0, 0.0]).unwrap();
        (Fragment::new(3, domain, knots).unwrap(), phi)
    } else {
        let knots = knots.into_iter().map(|k| Knot { t: k.t, value: k.value[..2].to_vec() }).collect();
        (Fragment::new(2, domain, knots).unwrap(), LipschitzMap::identity(2))
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}
