//! The density-good set `{t in K : H^1([t-r, t+r] ∩ K) >= 2(1-eps) r for 0 <= r <= R}`.
//!
//! For fixed `t` the defect in `r` is piecewise linear with kinks at `|t - e|`
//! for endpoints `e`, so only those radii and `R` need checking. Between the
//! breakpoints `e`, `e ± R` and `(e + e')/2` every such constraint is linear in
//! `t`, and the good set is cut out by exact half-lines.

use crate::error::{FragmentError, Result};
use crate::interval::IntervalUnion;

#[derive(Clone, Copy)]
enum Radius {
    Fixed(f64),
    /// `r = t - e`
    Above(f64),
    /// `r = e - t`
    Below(f64),
}

impl Radius {
    fn at(self, t: f64) -> f64 {
        match self {
            Radius::Fixed(r) => r,
            Radius::Above(e) => t - e,
            Radius::Below(e) => e - t,
        }
    }

    fn slope(self) -> f64 {
        match self {
            Radius::Fixed(_) => 0.0,
            Radius::Above(_) => 1.0,
            Radius::Below(_) => -1.0,
        }
    }
}

fn defect(k: &IntervalUnion, t: f64, r: f64, eps: f64) -> f64 {
    k.measure_in(t - r, t + r) - 2.0 * (1.0 - eps) * r
}

/// Radii at which the minimum over `[0, big_r]` can be attained.
fn radii(ends: &[f64], t: f64, big_r: f64) -> Vec<Radius> {
    let mut out = vec![Radius::Fixed(big_r)];
    for &e in ends {
        let d = (t - e).abs();
        if d > 0.0 && d <= big_r {
            out.push(if e < t { Radius::Above(e) } else { Radius::Below(e) });
        }
    }
    out
}

fn good_at(k: &IntervalUnion, ends: &[f64], t: f64, eps: f64, big_r: f64) -> bool {
    k.contains(t) && radii(ends, t, big_r).into_iter().all(|r| defect(k, t, r.at(t), eps) >= 0.0)
}

/// `d/dt` of the defect along a radius family at an interior point `t`.
fn defect_slope(k: &IntervalUnion, t: f64, r: Radius, eps: f64) -> f64 {
    let rr = r.at(t);
    let (lo, hi) = (t - rr, t + rr);
    let (dlo, dhi) = (1.0 - r.slope(), 1.0 + r.slope());
    let mut s = 0.0;
    for &(a, b) in k.intervals() {
        if hi.min(b) - lo.max(a) > 0.0 {
            if hi < b {
                s += dhi;
            }
            if lo > a {
                s -= dlo;
            }
        }
    }
    s - 2.0 * (1.0 - eps) * r.slope()
}

pub fn density_good_set(k: &IntervalUnion, eps: f64, big_r: f64) -> Result<IntervalUnion> {
    if !(0.0..1.0).contains(&eps) {
        return Err(FragmentError::Parameter(format!("eps = {eps} outside [0, 1)")));
    }
    if !(big_r >= 0.0) || !big_r.is_finite() {
        return Err(FragmentError::Parameter(format!("radius {big_r} must be finite and nonnegative")));
    }
    let Some((lo, hi)) = k.hull() else {
        return Ok(IntervalUnion::empty());
    };
    let ends = k.endpoints();
    let mut bps: Vec<f64> = ends.clone();
    for (i, &e) in ends.iter().enumerate() {
        bps.push(e - big_r);
        bps.push(e + big_r);
        for &f in &ends[i + 1..] {
            if f - e <= 2.0 * big_r {
                bps.push(0.5 * (e + f));
            }
        }
    }
    bps.retain(|t| (lo..=hi).contains(t));
    bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bps.dedup();

    let mut good: Vec<(f64, f64)> = bps
        .iter()
        .filter(|&&t| good_at(k, &ends, t, eps, big_r))
        .map(|&t| (t, t))
        .collect();
    for w in bps.windows(2) {
        let (p, q) = (w[0], w[1]);
        let mid = 0.5 * (p + q);
        if !k.contains(mid) {
            continue;
        }
        let (mut a, mut b) = (p, q);
        for r in radii(&ends, mid, big_r) {
            let alpha = defect_slope(k, mid, r, eps);
            let beta = defect(k, mid, r.at(mid), eps) - alpha * mid;
            if alpha > 0.0 {
                a = a.max(-beta / alpha);
            } else if alpha < 0.0 {
                b = b.min(-beta / alpha);
            } else if beta < 0.0 {
                b = a - 1.0;
            }
            if a >= b {
                break;
            }
        }
        if a < b {
            good.push((a, b));
        }
    }
    IntervalUnion::new(good)
}
