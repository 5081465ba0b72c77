//! Exact Hausdorff distances for interval unions and finite point sets.

use crate::error::{FragmentError, Result};
use crate::interval::IntervalUnion;

/// `sup_{a in A} dist(a, B)`: `dist(., B)` is piecewise linear on each interval
/// of `A`, with local maxima at interval endpoints or at gap midpoints of `B`.
fn directed_intervals(a: &IntervalUnion, b: &IntervalUnion) -> f64 {
    let mut best: f64 = 0.0;
    for &(lo, hi) in a.intervals() {
        best = best.max(b.distance(lo)).max(b.distance(hi));
    }
    for (g0, g1) in b.gaps() {
        let m = 0.5 * (g0 + g1);
        if a.contains(m) {
            best = best.max(0.5 * (g1 - g0));
        }
    }
    best
}

pub fn hausdorff_intervals(a: &IntervalUnion, b: &IntervalUnion) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(FragmentError::Parameter("Hausdorff distance of an empty set".into()));
    }
    Ok(finite_or_one(directed_intervals(a, b).max(directed_intervals(b, a))))
}

fn finite_or_one(d: f64) -> f64 {
    if d.is_finite() {
        d
    } else {
        1.0
    }
}

fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Directed distance with an early break: once some `b` is closer to `a` than
/// the running maximum, `a` cannot raise it.
fn directed_points(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let mut cmax: f64 = 0.0;
    for x in a {
        let mut cmin = f64::INFINITY;
        for y in b {
            let d = dist(x, y);
            if d < cmin {
                cmin = d;
                if cmin <= cmax {
                    break;
                }
            }
        }
        cmax = cmax.max(cmin);
    }
    cmax
}

pub fn hausdorff_points(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(FragmentError::Parameter("Hausdorff distance of an empty set".into()));
    }
    let m = a[0].len();
    if a.iter().chain(b).any(|p| p.len() != m) {
        return Err(FragmentError::Parameter("points of mixed dimension".into()));
    }
    Ok(finite_or_one(directed_points(a, b).max(directed_points(b, a))))
}
