//! Lebesgue norms of cell densities and the weak-L1 quasinorm.

use crate::error::{GridError, Result};
use crate::measure::GridMeasure;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    /// `p = 1` is total variation, `p = inf` is the sup of the density.
    Lp(f64),
    /// `sup_l l * vol{|density| > l}`.
    WeakL1,
}

pub fn norm<M: GridMeasure + ?Sized>(m: &M, spec: NormSpec) -> Result<f64> {
    let mags = m.cell_magnitudes();
    let vol = m.grid().cell_volume();
    match spec {
        NormSpec::Lp(p) if p.is_nan() || p < 1.0 => {
            Err(GridError::Parameter(format!("exponent {p} below 1")))
        }
        NormSpec::Lp(p) => Ok(lp_of_masses(&mags, vol, p)),
        NormSpec::WeakL1 => Ok(weak_l1_of_masses(&mags, vol)),
    }
}

/// `L^p` norm of the density `|m_i| / vol`.
pub fn lp_of_masses(mags: &[f64], vol: f64, p: f64) -> f64 {
    if p == 1.0 {
        return mags.iter().map(|m| m.abs()).sum();
    }
    if p.is_infinite() {
        return mags.iter().map(|m| m.abs()).fold(0.0, f64::max) / vol;
    }
    let top = mags.iter().map(|m| m.abs()).fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    // scale by the largest mass to stay away from overflow
    let s: f64 = mags.iter().map(|m| (m.abs() / top).powf(p)).sum();
    (top / vol) * (s * vol).powf(1.0 / p)
}

/// The supremum over `l` is approached from below each attained density value,
/// so it equals `max_k d_k * vol * #{d >= d_k}`.
pub fn weak_l1_of_masses(mags: &[f64], vol: f64) -> f64 {
    let mut d: Vec<f64> = mags.iter().map(|m| m.abs() / vol).filter(|x| *x > 0.0).collect();
    d.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut best = 0.0f64;
    for k in 0..d.len() {
        // evaluate at the last entry of each run of equal values
        if k + 1 == d.len() || d[k + 1] != d[k] {
            best = best.max(d[k] * vol * (k + 1) as f64);
        }
    }
    best
}
