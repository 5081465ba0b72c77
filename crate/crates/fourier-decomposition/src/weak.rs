//! Terms of the inequality
//! `|b|_{L1(B)} <= C (|b|_{1,inf}^{1/p'} |b-|_p^{1/p} + |b^|_q)`.

use serde::Serialize;

use grid_measure::norms::{lp_of_masses, weak_l1_of_masses};
use grid_measure::{ball_mask, GridMeasure, SignedGridMeasure, Spectral};

use crate::decompose::conjugate_reciprocal;

#[derive(Debug, Clone, Serialize)]
pub struct WeakTypeTerms {
    pub local_l1: f64,
    pub weak_l1: f64,
    pub negative_lp: f64,
    pub fourier_lq: f64,
    pub rhs: f64,
    pub ratio: Option<f64>,
}

/// `|b^|_q` over the frequency lattice `k / L`, each sample weighted by `L^-n`.
/// The transform is the DFT of the cell masses.
pub fn fourier_norm(b: &SignedGridMeasure, q: f64) -> f64 {
    let grid = b.grid();
    let sp = Spectral::new(grid);
    let mags: Vec<f64> = sp.forward(b.mass()).iter().map(|z| z.norm()).collect();
    if q.is_infinite() {
        return mags.iter().cloned().fold(0.0, f64::max);
    }
    let w = grid.side().powi(-(grid.dim() as i32));
    (mags.iter().map(|m| m.powf(q)).sum::<f64>() * w).powf(1.0 / q)
}

pub fn weak_type_terms(b: &SignedGridMeasure, center: &[f64], radius: f64, p: f64, q: f64) -> WeakTypeTerms {
    let grid = b.grid();
    let vol = grid.cell_volume();
    let mask = ball_mask(grid, center, radius);
    let local_l1 = b.mass().iter().zip(&mask).filter(|(_, k)| **k).map(|(x, _)| x.abs()).sum();
    let abs: Vec<f64> = b.mass().iter().map(|x| x.abs()).collect();
    let weak_l1 = weak_l1_of_masses(&abs, vol);
    let neg: Vec<f64> = b.mass().iter().map(|x| (-x).max(0.0)).collect();
    let negative_lp = lp_of_masses(&neg, vol, p);
    let fourier_lq = fourier_norm(b, q);
    let ip = if p.is_infinite() { 0.0 } else { 1.0 / p };
    let rhs = weak_l1.powf(conjugate_reciprocal(p)) * negative_lp.powf(ip) + fourier_lq;
    WeakTypeTerms { local_l1, weak_l1, negative_lp, fourier_lq, rhs, ratio: (rhs > 0.0).then(|| local_l1 / rhs) }
}
