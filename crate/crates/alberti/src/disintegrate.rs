//! `F(f, gamma, P) = Σ_j w_j gamma_j#(f_j H^1)` on a grid.
//!
//! Each linear piece is split where it crosses grid lines, so every portion
//! lies in one cell and its exact integral is deposited there.

use fragments::{segment_ball_times, Segment};
use grid_measure::{Grid, ScalarGridMeasure, VectorGridMeasure};

use crate::error::{AlbertiError, Result};
use crate::family::FragmentFamily;

/// A sub-interval of a piece lying in a single cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Portion {
    pub lo: f64,
    pub hi: f64,
    pub cell: usize,
    pub mid: Vec<f64>,
}

pub fn portions(grid: &Grid, s: &Segment) -> Result<Vec<Portion>> {
    if s.is_point() {
        return Ok(vec![]);
    }
    let n = grid.dim();
    if s.p0.len() != n {
        return Err(AlbertiError::Parameter(format!("fragment in R^{} on a grid in R^{n}", s.p0.len())));
    }
    let h = grid.spacing();
    let mut cuts = vec![0.0, 1.0];
    for a in 0..n {
        let (x0, x1) = (s.p0[a], s.p1[a]);
        if x0 == x1 {
            continue;
        }
        let (lo, hi) = (x0.min(x1), x0.max(x1));
        let o = grid.origin()[a];
        let k0 = ((lo - o) / h).ceil() as i64;
        let k1 = ((hi - o) / h).floor() as i64;
        for k in k0..=k1 {
            let u = (o + k as f64 * h - x0) / (x1 - x0);
            if u > 0.0 && u < 1.0 {
                cuts.push(u);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let len = s.t1 - s.t0;
    let mut out = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let um = 0.5 * (w[0] + w[1]);
        let mid: Vec<f64> = s.p0.iter().zip(&s.p1).map(|(a, b)| a + um * (b - a)).collect();
        let cell = grid
            .locate(&mid)
            .ok_or_else(|| AlbertiError::Input(format!("fragment leaves the grid box near {mid:?}")))?;
        out.push(Portion { lo: s.t0 + w[0] * len, hi: s.t0 + w[1] * len, cell, mid });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Scalar,
    /// `F(f Dgamma, gamma, P)`.
    Vector,
}

#[derive(Debug, Clone)]
pub enum Disintegration {
    Scalar(ScalarGridMeasure),
    Vector(VectorGridMeasure),
}

/// Visit every portion of every entry with its weight, integral of `f`, and velocity.
pub(crate) fn for_each_portion(
    fam: &FragmentFamily,
    grid: &Grid,
    mut visit: impl FnMut(usize, &Portion, f64, &[f64]),
) -> Result<()> {
    for (j, e) in fam.entries.iter().enumerate() {
        if e.weight == 0.0 {
            continue;
        }
        for s in e.fragment.segments() {
            let speed = e.speed(&fam.phi, &s);
            let v = s.velocity();
            for p in portions(grid, &s)? {
                let m = e.weight * e.profile.integral(p.lo, p.hi, speed);
                visit(j, &p, m, &v);
            }
        }
    }
    Ok(())
}

pub fn disintegrate_scalar(fam: &FragmentFamily, grid: &Grid) -> Result<ScalarGridMeasure> {
    if let Some(j) = fam.entries.iter().position(|e| !e.profile.is_nonnegative()) {
        return Err(AlbertiError::Parameter(format!("entry {j} has a signed profile; use vector mode")));
    }
    let mut mass = vec![0.0; grid.len()];
    for_each_portion(fam, grid, |_, p, m, _| mass[p.cell] += m)?;
    // exact integrals of nonnegative profiles; clamp roundoff of cancelled pieces
    mass.iter_mut().for_each(|x| *x = x.max(0.0));
    Ok(ScalarGridMeasure::new(grid.clone(), mass)?)
}

pub fn disintegrate_vector(fam: &FragmentFamily, grid: &Grid) -> Result<VectorGridMeasure> {
    let n = grid.dim();
    let mut values = vec![0.0; grid.len() * n];
    for_each_portion(fam, grid, |_, p, m, v| {
        for k in 0..n {
            values[p.cell * n + k] += m * v[k];
        }
    })?;
    Ok(VectorGridMeasure::new(grid.clone(), values)?)
}

pub fn disintegrate(fam: &FragmentFamily, grid: &Grid, mode: Mode) -> Result<Disintegration> {
    Ok(match mode {
        Mode::Scalar => Disintegration::Scalar(disintegrate_scalar(fam, grid)?),
        Mode::Vector => Disintegration::Vector(disintegrate_vector(fam, grid)?),
    })
}

/// `F(f, gamma, P)(B(x, rho))`, exactly, without a grid.
pub fn family_ball_mass(fam: &FragmentFamily, x: &[f64], rho: f64) -> f64 {
    fam.entries
        .iter()
        .map(|e| {
            let m: f64 = e
                .fragment
                .segments()
                .iter()
                .filter(|s| !s.is_point())
                .filter_map(|s| {
                    let (lo, hi) = segment_ball_times(s, x, rho)?;
                    Some(e.profile.integral(lo, hi, e.speed(&fam.phi, s)))
                })
                .sum();
            e.weight * m
        })
        .sum()
}
