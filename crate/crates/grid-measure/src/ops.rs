//! Restriction, rasterization and mollification.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GridError, Result};
use crate::grid::{dist2, Grid};
use crate::measure::{GridMeasure, ScalarGridMeasure, SignedGridMeasure, VectorGridMeasure};
use crate::spectral::Spectral;

/// Cells of the closed ball `B(center, radius)`, decided by cell centre.
/// The cell containing `center` is always included, so radius 0 keeps one cell.
pub fn ball_mask(grid: &Grid, center: &[f64], radius: f64) -> Vec<bool> {
    let n = grid.dim();
    let r2 = radius * radius;
    let own = grid.locate(center);
    (0..grid.len())
        .map(|i| Some(i) == own || dist2(&grid.cell_center(i), center, n) <= r2)
        .collect()
}

pub fn restrict(m: &ScalarGridMeasure, center: &[f64], radius: f64) -> ScalarGridMeasure {
    let mask = ball_mask(m.grid(), center, radius);
    let mass = m.mass().iter().zip(&mask).map(|(x, k)| if *k { *x } else { 0.0 }).collect();
    ScalarGridMeasure::new(m.grid().clone(), mass).expect("restriction keeps masses valid")
}

/// Mass of `m` inside the closed ball, by cell centre.
pub fn ball_mass<M: GridMeasure + ?Sized>(m: &M, center: &[f64], radius: f64) -> f64 {
    let mask = ball_mask(m.grid(), center, radius);
    m.cell_magnitudes().iter().zip(&mask).filter(|(_, k)| **k).map(|(x, _)| x).sum()
}

/// A weighted point, optionally carrying a vector payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointMass {
    pub location: Vec<f64>,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Vec<f64>>,
}

impl PointMass {
    pub fn new(location: Vec<f64>, weight: f64) -> Self {
        Self { location, weight, payload: None }
    }

    pub fn with_payload(location: Vec<f64>, payload: Vec<f64>) -> Self {
        Self { location, weight: 0.0, payload: Some(payload) }
    }
}

pub type PointMassList = Vec<PointMass>;

fn locate_all(points: &[PointMass], grid: &Grid) -> Result<Vec<usize>> {
    let mut cells = Vec::with_capacity(points.len());
    let mut bad = Vec::new();
    for (k, p) in points.iter().enumerate() {
        match grid.locate(&p.location) {
            Some(c) if p.location.len() == grid.dim() => cells.push(c),
            _ => bad.push(k),
        }
    }
    if bad.is_empty() {
        Ok(cells)
    } else {
        Err(GridError::OutsideBox { count: bad.len(), first: bad.into_iter().take(8).collect() })
    }
}

/// Deposit each weight in the cell containing its location.
pub fn rasterize(points: &[PointMass], grid: &Grid) -> Result<ScalarGridMeasure> {
    if let Some(k) = points.iter().position(|p| !(p.weight >= 0.0)) {
        return Err(GridError::Input(format!("point {k} has negative weight")));
    }
    let cells = locate_all(points, grid)?;
    let mut mass = vec![0.0; grid.len()];
    for (p, c) in points.iter().zip(cells) {
        mass[c] += p.weight;
    }
    ScalarGridMeasure::new(grid.clone(), mass)
}

/// Accumulate each payload in the cell containing its location.
pub fn rasterize_vector(points: &[PointMass], grid: &Grid) -> Result<VectorGridMeasure> {
    let n = grid.dim();
    let cells = locate_all(points, grid)?;
    let mut values = vec![0.0; grid.len() * n];
    for (p, c) in points.iter().zip(cells) {
        let load = p.payload.as_ref().ok_or_else(|| GridError::Input("missing payload".into()))?;
        if load.len() != n {
            return Err(GridError::Input("payload dimension differs from grid".into()));
        }
        for k in 0..n {
            values[c * n + k] += load[k];
        }
    }
    VectorGridMeasure::new(grid.clone(), values)
}

/// The bump `(1 - |x/s|^2)^4` on `|x| <= s`, normalized to unit integral.
pub fn bump(x2: f64, scale: f64, n: usize) -> f64 {
    let u = x2 / (scale * scale);
    if u >= 1.0 {
        return 0.0;
    }
    let z = match n {
        1 => 256.0 / 315.0,
        2 => std::f64::consts::PI / 5.0,
        _ => 512.0 * std::f64::consts::PI / 3465.0,
    };
    (1.0 - u).powi(4) / (z * scale.powi(n as i32))
}

/// Squared periodic distance between cell centre `i` and the point `x`.
fn periodic_dist2(grid: &Grid, i: usize, x: &[f64]) -> f64 {
    let c = grid.cell_center(i);
    let l = grid.side();
    (0..grid.dim())
        .map(|a| {
            let mut d = (c[a] - x[a]).rem_euclid(l);
            if d > l / 2.0 {
                d -= l;
            }
            d * d
        })
        .sum()
}

/// Deposit weights (and payloads) through the bump of the given scale, evaluated
/// at cell centres; used where a smooth field is needed for spectral derivatives.
pub fn deposit_smooth(points: &[PointMass], grid: &Grid, scale: f64, vector: bool) -> Result<Vec<f64>> {
    if !(scale > 0.0) {
        return Err(GridError::Parameter("scale must be positive".into()));
    }
    let n = grid.dim();
    let h = grid.spacing();
    let comps = if vector { n } else { 1 };
    let mut out = vec![0.0; grid.len() * comps];
    let vol = grid.cell_volume();
    let reach = (scale / h).ceil() as i64 + 1;
    let cells = grid.cells_per_side() as i64;
    if 2 * reach + 1 > cells {
        return Err(GridError::Parameter("deposit scale exceeds half the grid".into()));
    }
    locate_all(points, grid)?;
    for p in points {
        let home = grid.multi_index(grid.locate(&p.location).expect("located"));
        let span = |a: usize| if a < n { -reach..=reach } else { 0..=0 };
        for d0 in span(0) {
            for d1 in span(1) {
                for d2 in span(2) {
                    let delta = [d0, d1, d2];
                    let mut multi = [0usize; 3];
                    for a in 0..n {
                        multi[a] = (home[a] as i64 + delta[a]).rem_euclid(cells) as usize;
                    }
                    let idx = grid.flat_index(&multi);
                    let w = bump(periodic_dist2(grid, idx, &p.location), scale, n) * vol;
                    if w == 0.0 {
                        continue;
                    }
                    if vector {
                        let load = p.payload.as_ref().ok_or_else(|| GridError::Input("missing payload".into()))?;
                        for k in 0..n {
                            out[idx * n + k] += w * load[k];
                        }
                    } else {
                        out[idx] += w * p.weight;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Result of a mollification with its diagnostics.
#[derive(Debug, Clone)]
pub struct Mollified<M> {
    pub measure: M,
    /// Scale below one cell: the kernel is not resolved.
    pub under_resolved: bool,
    /// Mass within one kernel width of the box boundary after smoothing.
    pub leakage: f64,
}

/// Discrete kernel on cell-centre offsets, normalized to unit sum.
fn kernel_array(grid: &Grid, scale: f64) -> Vec<f64> {
    let origin_cell = grid.cell_center(0);
    let mut k: Vec<f64> = (0..grid.len())
        .map(|i| bump(periodic_dist2(grid, i, &origin_cell[..grid.dim()]), scale, grid.dim()))
        .collect();
    let s: f64 = k.iter().sum();
    if s > 0.0 {
        k.iter_mut().for_each(|x| *x /= s);
    } else {
        k[0] = 1.0;
    }
    k
}

fn convolve_components(grid: &Grid, raw: &[f64], comps: usize, scale: f64) -> Vec<f64> {
    let sp = Spectral::new(grid);
    let khat = sp.forward(&kernel_array(grid, scale));
    let mut out = vec![0.0; raw.len()];
    for c in 0..comps {
        let col: Vec<f64> = raw.iter().skip(c).step_by(comps).copied().collect();
        let spec: Vec<Complex64> = sp.forward(&col).iter().zip(&khat).map(|(a, b)| a * b).collect();
        for (i, v) in sp.inverse_real(spec).into_iter().enumerate() {
            out[i * comps + c] = v;
        }
    }
    out
}

/// Measures that can be rebuilt from raw component data after smoothing.
pub trait Mollify: GridMeasure + Sized {
    fn rebuild(&self, raw: Vec<f64>) -> Self;
}

impl Mollify for ScalarGridMeasure {
    fn rebuild(&self, raw: Vec<f64>) -> Self {
        // convolution with a nonnegative kernel; only roundoff can go negative
        let mass = raw.into_iter().map(|x| x.max(0.0)).collect();
        ScalarGridMeasure::new(self.grid().clone(), mass).expect("nonnegative")
    }
}

impl Mollify for SignedGridMeasure {
    fn rebuild(&self, raw: Vec<f64>) -> Self {
        SignedGridMeasure::new(self.grid().clone(), raw).expect("finite")
    }
}

impl Mollify for VectorGridMeasure {
    fn rebuild(&self, raw: Vec<f64>) -> Self {
        VectorGridMeasure::new(self.grid().clone(), raw).expect("finite")
    }
}

impl Mollify for crate::measure::MatrixGridMeasure {
    fn rebuild(&self, raw: Vec<f64>) -> Self {
        crate::measure::MatrixGridMeasure::new(self.grid().clone(), raw).expect("finite")
    }
}

pub fn mollify<M: Mollify>(m: &M, scale: f64) -> Result<Mollified<M>> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(GridError::Parameter(format!("mollifier scale {scale} must be positive")));
    }
    let grid = m.grid();
    let raw = convolve_components(grid, m.raw(), m.components(), scale);
    let measure = m.rebuild(raw);
    let leakage = boundary_mass(&measure, scale);
    Ok(Mollified { measure, under_resolved: scale < grid.spacing(), leakage })
}

/// Variation mass in cells whose centre is within `width` of the box boundary.
pub fn boundary_mass<M: GridMeasure + ?Sized>(m: &M, width: f64) -> f64 {
    let grid = m.grid();
    m.cell_magnitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| grid.distance_to_boundary(&grid.cell_center(*i)) <= width)
        .map(|(_, x)| x)
        .sum()
}

/// Variation mass outside the central box of side `L/2`.
pub fn outside_central_box<M: GridMeasure + ?Sized>(m: &M) -> f64 {
    let grid = m.grid();
    m.cell_magnitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| !grid.in_central_box(&grid.cell_center(*i)))
        .map(|(_, x)| x)
        .sum()
}
