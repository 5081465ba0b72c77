//! Layer-cake refinement: a family whose disintegration matches a target measure.

use fragments::IntervalUnion;
use grid_measure::{GridMeasure, ScalarGridMeasure};
use serde::Serialize;

use crate::disintegrate::{disintegrate_scalar, for_each_portion};
use crate::error::{AlbertiError, Result};
use crate::family::{FamilyEntry, FragmentFamily};

pub const MAX_LEVELS: usize = 64;

#[derive(Debug, Clone)]
pub struct LayerCake {
    pub family: FragmentFamily,
    pub report: LayerReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct LayerReport {
    /// Increasing positive levels `lambda_l`.
    pub levels: Vec<f64>,
    /// `Σ_q |g_hat_q D_q - target_q|`, where `D` is the family's disintegration.
    pub quantization_error: f64,
    /// `‖target‖ / 64`.
    pub tolerance: f64,
}

/// Per-cell quantized ratio `g_hat` and the sorted levels. Up to 64 distinct
/// ratios are kept exactly; otherwise cells are binned into 64 groups of equal
/// family mass, each taking its mass-preserving mean ratio.
fn quantize(target: &[f64], base: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut cells: Vec<(f64, usize)> =
        (0..base.len()).filter(|&q| base[q] > 0.0 && target[q] > 0.0).map(|q| (target[q] / base[q], q)).collect();
    cells.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut ghat = vec![0.0; base.len()];
    let mut distinct: Vec<f64> = cells.iter().map(|c| c.0).collect();
    distinct.dedup();
    if distinct.len() <= MAX_LEVELS {
        for &(g, q) in &cells {
            ghat[q] = g;
        }
        return (ghat, distinct);
    }
    let total: f64 = cells.iter().map(|&(_, q)| base[q]).sum();
    let mut levels = vec![];
    let mut start = 0;
    let mut acc = 0.0;
    for bin in 1..=MAX_LEVELS {
        let goal = total * bin as f64 / MAX_LEVELS as f64;
        let mut end = start;
        while end < cells.len() && (acc + base[cells[end].1] <= goal || bin == MAX_LEVELS) {
            acc += base[cells[end].1];
            end += 1;
        }
        // ties in g stay in one bin
        while end < cells.len() && end > start && cells[end].0 == cells[end - 1].0 {
            acc += base[cells[end].1];
            end += 1;
        }
        if end == start {
            continue;
        }
        let (t, d) = cells[start..end].iter().fold((0.0, 0.0), |(t, d), &(_, q)| (t + target[q], d + base[q]));
        let level = t / d;
        for &(_, q) in &cells[start..end] {
            ghat[q] = level;
        }
        levels.push(level);
        start = end;
    }
    levels.dedup();
    (ghat, levels)
}

pub fn layer_cake_refine(target: &ScalarGridMeasure, fam: &FragmentFamily) -> Result<LayerCake> {
    let grid = target.grid().clone();
    let base = disintegrate_scalar(fam, &grid)?;
    let (t, d) = (target.mass(), base.mass());
    if let Some(q) = (0..t.len()).find(|&q| d[q] == 0.0 && t[q] > 0.0) {
        return Err(AlbertiError::AbsoluteContinuity { cell: q, center: grid.cell_center(q)[..grid.dim()].to_vec(), mass: t[q] });
    }
    let (ghat, levels) = quantize(t, d);
    let quantization_error = (0..t.len()).map(|q| (ghat[q] * d[q] - t[q]).abs()).sum();
    let tolerance = target.total() / MAX_LEVELS as f64;

    // parameter intervals of every entry with their quantized ratio
    let mut spans: Vec<Vec<(f64, f64, f64)>> = vec![vec![]; fam.len()];
    for_each_portion(fam, &grid, |j, p, _, _| spans[j].push((p.lo, p.hi, ghat[p.cell])))?;
    let mut entries = vec![];
    let mut below = 0.0;
    for &level in &levels {
        let step = level - below;
        below = level;
        for (j, e) in fam.entries.iter().enumerate() {
            let keep: Vec<(f64, f64)> = spans[j].iter().filter(|s| s.2 >= level).map(|s| (s.0, s.1)).collect();
            if keep.is_empty() {
                continue;
            }
            let g = e.fragment.restrict(&IntervalUnion::new(keep)?);
            if !g.is_empty() {
                entries.push(FamilyEntry::new(e.weight * step, g, e.profile.clone())?);
            }
        }
    }
    let family = FragmentFamily::new(fam.phi.clone(), entries)?;
    Ok(LayerCake { family, report: LayerReport { levels, quantization_error, tolerance } })
}
