//! Divergence of `F(f Dgamma, gamma, P)` against the budget `‖F(|f'|, gamma, P)‖`.

use grid_measure::{deposit_smooth, vector_divergence, DerivativeMode, Grid, PointMass, VectorGridMeasure};
use serde::Serialize;

use crate::disintegrate::{disintegrate_vector, for_each_portion};
use crate::error::{AlbertiError, Result};
use crate::family::FragmentFamily;

/// Relative allowance for grid effects in the comparison.
pub const GRID_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceReport {
    #[serde(skip)]
    pub field: VectorGridMeasure,
    /// Total variation of the spectral divergence of the smoothed field.
    pub div_tv: f64,
    /// `Σ w_j ∫ |f_j'|`.
    pub budget: f64,
    pub smoothing_scale: f64,
    pub holds: bool,
}

/// The field is deposited through a bump of `scale` (default four cells) before
/// the spectral divergence; smoothing cannot increase the total variation.
pub fn divergence_of_disintegration(fam: &FragmentFamily, grid: &Grid, scale: Option<f64>) -> Result<DivergenceReport> {
    let mut budget = 0.0;
    for (j, e) in fam.entries.iter().enumerate() {
        let supp = e.profile.support().ok_or_else(|| {
            AlbertiError::Parameter(format!("entry {j}: profile has no derivative budget"))
        })?;
        if let Some((lo, hi)) = supp {
            if lo <= 0.0 || hi >= 1.0 {
                return Err(AlbertiError::Precondition {
                    name: "compact-support".into(),
                    detail: format!("entry {j}: profile support [{lo}, {hi}] touches the ends of [0, 1]"),
                });
            }
        }
        if let Some((lo, hi)) = supp {
            // a gap inside the support would hide jumps from the budget
            let dom = e.fragment.domain();
            let inside = dom.find(lo).is_some_and(|i| dom.intervals()[i].1 >= hi);
            if !inside {
                return Err(AlbertiError::Precondition {
                    name: "compact-support".into(),
                    detail: format!("entry {j}: profile support [{lo}, {hi}] is not inside one domain interval"),
                });
            }
        }
        let slope: f64 = e.fragment.segments().iter().map(|s| e.profile.slope_integral(s.t0, s.t1).unwrap_or(0.0)).sum();
        budget += e.weight * slope;
    }
    let field = disintegrate_vector(fam, grid)?;
    let scale = scale.unwrap_or(4.0 * grid.spacing());
    let n = grid.dim();
    let mut points = vec![];
    for_each_portion(fam, grid, |_, p, m, v| {
        if m != 0.0 {
            points.push(PointMass::with_payload(p.mid.clone(), v.iter().map(|x| m * x).collect()));
        }
    })?;
    let smooth = VectorGridMeasure::new(grid.clone(), deposit_smooth(&points, grid, scale, true)?)?;
    debug_assert_eq!(smooth.values().len(), grid.len() * n);
    let div = vector_divergence(&smooth, DerivativeMode::Spectral);
    let div_tv: f64 = div.mass().iter().map(|x| x.abs()).sum();
    let holds = div_tv <= budget * (1.0 + GRID_TOLERANCE) + 1e-12;
    Ok(DivergenceReport { field, div_tv, budget, smoothing_scale: scale, holds })
}
