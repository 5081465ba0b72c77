//! Singular-part ratio scan of a matrix-valued measure around a point.

use fourier_decomposition::{
    conjugate_reciprocal, decompose_divergence, default_exponent, wave_cone_gap, DecompositionRequest, FrameMatrix,
    SymbolSpec, WAVE_CONE_TOL,
};
use grid_measure::{
    ball_mask, ball_mass, matrix_divergence, DerivativeMode, Grid, GridMeasure, MatrixGridMeasure, ScalarGridMeasure,
};
use serde::{Deserialize, Serialize};

use crate::error::{AnalyzerError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub radius: f64,
    /// `|T|(B(x, r))`.
    pub mass: f64,
    /// No mass in the ball; nothing else is filled in.
    pub skipped: bool,
    /// Mass-weighted mean direction of `T` on the ball, Frobenius-normalized, row-major.
    pub polar: Vec<f64>,
    /// `min |I xi|` over unit `xi`; zero puts the polar in the wave cone.
    pub wave_cone_gap: f64,
    pub invertible: bool,
    /// `‖b‖ / |T|(B(x, r))` for `phi |T_{x,r}|` with frame `I`.
    pub bad_ratio: Option<f64>,
    /// `||T| I - T|(B(x, r)) / |T|(B(x, r))`.
    pub defect_ratio: Option<f64>,
    /// `r |Div T|(B(x, r)) / |T|(B(x, r))`.
    pub div_ratio: Option<f64>,
    /// `(1 + div_ratio)^(1/p) defect_ratio^(1/p')`.
    pub bound_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioTable {
    pub point: Vec<f64>,
    pub cells: usize,
    pub p: f64,
    pub rows: Vec<ScanRow>,
}

impl RatioTable {
    pub fn bad_ratios(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.bad_ratio).collect()
    }

    pub fn div_ratios(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.div_ratio).collect()
    }
}

fn check_scales(scales: &[f64]) -> Result<()> {
    if scales.is_empty() || scales.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(AnalyzerError::Input("scales must be positive".into()));
    }
    if let Some(w) = scales.windows(2).find(|w| ((w[0] / w[1]) - 2.0).abs() > 1e-9) {
        return Err(AnalyzerError::Input(format!("scales must halve at each step: {} then {}", w[0], w[1])));
    }
    Ok(())
}

fn frob(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// `phi(y) = min(1, max(0, 2 - 2|y - x| / r))`: one on `B(x, r/2)`, zero off `B(x, r)`.
fn cutoff(y: &[f64], x: &[f64], r: f64) -> f64 {
    let d = y.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    (2.0 - 2.0 * d / r).clamp(0.0, 1.0)
}

/// The scan with centred differences, so the divergence ratio only sees the ball.
pub fn singular_ratio_scan(t: &MatrixGridMeasure, x: &[f64], scales: &[f64]) -> Result<RatioTable> {
    singular_ratio_scan_with(t, x, scales, DerivativeMode::CenteredDifference)
}

pub fn singular_ratio_scan_with(
    t: &MatrixGridMeasure,
    x: &[f64],
    scales: &[f64],
    mode: DerivativeMode,
) -> Result<RatioTable> {
    check_scales(scales)?;
    let grid = t.grid().clone();
    let n = grid.dim();
    if x.len() != n {
        return Err(AnalyzerError::Input("point and grid differ in dimension".into()));
    }
    let nn = n * n;
    let p = default_exponent(n);
    let div = matrix_divergence(t, mode);
    let sym = SymbolSpec::divergence(n);
    let values = t.values();
    let mags = t.cell_magnitudes();
    let mut rows = vec![];
    for &r in scales {
        let mask = ball_mask(&grid, x, r);
        let mass: f64 = mags.iter().zip(&mask).filter(|(_, k)| **k).map(|(m, _)| m).sum();
        let mut row = ScanRow {
            radius: r,
            mass,
            skipped: !(mass > 0.0),
            polar: vec![],
            wave_cone_gap: 0.0,
            invertible: false,
            bad_ratio: None,
            defect_ratio: None,
            div_ratio: None,
            bound_ratio: None,
        };
        if row.skipped {
            rows.push(row);
            continue;
        }
        let mut sum = vec![0.0; nn];
        for i in (0..grid.len()).filter(|&i| mask[i]) {
            for k in 0..nn {
                sum[k] += values[i * nn + k];
            }
        }
        let size = frob(&sum);
        let polar: Vec<f64> = if size > 0.0 { sum.iter().map(|a| a / size).collect() } else { sum };
        row.wave_cone_gap = wave_cone_gap(&sym, &polar)?.gap;
        let frame = (row.wave_cone_gap > WAVE_CONE_TOL)
            .then(|| FrameMatrix::new(polar.chunks(n).map(|c| c.to_vec()).collect()).ok())
            .flatten();
        row.invertible = frame.is_some();
        let defect: f64 = (0..grid.len())
            .filter(|&i| mask[i])
            .map(|i| frob(&(0..nn).map(|k| mags[i] * polar[k] - values[i * nn + k]).collect::<Vec<_>>()))
            .sum();
        let div_ratio = r * ball_mass(&div, x, r) / mass;
        let defect_ratio = defect / mass;
        row.div_ratio = Some(div_ratio);
        row.defect_ratio = Some(defect_ratio);
        row.bound_ratio = Some((1.0 + div_ratio).powf(1.0 / p) * defect_ratio.powf(conjugate_reciprocal(p)));
        row.polar = polar;
        if let Some(frame) = frame {
            row.bad_ratio = Some(blown_up_bad_part(t, &grid, x, r, frame, p, mode)? / mass);
        }
        rows.push(row);
    }
    Ok(RatioTable { point: x.to_vec(), cells: grid.cells_per_side(), p, rows })
}

/// `‖b‖` for `phi |T_{x,r}|` on the grid blown up by `1/r` about `x`.
fn blown_up_bad_part(
    t: &MatrixGridMeasure,
    grid: &Grid,
    x: &[f64],
    r: f64,
    frame: FrameMatrix,
    p: f64,
    mode: DerivativeMode,
) -> Result<f64> {
    let n = grid.dim();
    let nn = n * n;
    let origin: Vec<f64> = grid.origin().iter().zip(x).map(|(o, c)| (o - c) / r).collect();
    let blown = Grid::new(n, grid.cells_per_side(), grid.side() / r, origin)?;
    let weights: Vec<f64> = (0..grid.len()).map(|i| cutoff(&grid.cell_center(i)[..n], x, r)).collect();
    let mags = t.cell_magnitudes();
    let mu = ScalarGridMeasure::new(blown.clone(), mags.iter().zip(&weights).map(|(m, w)| m * w).collect())?;
    let vals: Vec<f64> = t.values().iter().enumerate().map(|(k, v)| v * weights[k / nn]).collect();
    let tt = MatrixGridMeasure::new(blown, vals)?;
    let req = DecompositionRequest::new(mu, tt, vec![0.0; n], 1.0)?.with_frame(frame).with_p(p).with_mode(mode);
    Ok(decompose_divergence(&req)?.report.b_norm)
}

/// Ratios below this are roundoff.
pub const RATIO_FLOOR: f64 = 1e-9;

/// Whether a ratio above the floor grows by at least `factor` at every refinement.
pub fn resolution_growth(ratios: &[f64], factor: f64) -> bool {
    ratios.len() >= 2 && ratios[0] > RATIO_FLOOR && ratios.windows(2).all(|w| w[1] >= factor * w[0])
}
