//! Families paired with their frame directions, and the measure they share.

use alberti::{family_ball_mass, FragmentFamily};
use fourier_decomposition::FrameMatrix;
use fragments::segment_ball_times;

use crate::error::{AnalyzerError, Result};

#[derive(Debug, Clone)]
pub struct DirectedFamily {
    pub family: FragmentFamily,
    pub direction: Vec<f64>,
}

impl DirectedFamily {
    pub fn new(family: FragmentFamily, direction: Vec<f64>) -> Self {
        Self { family, direction }
    }
}

/// The frame `I` with rows `e_1, ..., e_n`, checked against `|I^-1| <= tau`.
pub fn frame_of(fams: &[DirectedFamily], dim: usize, tau: f64) -> Result<FrameMatrix> {
    if fams.len() != dim {
        return Err(AnalyzerError::Frame(format!("{} families for dimension {dim}", fams.len())));
    }
    if let Some(f) = fams.iter().find(|f| f.direction.len() != dim || f.family.phi.target_dim() != dim) {
        return Err(AnalyzerError::Frame(format!("direction {:?} does not match dimension {dim}", f.direction)));
    }
    let frame = FrameMatrix::new(fams.iter().map(|f| f.direction.clone()).collect())
        .map_err(|e| AnalyzerError::Frame(e.to_string()))?;
    if frame.inv_norm() > tau * (1.0 + 1e-9) {
        return Err(AnalyzerError::Frame(format!("|I^-1| = {} exceeds tau = {tau}", frame.inv_norm())));
    }
    Ok(frame)
}

/// `mu(B(x, rho))` for the measure every family is meant to represent, taken as
/// the mean of the families' exact ball masses.
pub fn reference_ball_mass(fams: &[DirectedFamily], x: &[f64], rho: f64) -> f64 {
    fams.iter().map(|f| family_ball_mass(&f.family, x, rho)).sum::<f64>() / fams.len().max(1) as f64
}

/// The entries whose image comes within `rho` of `x`.
pub fn localize(fam: &FragmentFamily, x: &[f64], rho: f64) -> FragmentFamily {
    let entries = fam
        .entries
        .iter()
        .filter(|e| {
            e.fragment.segments().iter().any(|s| {
                let a = fam.phi.apply(&s.p0);
                let b = fam.phi.apply(&s.p1);
                let image = fragments::Segment { t0: s.t0, t1: s.t1, p0: a, p1: b };
                segment_ball_times(&image, x, rho).is_some()
            })
        })
        .cloned()
        .collect();
    FragmentFamily { phi: fam.phi.clone(), entries }
}
