use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{DecompError, Result};

/// An invertible `n x n` frame with its inverse, an upper bound on `|I^-1|`
/// and the determinant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameRecord", into = "FrameRecord")]
pub struct FrameMatrix {
    m: DMatrix<f64>,
    inv: DMatrix<f64>,
    inv_norm: f64,
    det: f64,
}

#[derive(Serialize, Deserialize)]
struct FrameRecord {
    rows: Vec<Vec<f64>>,
    #[serde(default)]
    inv_norm: f64,
    #[serde(default)]
    det: f64,
}

impl TryFrom<FrameRecord> for FrameMatrix {
    type Error = DecompError;
    fn try_from(r: FrameRecord) -> Result<Self> {
        FrameMatrix::new(r.rows)
    }
}

impl From<FrameMatrix> for FrameRecord {
    fn from(f: FrameMatrix) -> Self {
        FrameRecord { rows: f.rows(), inv_norm: f.inv_norm, det: f.det }
    }
}

impl FrameMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if !(1..=3).contains(&n) || rows.iter().any(|r| r.len() != n) {
            return Err(DecompError::Parameter("frame must be square of size 1..=3".into()));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(DecompError::Parameter("frame entries must be finite".into()));
        }
        let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let det = m.determinant();
        let sv = m.clone().svd(false, false).singular_values;
        let smax = sv.max();
        let smin = sv.min();
        if !(smin > 1e-13 * smax) || det == 0.0 {
            return Err(DecompError::Parameter(format!("frame is singular (det {det:e})")));
        }
        let inv = m.clone().try_inverse().ok_or_else(|| DecompError::Parameter("frame is singular".into()))?;
        // relative slack keeps the recorded value above the true operator norm
        let inv_norm = (1.0 / smin) * (1.0 + 1e-12);
        Ok(Self { m, inv, inv_norm, det })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n]).expect("identity is invertible")
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        let n = d.len();
        Self::new((0..n).map(|i| (0..n).map(|j| if i == j { d[i] } else { 0.0 }).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inv
    }

    pub fn inv_norm(&self) -> f64 {
        self.inv_norm
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.m[(i, j)]).collect()).collect()
    }

    /// Row-major entries, the frame read as a vector in `R^{n^2}`.
    pub fn as_vector(&self) -> Vec<f64> {
        self.rows().into_iter().flatten().collect()
    }

    /// `s * I`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.rows().into_iter().map(|r| r.into_iter().map(|x| x * s).collect()).collect())
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.m[(i, j)] == if i == j { 1.0 } else { 0.0 }))
    }
}
