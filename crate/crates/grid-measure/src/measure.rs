//! Scalar, signed, vector and matrix valued measures stored as cell masses.

use serde::{Deserialize, Serialize};

use crate::error::{GridError, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Scalar,
    Vector,
    Matrix,
}

impl Kind {
    pub fn components(self, n: usize) -> usize {
        match self {
            Kind::Scalar => 1,
            Kind::Vector => n,
            Kind::Matrix => n * n,
        }
    }
}

/// Common view of every grid measure: `components()` reals per cell, cell-major.
pub trait GridMeasure {
    fn grid(&self) -> &Grid;
    fn kind(&self) -> Kind;
    fn raw(&self) -> &[f64];

    fn components(&self) -> usize {
        self.kind().components(self.grid().dim())
    }

    /// Variation mass of each cell: absolute value, Euclidean or Frobenius norm.
    fn cell_magnitudes(&self) -> Vec<f64> {
        let c = self.components();
        self.raw()
            .chunks_exact(c)
            .map(|v| if c == 1 { v[0].abs() } else { v.iter().map(|x| x * x).sum::<f64>().sqrt() })
            .collect()
    }

    fn total_variation(&self) -> f64 {
        self.cell_magnitudes().iter().sum()
    }
}

fn check_len(grid: &Grid, kind: Kind, len: usize) -> Result<()> {
    let want = grid.len() * kind.components(grid.dim());
    if len != want {
        return Err(GridError::Input(format!("expected {want} values, got {len}")));
    }
    Ok(())
}

/// Nonnegative scalar measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGridMeasure {
    grid: Grid,
    mass: Vec<f64>,
}

impl ScalarGridMeasure {
    pub fn new(grid: Grid, mass: Vec<f64>) -> Result<Self> {
        check_len(&grid, Kind::Scalar, mass.len())?;
        if let Some(i) = mass.iter().position(|m| !(*m >= 0.0) || !m.is_finite()) {
            return Err(GridError::Input(format!("cell {i} has mass {}", mass[i])));
        }
        Ok(Self { grid, mass })
    }

    pub fn zeros(grid: Grid) -> Self {
        let mass = vec![0.0; grid.len()];
        Self { grid, mass }
    }

    /// Lebesgue measure with the given density on cells whose centre satisfies `inside`.
    pub fn from_indicator(grid: Grid, density: f64, inside: impl Fn(&[f64]) -> bool) -> Result<Self> {
        let vol = grid.cell_volume();
        let mass = (0..grid.len())
            .map(|i| if inside(&grid.cell_center(i)[..grid.dim()]) { density * vol } else { 0.0 })
            .collect();
        Self::new(grid, mass)
    }

    /// Cell masses from a density evaluated at cell centres.
    pub fn from_density(grid: Grid, density: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let vol = grid.cell_volume();
        let mass = (0..grid.len()).map(|i| density(&grid.cell_center(i)[..grid.dim()]) * vol).collect();
        Self::new(grid, mass)
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn into_mass(self) -> Vec<f64> {
        self.mass
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn density(&self) -> Vec<f64> {
        let vol = self.grid.cell_volume();
        self.mass.iter().map(|m| m / vol).collect()
    }

    /// Cell-wise product with a function of position.
    pub fn weighted(&self, w: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let n = self.grid.dim();
        let mass = self
            .mass
            .iter()
            .enumerate()
            .map(|(i, m)| m * w(&self.grid.cell_center(i)[..n]))
            .collect();
        Self::new(self.grid.clone(), mass)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.grid.same_shape(&other.grid) {
            return Err(GridError::Input("grids differ".into()));
        }
        let mass = self.mass.iter().zip(&other.mass).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid.clone(), mass })
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.grid.clone(), self.mass.iter().map(|m| m * factor).collect())
    }

    pub fn to_signed(&self) -> SignedGridMeasure {
        SignedGridMeasure { grid: self.grid.clone(), mass: self.mass.clone() }
    }

    /// Number of cells with nonzero mass times the cell volume.
    pub fn support_volume(&self) -> f64 {
        self.mass.iter().filter(|m| **m > 0.0).count() as f64 * self.grid.cell_volume()
    }
}

impl GridMeasure for ScalarGridMeasure {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn kind(&self) -> Kind {
        Kind::Scalar
    }
    fn raw(&self) -> &[f64] {
        &self.mass
    }
}

/// Real scalar measure of either sign.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedGridMeasure {
    grid: Grid,
    mass: Vec<f64>,
}

impl SignedGridMeasure {
    pub fn new(grid: Grid, mass: Vec<f64>) -> Result<Self> {
        check_len(&grid, Kind::Scalar, mass.len())?;
        if mass.iter().any(|m| !m.is_finite()) {
            return Err(GridError::Input("non-finite cell mass".into()));
        }
        Ok(Self { grid, mass })
    }

    pub fn zeros(grid: Grid) -> Self {
        let mass = vec![0.0; grid.len()];
        Self { grid, mass }
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn into_mass(self) -> Vec<f64> {
        self.mass
    }

    pub fn sum(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn positive_part(&self) -> ScalarGridMeasure {
        ScalarGridMeasure { grid: self.grid.clone(), mass: self.mass.iter().map(|m| m.max(0.0)).collect() }
    }

    pub fn negative_part(&self) -> ScalarGridMeasure {
        ScalarGridMeasure { grid: self.grid.clone(), mass: self.mass.iter().map(|m| (-m).max(0.0)).collect() }
    }
}

impl GridMeasure for SignedGridMeasure {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn kind(&self) -> Kind {
        Kind::Scalar
    }
    fn raw(&self) -> &[f64] {
        &self.mass
    }
}

/// `R^n` valued measure, components stored contiguously per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorGridMeasure {
    grid: Grid,
    values: Vec<f64>,
}

impl VectorGridMeasure {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        check_len(&grid, Kind::Vector, values.len())?;
        if values.iter().any(|m| !m.is_finite()) {
            return Err(GridError::Input("non-finite cell value".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        let values = vec![0.0; grid.len() * grid.dim()];
        Self { grid, values }
    }

    /// Scalar measure times a constant direction.
    pub fn from_scalar(mu: &ScalarGridMeasure, direction: &[f64]) -> Self {
        let n = mu.grid.dim();
        let mut values = Vec::with_capacity(mu.mass.len() * n);
        for m in &mu.mass {
            values.extend(direction[..n].iter().map(|d| d * m));
        }
        Self { grid: mu.grid.clone(), values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn component(&self, k: usize) -> Vec<f64> {
        let n = self.grid.dim();
        self.values.iter().skip(k).step_by(n).copied().collect()
    }

    pub fn from_components(grid: Grid, comps: &[Vec<f64>]) -> Result<Self> {
        let n = grid.dim();
        if comps.len() != n {
            return Err(GridError::Input("need n components".into()));
        }
        let mut values = vec![0.0; grid.len() * n];
        for (k, c) in comps.iter().enumerate() {
            if c.len() != grid.len() {
                return Err(GridError::Input("component length mismatch".into()));
            }
            for (i, v) in c.iter().enumerate() {
                values[i * n + k] = *v;
            }
        }
        Self::new(grid, values)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if !self.grid.same_shape(&other.grid) {
            return Err(GridError::Input("grids differ".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }
}

impl GridMeasure for VectorGridMeasure {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn kind(&self) -> Kind {
        Kind::Vector
    }
    fn raw(&self) -> &[f64] {
        &self.values
    }
}

/// `R^{n x n}` valued measure; row `i` of each cell matrix is the vector measure `T_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGridMeasure {
    grid: Grid,
    values: Vec<f64>,
}

impl MatrixGridMeasure {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        check_len(&grid, Kind::Matrix, values.len())?;
        if values.iter().any(|m| !m.is_finite()) {
            return Err(GridError::Input("non-finite cell value".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        let values = vec![0.0; grid.len() * grid.dim() * grid.dim()];
        Self { grid, values }
    }

    /// `A mu` for a constant matrix `A` given row-major.
    pub fn from_scalar(mu: &ScalarGridMeasure, a: &[f64]) -> Self {
        let nn = mu.grid.dim() * mu.grid.dim();
        let mut values = Vec::with_capacity(mu.mass.len() * nn);
        for m in &mu.mass {
            values.extend(a[..nn].iter().map(|x| x * m));
        }
        Self { grid: mu.grid.clone(), values }
    }

    /// Stack `n` vector measures as the rows of a matrix measure.
    pub fn from_rows(rows: &[VectorGridMeasure]) -> Result<Self> {
        let grid = rows.first().ok_or_else(|| GridError::Input("no rows".into()))?.grid.clone();
        let n = grid.dim();
        if rows.len() != n || rows.iter().any(|r| !r.grid.same_shape(&grid)) {
            return Err(GridError::Input("need n rows on one grid".into()));
        }
        let mut values = vec![0.0; grid.len() * n * n];
        for (i, row) in rows.iter().enumerate() {
            for cell in 0..grid.len() {
                for j in 0..n {
                    values[cell * n * n + i * n + j] = row.values[cell * n + j];
                }
            }
        }
        Self::new(grid, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Entry `(i, j)` of every cell.
    pub fn entry(&self, i: usize, j: usize) -> Vec<f64> {
        let n = self.grid.dim();
        self.values.iter().skip(i * n + j).step_by(n * n).copied().collect()
    }

    pub fn row(&self, i: usize) -> VectorGridMeasure {
        let n = self.grid.dim();
        let mut values = Vec::with_capacity(self.grid.len() * n);
        for cell in self.values.chunks_exact(n * n) {
            values.extend_from_slice(&cell[i * n..(i + 1) * n]);
        }
        VectorGridMeasure { grid: self.grid.clone(), values }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.grid.same_shape(&other.grid) {
            return Err(GridError::Input("grids differ".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    /// Cell-wise `A mu - T` for a constant matrix `A`.
    pub fn defect(&self, mu: &ScalarGridMeasure, a: &[f64]) -> Result<Self> {
        if !self.grid.same_shape(&mu.grid) {
            return Err(GridError::Input("grids differ".into()));
        }
        let nn = self.grid.dim() * self.grid.dim();
        let values = self
            .values
            .chunks_exact(nn)
            .zip(&mu.mass)
            .flat_map(|(t, m)| (0..nn).map(move |k| a[k] * m - t[k]))
            .collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    /// Cell-wise `A T` for a constant matrix `A`.
    pub fn left_multiply(&self, a: &[f64]) -> Self {
        let n = self.grid.dim();
        let mut values = vec![0.0; self.values.len()];
        for (dst, src) in values.chunks_exact_mut(n * n).zip(self.values.chunks_exact(n * n)) {
            for i in 0..n {
                for j in 0..n {
                    dst[i * n + j] = (0..n).map(|k| a[i * n + k] * src[k * n + j]).sum();
                }
            }
        }
        Self { grid: self.grid.clone(), values }
    }
}

impl GridMeasure for MatrixGridMeasure {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn kind(&self) -> Kind {
        Kind::Matrix
    }
    fn raw(&self) -> &[f64] {
        &self.values
    }
}
