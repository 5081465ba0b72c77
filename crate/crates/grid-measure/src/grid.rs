//! Periodic Euclidean grids.

use serde::{Deserialize, Serialize};

use crate::error::{GridError, Result};

/// Cubic periodic grid of `N^n` cells covering `[origin, origin + L]^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    #[serde(rename = "N")]
    cells: usize,
    #[serde(rename = "L")]
    side: f64,
    origin: Vec<f64>,
}

impl Grid {
    pub fn new(n: usize, cells: usize, side: f64, origin: Vec<f64>) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(GridError::Parameter(format!("dimension {n} not in 1..=3")));
        }
        if cells < 8 || !cells.is_power_of_two() {
            return Err(GridError::Parameter(format!(
                "cells per side {cells} must be a power of two and at least 8"
            )));
        }
        if !(side > 0.0 && side.is_finite()) {
            return Err(GridError::Parameter(format!("side length {side} must be positive")));
        }
        if origin.len() != n || origin.iter().any(|o| !o.is_finite()) {
            return Err(GridError::Parameter("origin must have n finite entries".into()));
        }
        Ok(Self { n, cells, side, origin })
    }

    /// Grid whose box is centred on `center`.
    pub fn centered(n: usize, cells: usize, side: f64, center: &[f64]) -> Result<Self> {
        if center.len() != n {
            return Err(GridError::Parameter("center must have n entries".into()));
        }
        let origin = center.iter().map(|c| c - side / 2.0).collect();
        Self::new(n, cells, side, origin)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cells_per_side(&self) -> usize {
        self.cells
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.side / self.cells as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.n as i32)
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.n as i32)
    }

    /// Total number of cells.
    pub fn len(&self) -> usize {
        self.cells.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn center(&self) -> Vec<f64> {
        self.origin.iter().map(|o| o + self.side / 2.0).collect()
    }

    /// Row-major multi-index of a flat cell index; unused axes are zero.
    pub fn multi_index(&self, mut idx: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        for axis in (0..self.n).rev() {
            out[axis] = idx % self.cells;
            idx /= self.cells;
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi[..self.n].iter().fold(0, |acc, &i| acc * self.cells + i)
    }

    pub fn cell_center(&self, idx: usize) -> [f64; 3] {
        let h = self.spacing();
        let m = self.multi_index(idx);
        let mut c = [0.0; 3];
        for axis in 0..self.n {
            c[axis] = self.origin[axis] + (m[axis] as f64 + 0.5) * h;
        }
        c
    }

    /// Cell containing `x`; the upper faces of the box belong to the last cell.
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        if x.len() < self.n {
            return None;
        }
        let h = self.spacing();
        let mut multi = [0usize; 3];
        for axis in 0..self.n {
            let rel = x[axis] - self.origin[axis];
            if !(rel >= 0.0 && rel <= self.side) {
                return None;
            }
            multi[axis] = ((rel / h).floor() as usize).min(self.cells - 1);
        }
        Some(self.flat_index(&multi))
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.locate(x).is_some()
    }

    /// Whether `x` lies in the central box of side `L/2`.
    pub fn in_central_box(&self, x: &[f64]) -> bool {
        (0..self.n).all(|a| {
            let rel = x[a] - self.origin[a];
            rel >= self.side / 4.0 && rel <= 0.75 * self.side
        })
    }

    /// Distance from `x` to the boundary of the grid box.
    pub fn distance_to_boundary(&self, x: &[f64]) -> f64 {
        (0..self.n)
            .map(|a| {
                let rel = x[a] - self.origin[a];
                rel.min(self.side - rel)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn same_shape(&self, other: &Grid) -> bool {
        self == other
    }
}

/// Squared Euclidean distance over the first `n` coordinates.
pub fn dist2(a: &[f64], b: &[f64], n: usize) -> f64 {
    (0..n).map(|k| (a[k] - b[k]) * (a[k] - b[k])).sum()
}
