//! Discrete Fourier transforms on the periodic grid.
//!
//! The forward kernel is `exp(-2 pi i <x, xi>)` with physical frequencies
//! `xi = k / L`, so a derivative `d_j` acts as multiplication by `2 pi i xi_j`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::Grid;
use crate::measure::{MatrixGridMeasure, SignedGridMeasure, VectorGridMeasure};

pub struct Spectral {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Spectral {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.cells_per_side();
        Self { grid: grid.clone(), forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.grid.dim();
        let len = self.grid.cells_per_side();
        let total = data.len();
        let mut line = vec![Complex64::new(0.0, 0.0); len];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for axis in 0..n {
            let stride = len.pow((n - 1 - axis) as u32);
            if stride == 1 {
                for row in data.chunks_exact_mut(len) {
                    fft.process_with_scratch(row, &mut scratch);
                }
                continue;
            }
            let block = stride * len;
            for base in (0..total).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for (k, v) in line.iter_mut().enumerate() {
                        *v = data[start + k * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (k, v) in line.iter().enumerate() {
                        data[start + k * stride] = *v;
                    }
                }
            }
        }
    }

    pub fn forward(&self, real: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = real.iter().map(|x| Complex64::new(*x, 0.0)).collect();
        self.transform(&mut data, &self.forward);
        data
    }

    /// Inverse transform, normalized, returning the real part.
    pub fn inverse_real(&self, mut data: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut data, &self.inverse);
        let scale = 1.0 / data.len() as f64;
        data.iter().map(|c| c.re * scale).collect()
    }

    /// Signed integer wavenumber on one axis.
    pub fn wavenumber(&self, k: usize) -> i64 {
        let n = self.grid.cells_per_side();
        if k < n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    /// Physical frequency vector of a flat spectral index.
    pub fn frequency(&self, idx: usize) -> [f64; 3] {
        let m = self.grid.multi_index(idx);
        let mut xi = [0.0; 3];
        for axis in 0..self.grid.dim() {
            xi[axis] = self.wavenumber(m[axis]) as f64 / self.grid.side();
        }
        xi
    }

    /// Whether the index sits on the Nyquist plane of the given axis.
    pub fn is_nyquist(&self, idx: usize, axis: usize) -> bool {
        self.grid.multi_index(idx)[axis] == self.grid.cells_per_side() / 2
    }

    /// Symbol of the first derivative along `axis`: spectral `2 pi i xi` with the
    /// Nyquist mode removed, or the centred difference `i sin(2 pi xi h) / h`.
    pub fn derivative_symbol(&self, idx: usize, axis: usize, mode: DerivativeMode) -> Complex64 {
        let xi = self.frequency(idx)[axis];
        match mode {
            DerivativeMode::Spectral => {
                if self.is_nyquist(idx, axis) {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, 2.0 * std::f64::consts::PI * xi)
                }
            }
            DerivativeMode::CenteredDifference => {
                let h = self.grid.spacing();
                Complex64::new(0.0, (2.0 * std::f64::consts::PI * xi * h).sin() / h)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    #[default]
    Spectral,
    CenteredDifference,
}

/// Row-wise divergence `(Div T)_i = sum_j d_j T_ij`, as cell masses.
pub fn matrix_divergence(t: &MatrixGridMeasure, mode: DerivativeMode) -> VectorGridMeasure {
    let grid = crate::measure::GridMeasure::grid(t).clone();
    let n = grid.dim();
    let sp = Spectral::new(&grid);
    let entries: Vec<Vec<Complex64>> =
        (0..n * n).map(|k| sp.forward(&t.entry(k / n, k % n))).collect();
    let comps: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let spec: Vec<Complex64> = (0..grid.len())
                .map(|idx| (0..n).map(|j| sp.derivative_symbol(idx, j, mode) * entries[i * n + j][idx]).sum())
                .collect();
            sp.inverse_real(spec)
        })
        .collect();
    VectorGridMeasure::from_components(grid, &comps).expect("finite divergence")
}

/// Divergence of a vector measure, as signed cell masses.
pub fn vector_divergence(v: &VectorGridMeasure, mode: DerivativeMode) -> SignedGridMeasure {
    let grid = crate::measure::GridMeasure::grid(v).clone();
    let n = grid.dim();
    let sp = Spectral::new(&grid);
    let comps: Vec<Vec<Complex64>> = (0..n).map(|j| sp.forward(&v.component(j))).collect();
    let spec: Vec<Complex64> = (0..grid.len())
        .map(|idx| (0..n).map(|j| sp.derivative_symbol(idx, j, mode) * comps[j][idx]).sum())
        .collect();
    SignedGridMeasure::new(grid, sp.inverse_real(spec)).expect("finite divergence")
}
