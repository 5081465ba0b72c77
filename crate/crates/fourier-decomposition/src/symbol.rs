//! Constant-coefficient operators `A = sum a_alpha d^alpha`, their symbols,
//! the wave-cone gap and the multiplier `m_A`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use grid_measure::{ball_mask, DerivativeMode, Grid, GridMeasure, ScalarGridMeasure, Spectral};

use crate::decompose::positivity_correction;
use crate::error::{DecompError, Result};

/// Default number of unit-sphere samples for the wave-cone gap.
pub const SPHERE_SAMPLES: usize = 4096;

/// Gaps at or below this are treated as zero.
pub const WAVE_CONE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub alpha: Vec<usize>,
    /// `m x l`, row-major.
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymbolRecord", into = "SymbolRecord")]
pub struct SymbolSpec {
    dim: usize,
    rows: usize,
    cols: usize,
    order: usize,
    bound: f64,
    coeffs: Vec<Coefficient>,
}

#[derive(Serialize, Deserialize)]
struct SymbolRecord {
    dim: usize,
    coeffs: Vec<Coefficient>,
}

impl TryFrom<SymbolRecord> for SymbolSpec {
    type Error = DecompError;
    fn try_from(r: SymbolRecord) -> Result<Self> {
        SymbolSpec::new(r.dim, r.coeffs)
    }
}

impl From<SymbolSpec> for SymbolRecord {
    fn from(s: SymbolSpec) -> Self {
        SymbolRecord { dim: s.dim, coeffs: s.coeffs }
    }
}

impl SymbolSpec {
    pub fn new(dim: usize, coeffs: Vec<Coefficient>) -> Result<Self> {
        let first = coeffs.first().ok_or_else(|| DecompError::Parameter("no coefficients".into()))?;
        let rows = first.matrix.len();
        let cols = first.matrix.first().map_or(0, |r| r.len());
        if rows == 0 || cols == 0 {
            return Err(DecompError::Parameter("empty coefficient matrix".into()));
        }
        for c in &coeffs {
            if c.alpha.len() != dim {
                return Err(DecompError::Parameter(format!("multi-index {:?} has wrong length", c.alpha)));
            }
            if c.matrix.len() != rows || c.matrix.iter().any(|r| r.len() != cols) {
                return Err(DecompError::Parameter("coefficient shapes differ".into()));
            }
        }
        let order = coeffs.iter().map(|c| c.alpha.iter().sum::<usize>()).max().unwrap_or(0);
        if order == 0 {
            return Err(DecompError::Parameter("operator order must be at least 1".into()));
        }
        let top_nonzero = coeffs
            .iter()
            .filter(|c| c.alpha.iter().sum::<usize>() == order)
            .any(|c| c.matrix.iter().flatten().any(|x| *x != 0.0));
        if !top_nonzero {
            return Err(DecompError::Parameter("all top-order coefficients vanish".into()));
        }
        let bound = coeffs
            .iter()
            .map(|c| c.matrix.iter().flatten().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        Ok(Self { dim, rows, cols, order, bound, coeffs })
    }

    /// `(Div T)_i = sum_j d_j T_ij`, acting on `T` flattened row-major.
    pub fn divergence(n: usize) -> Self {
        let coeffs = (0..n)
            .map(|j| {
                let mut alpha = vec![0; n];
                alpha[j] = 1;
                let mut matrix = vec![vec![0.0; n * n]; n];
                for (i, row) in matrix.iter_mut().enumerate() {
                    row[i * n + j] = 1.0;
                }
                Coefficient { alpha, matrix }
            })
            .collect();
        Self::new(n, coeffs).expect("divergence symbol is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    fn eval_filtered(&self, xi: &[f64], principal: bool) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows * self.cols];
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        for c in &self.coeffs {
            let deg: usize = c.alpha.iter().sum();
            if principal && deg != self.order {
                continue;
            }
            let mono: f64 = c.alpha.iter().zip(xi).map(|(a, x)| x.powi(*a as i32)).product();
            let factor = two_pi_i.powu(deg as u32) * mono;
            for (i, row) in c.matrix.iter().enumerate() {
                for (j, a) in row.iter().enumerate() {
                    out[i * self.cols + j] += factor * *a;
                }
            }
        }
        out
    }

    /// `A(xi)`, `m x l` row-major.
    pub fn eval(&self, xi: &[f64]) -> Vec<Complex64> {
        self.eval_filtered(xi, false)
    }

    /// Top-order part `A^k(xi)`.
    pub fn principal(&self, xi: &[f64]) -> Vec<Complex64> {
        self.eval_filtered(xi, true)
    }

    fn apply(&self, a: &[Complex64], v: &[f64]) -> Vec<Complex64> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| a[i * self.cols + j] * v[j]).sum()).collect()
    }
}

/// Deterministic unit-sphere sample: `{+1, -1}`, a uniform circle, or a
/// Fibonacci lattice.
pub fn sphere_samples(n: usize, count: usize) -> Vec<[f64; 3]> {
    match n {
        1 => vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
        2 => (0..count)
            .map(|k| {
                let th = std::f64::consts::TAU * k as f64 / count as f64;
                [th.cos(), th.sin(), 0.0]
            })
            .collect(),
        _ => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let th = golden * k as f64;
                    [rho * th.cos(), rho * th.sin(), z]
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WaveConeGap {
    pub gap: f64,
    pub argmin: Vec<f64>,
}

pub fn wave_cone_gap(sym: &SymbolSpec, frame: &[f64]) -> Result<WaveConeGap> {
    wave_cone_gap_with(sym, frame, SPHERE_SAMPLES)
}

/// `min |A^k(xi) I|` over the sphere sample.
pub fn wave_cone_gap_with(sym: &SymbolSpec, frame: &[f64], samples: usize) -> Result<WaveConeGap> {
    if frame.len() != sym.cols {
        return Err(DecompError::Parameter(format!("frame has {} entries, operator acts on {}", frame.len(), sym.cols)));
    }
    let n = sym.dim;
    let mut best = WaveConeGap { gap: f64::INFINITY, argmin: vec![] };
    for xi in sphere_samples(n, samples) {
        let v = sym.apply(&sym.principal(&xi[..n]), frame);
        let size = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if size < best.gap {
            best = WaveConeGap { gap: size, argmin: xi[..n].to_vec() };
        }
    }
    Ok(best)
}

/// Frequency used in the symbol: the Nyquist plane is dropped in spectral mode,
/// and centred differences replace `xi` by `sin(2 pi xi h) / (2 pi h)`.
fn effective_frequency(sp: &Spectral, idx: usize, mode: DerivativeMode) -> [f64; 3] {
    let n = sp.grid().dim();
    let mut xi = [0.0; 3];
    for (j, v) in xi.iter_mut().enumerate().take(n) {
        *v = sp.derivative_symbol(idx, j, mode).im / (2.0 * std::f64::consts::PI);
    }
    xi
}

fn field_components<M: GridMeasure + ?Sized>(field: &M) -> Vec<Vec<f64>> {
    let l = field.components();
    (0..l).map(|c| field.raw().iter().skip(c).step_by(l).copied().collect()).collect()
}

struct Multiplied {
    /// `mu^ / (1 + |A I|^2)` and `(A I)* A T^ / (1 + |A I|^2)` in real space.
    smooth: Vec<f64>,
    m_a: Vec<f64>,
    b0: Vec<f64>,
}

fn multiply<M: GridMeasure + ?Sized>(
    sym: &SymbolSpec,
    frame: &[f64],
    mu: Option<&ScalarGridMeasure>,
    field: &M,
    mode: DerivativeMode,
) -> Result<Multiplied> {
    let grid = field.grid().clone();
    if grid.dim() != sym.dim || field.components() != sym.cols {
        return Err(DecompError::Parameter(format!(
            "operator acts on R^{} fields in dimension {}, got {} components in dimension {}",
            sym.cols,
            sym.dim,
            field.components(),
            grid.dim()
        )));
    }
    let gap = wave_cone_gap(sym, frame)?;
    if gap.gap <= WAVE_CONE_TOL {
        return Err(DecompError::WaveCone { gap: gap.gap, xi: gap.argmin });
    }
    let sp = Spectral::new(&grid);
    let t_hat: Vec<Vec<Complex64>> = field_components(field).iter().map(|c| sp.forward(c)).collect();
    let mu_hat = mu.map(|m| sp.forward(m.mass()));
    let zero = Complex64::new(0.0, 0.0);
    let len = grid.len();
    let (mut s_spec, mut m_spec, mut b_spec) = (vec![zero; len], vec![zero; len], vec![zero; len]);
    for idx in 0..len {
        let xi = effective_frequency(&sp, idx, mode);
        let a = sym.eval(&xi[..sym.dim]);
        let ai = sym.apply(&a, frame);
        let denom = 1.0 + ai.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let at: Vec<Complex64> =
            (0..sym.rows).map(|i| (0..sym.cols).map(|j| a[i * sym.cols + j] * t_hat[j][idx]).sum()).collect();
        let proj_t: Complex64 = ai.iter().zip(&at).map(|(u, v)| u.conj() * v).sum();
        m_spec[idx] = proj_t / denom;
        if let Some(mh) = &mu_hat {
            s_spec[idx] = mh[idx] / denom;
            // (A I)* A (I mu - T)^ = |A I|^2 mu^ - (A I)* A T^
            b_spec[idx] = ((denom - 1.0) * mh[idx] - proj_t) / denom;
        }
    }
    Ok(Multiplied { smooth: sp.inverse_real(s_spec), m_a: sp.inverse_real(m_spec), b0: sp.inverse_real(b_spec) })
}

/// `m_A(T)` as cell masses.
pub fn apply_general_multiplier<M: GridMeasure + ?Sized>(
    sym: &SymbolSpec,
    frame: &[f64],
    field: &M,
    mode: DerivativeMode,
) -> Result<Vec<f64>> {
    Ok(multiply(sym, frame, None, field, mode)?.m_a)
}

/// The general-operator splitting `mu = g + 1_B m_A(T) + b` together with the
/// merged two-part form obtained by applying the positivity correction to
/// `(g0 + m_A(T), b0)`.
#[derive(Debug, Clone)]
pub struct GeneralDecomposition {
    pub g0: Vec<f64>,
    pub m_a: Vec<f64>,
    pub b0: Vec<f64>,
    /// `1_B (g0 + m_A(T))`.
    pub merged_good_raw: Vec<f64>,
    pub good: Vec<f64>,
    pub bad: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn general_decomposition<M: GridMeasure + ?Sized>(
    sym: &SymbolSpec,
    frame: &[f64],
    mu: &ScalarGridMeasure,
    field: &M,
    center: &[f64],
    ball_radius: f64,
    mode: DerivativeMode,
) -> Result<GeneralDecomposition> {
    if mu.grid() != field.grid() {
        return Err(DecompError::Input("mu and T live on different grids".into()));
    }
    let parts = multiply(sym, frame, Some(mu), field, mode)?;
    let grid: &Grid = mu.grid();
    let mask = ball_mask(grid, center, ball_radius);
    let merged: Vec<f64> = parts.smooth.iter().zip(&parts.m_a).map(|(a, b)| a + b).collect();
    let merged_good_raw = merged.iter().zip(&mask).map(|(v, k)| if *k { *v } else { 0.0 }).collect();
    let (good, bad) = positivity_correction(mu.mass(), &merged, &parts.b0, &mask);
    Ok(GeneralDecomposition { g0: parts.smooth, m_a: parts.m_a, b0: parts.b0, merged_good_raw, good, bad })
}
