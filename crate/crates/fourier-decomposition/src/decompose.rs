//! Good/bad splitting `mu = g + b` of a nonnegative grid measure coupled to a
//! matrix measure with measured divergence.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use grid_measure::norms::lp_of_masses;
use grid_measure::{
    ball_mask, matrix_divergence, DerivativeMode, Grid, GridMeasure, MatrixGridMeasure, ScalarGridMeasure,
    SignedGridMeasure, Spectral,
};

use crate::error::{DecompError, Result};
use crate::frame::FrameMatrix;

/// `n / (n - 1/2)`.
pub fn default_exponent(n: usize) -> f64 {
    n as f64 / (n as f64 - 0.5)
}

/// Any `p` in one dimension, any finite `p` in two, `p < n/(n-1)` above.
pub fn check_exponent(n: usize, p: f64) -> Result<()> {
    let ok = p >= 1.0
        && match n {
            1 => true,
            2 => p.is_finite(),
            _ => p < n as f64 / (n as f64 - 1.0),
        };
    if ok {
        Ok(())
    } else {
        Err(DecompError::Parameter(format!("exponent {p} outside the admissible range for n = {n}")))
    }
}

/// `1 / p'`.
pub fn conjugate_reciprocal(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        1.0 - 1.0 / p
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionRequest {
    pub mu: ScalarGridMeasure,
    pub t: MatrixGridMeasure,
    pub frame: FrameMatrix,
    pub p: f64,
    pub radius: f64,
    pub center: Vec<f64>,
    pub mode: DerivativeMode,
}

impl DecompositionRequest {
    pub fn new(mu: ScalarGridMeasure, t: MatrixGridMeasure, center: Vec<f64>, radius: f64) -> Result<Self> {
        if mu.grid() != t.grid() {
            return Err(DecompError::Input("mu and T live on different grids".into()));
        }
        let n = mu.grid().dim();
        Ok(Self { frame: FrameMatrix::identity(n), p: default_exponent(n), mu, t, radius, center, mode: DerivativeMode::Spectral })
    }

    pub fn with_frame(mut self, frame: FrameMatrix) -> Self {
        self.frame = frame;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn grid(&self) -> &Grid {
        self.mu.grid()
    }

    /// Radius of the ball that carries `g`: the support radius plus one cell diagonal.
    pub fn tolerance_radius(&self) -> f64 {
        let g = self.grid();
        self.radius + (g.dim() as f64).sqrt() * g.spacing()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.grid().dim();
        check_exponent(n, self.p)?;
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(DecompError::Parameter(format!("support radius {} must be positive", self.radius)));
        }
        if self.center.len() != n || self.frame.dim() != n {
            return Err(DecompError::Parameter("centre and frame must match the grid dimension".into()));
        }
        if self.mu.grid() != self.t.grid() {
            return Err(DecompError::Input("mu and T live on different grids".into()));
        }
        let mask = ball_mask(self.grid(), &self.center, self.tolerance_radius());
        let outside: f64 = self.mu.mass().iter().zip(&mask).filter(|(_, k)| !**k).map(|(m, _)| m).sum();
        if outside > 1e-12 * self.mu.total() {
            return Err(DecompError::Input(format!(
                "mu has mass {outside:e} outside B({:?}, {})",
                self.center, self.radius
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Constructed,
    /// `p = 1`: `(g, b) = (mu, 0)`.
    TrivialExponent,
    /// Defect heavier than `mu`: `(g, b) = (0, mu)`.
    LargeDefect,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormReport {
    pub p: f64,
    pub radius: f64,
    pub center: Vec<f64>,
    pub g_norm_p: f64,
    pub b_norm: f64,
    pub mu_norm: f64,
    pub div_norm: f64,
    pub defect_norm: f64,
    pub good_rhs: f64,
    pub bad_rhs: f64,
    pub good_ratio: Option<f64>,
    pub bad_ratio: Option<f64>,
    pub branch: Branch,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionResult {
    pub grid: Grid,
    pub frame: FrameMatrix,
    pub report: NormReport,
    #[serde(skip)]
    pub g: Vec<f64>,
    #[serde(skip)]
    pub b: Vec<f64>,
    /// Before the positivity correction.
    #[serde(skip)]
    pub g0: Vec<f64>,
    #[serde(skip)]
    pub b0: Vec<f64>,
}

impl DecompositionResult {
    pub fn good(&self) -> ScalarGridMeasure {
        ScalarGridMeasure::new(self.grid.clone(), self.g.clone()).expect("g is nonnegative")
    }

    pub fn bad(&self) -> SignedGridMeasure {
        SignedGridMeasure::new(self.grid.clone(), self.b.clone()).expect("finite")
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

/// Inverse transform of `conj(F s)^T M^ s / (1 + |F s|^2)` for the symbol
/// vector `s(xi)` and the defect `M`.
fn bad_part(grid: &Grid, defect: &MatrixGridMeasure, weight: &DMatrix<f64>, symbol: impl Fn(usize) -> [Complex64; 3]) -> Vec<f64> {
    let n = grid.dim();
    let sp = Spectral::new(grid);
    let entries: Vec<Vec<Complex64>> = (0..n * n).map(|k| sp.forward(&defect.entry(k / n, k % n))).collect();
    let spec: Vec<Complex64> = (0..grid.len())
        .map(|idx| {
            let s = symbol(idx);
            let mut fs = [Complex64::new(0.0, 0.0); 3];
            let mut norm2 = 0.0;
            for i in 0..n {
                fs[i] = (0..n).map(|j| s[j] * weight[(i, j)]).sum();
                norm2 += fs[i].norm_sqr();
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let row: Complex64 = (0..n).map(|j| entries[i * n + j][idx] * s[j]).sum();
                acc += fs[i].conj() * row;
            }
            acc / (1.0 + norm2)
        })
        .collect();
    sp.inverse_real(spec)
}

/// `g = min(max(g0+ - b0-, 0), mu)` on the support ball, `b = mu - g`.
pub fn positivity_correction(mu: &[f64], g0: &[f64], b0: &[f64], mask: &[bool]) -> (Vec<f64>, Vec<f64>) {
    let g: Vec<f64> = (0..mu.len())
        .map(|i| if mask[i] { (g0[i].max(0.0) - (-b0[i]).max(0.0)).max(0.0).min(mu[i]) } else { 0.0 })
        .collect();
    let b = mu.iter().zip(&g).map(|(m, x)| m - x).collect();
    (g, b)
}

struct Bounds {
    good_rhs: f64,
    bad_rhs: f64,
    defect_norm: f64,
}

fn assemble(req: &DecompositionRequest, b0: Option<Vec<f64>>, div_norm: f64, bounds: Bounds) -> DecompositionResult {
    let grid = req.grid().clone();
    let mu = req.mu.mass();
    let (g, b, g0, b0, branch) = match b0 {
        _ if req.p == 1.0 => (mu.to_vec(), vec![0.0; mu.len()], mu.to_vec(), vec![0.0; mu.len()], Branch::TrivialExponent),
        None => (vec![0.0; mu.len()], mu.to_vec(), vec![0.0; mu.len()], mu.to_vec(), Branch::LargeDefect),
        Some(b0) => {
            let g0: Vec<f64> = mu.iter().zip(&b0).map(|(m, x)| m - x).collect();
            let mask = ball_mask(&grid, &req.center, req.tolerance_radius());
            let (g, b) = positivity_correction(mu, &g0, &b0, &mask);
            (g, b, g0, b0, Branch::Constructed)
        }
    };
    let vol = grid.cell_volume();
    let g_norm_p = lp_of_masses(&g, vol, req.p);
    let b_norm: f64 = b.iter().map(|x| x.abs()).sum();
    let report = NormReport {
        p: req.p,
        radius: req.radius,
        center: req.center.clone(),
        g_norm_p,
        b_norm,
        mu_norm: req.mu.total(),
        div_norm,
        defect_norm: bounds.defect_norm,
        good_rhs: bounds.good_rhs,
        bad_rhs: bounds.bad_rhs,
        good_ratio: ratio(g_norm_p, bounds.good_rhs),
        bad_ratio: ratio(b_norm, bounds.bad_rhs),
        branch,
    };
    DecompositionResult { grid, frame: req.frame.clone(), report, g, b, g0, b0 }
}

/// Direct Fourier construction with frame `I`: the bad part comes from the
/// defect `I mu - T` and `g0 = mu - b0`. For `I = 1` this is the identity-frame
/// statement verbatim.
pub fn decompose_divergence(req: &DecompositionRequest) -> Result<DecompositionResult> {
    req.validate()?;
    let grid = req.grid().clone();
    let defect = req.t.defect(&req.mu, &req.frame.as_vector())?;
    let defect_norm = defect.total_variation();
    let div_norm = matrix_divergence(&req.t, req.mode).total_variation();
    let mu_norm = req.mu.total();
    let ip = if req.p.is_infinite() { 0.0 } else { 1.0 / req.p };
    let bounds = Bounds {
        good_rhs: mu_norm + div_norm,
        bad_rhs: (mu_norm + div_norm).powf(ip) * defect_norm.powf(conjugate_reciprocal(req.p)),
        defect_norm,
    };
    if req.p == 1.0 || defect_norm > mu_norm {
        return Ok(assemble(req, None, div_norm, bounds));
    }
    let sp = Spectral::new(&grid);
    let n = grid.dim();
    let symbol = |idx: usize| {
        let mut s = [Complex64::new(0.0, 0.0); 3];
        for (j, v) in s.iter_mut().enumerate().take(n) {
            *v = sp.derivative_symbol(idx, j, req.mode);
        }
        s
    };
    let b0 = bad_part(&grid, &defect, req.frame.matrix(), symbol);
    Ok(assemble(req, Some(b0), div_norm, bounds))
}

/// Decomposition after the change of variables `x -> I~ x` with
/// `I~ = r |I^-1| I`, carried out in frequency space: the identity-frame
/// multiplier evaluated at `I~^T xi`, applied to the defect `mu 1 - I^-1 T`.
pub fn scaled_decompose(req: &DecompositionRequest) -> Result<DecompositionResult> {
    req.validate()?;
    let grid = req.grid().clone();
    let n = grid.dim();
    let inv: Vec<f64> = req.frame.inverse().transpose().iter().copied().collect();
    let t_frame = req.t.left_multiply(&inv);
    let identity = FrameMatrix::identity(n);
    let defect = t_frame.defect(&req.mu, &identity.as_vector())?;
    let defect_norm = defect.total_variation();
    let div_norm = matrix_divergence(&req.t, req.mode).total_variation();
    let mu_norm = req.mu.total();
    let s = req.radius * req.frame.inv_norm();
    let scaled_det = (s.powi(n as i32) * req.frame.det()).abs();
    let budget = mu_norm + s * div_norm;
    let ip = if req.p.is_infinite() { 0.0 } else { 1.0 / req.p };
    let cr = conjugate_reciprocal(req.p);
    let bounds = Bounds {
        good_rhs: budget / scaled_det.powf(cr),
        bad_rhs: budget.powf(ip) * defect_norm.powf(cr),
        defect_norm,
    };
    if req.p == 1.0 || defect_norm > mu_norm {
        return Ok(assemble(req, None, div_norm, bounds));
    }
    let tilde = req.frame.matrix() * s;
    let sp = Spectral::new(&grid);
    let symbol = |idx: usize| {
        let mut raw = [Complex64::new(0.0, 0.0); 3];
        for (j, v) in raw.iter_mut().enumerate().take(n) {
            *v = sp.derivative_symbol(idx, j, req.mode);
        }
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (i, v) in out.iter_mut().enumerate().take(n) {
            *v = (0..n).map(|j| raw[j] * tilde[(j, i)]).sum();
        }
        out
    };
    let b0 = bad_part(&grid, &defect, &DMatrix::identity(n, n), symbol);
    Ok(assemble(req, Some(b0), div_norm, bounds))
}
