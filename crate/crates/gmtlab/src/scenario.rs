//! Scenario files. Every tunable lives here; `resolve` fills the defaults so
//! that the report records the values actually used.

use std::path::Path;

use density_analyzer::AnalyzerConfig;
use grid_measure::DerivativeMode;
use serde::{Deserialize, Serialize};

use crate::error::{GmtError, Result};

pub const MAX_GENERATION: usize = 7;
pub const MAX_LINES: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub generator: Generator,
    #[serde(default)]
    pub pipeline: Pipeline,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub grid: GridSpec,
    /// `None` takes `AnalyzerConfig::for_dim(grid.n)`.
    #[serde(default)]
    pub analyzer: Option<AnalyzerConfig>,
    #[serde(default)]
    pub points: Points,
    #[serde(default)]
    pub decompose: DecomposeSpec,
    #[serde(default)]
    pub estimates: EstimatesSpec,
    #[serde(default)]
    pub scan: ScanSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Planar data in the unit square. Lines are unit-speed segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Generator {
    /// Horizontal and vertical lines at `(k + 1/2) / lines`, weight `1 / lines`.
    SquareFubini {
        #[serde(default = "default_lines")]
        lines: usize,
    },
    /// `K_g x K_g` for the middle-half Cantor set `K_g`, with `per_square`
    /// lines per square side, each restricted to `K_g`.
    FourCornerCantor {
        generation: usize,
        #[serde(default = "default_per_square")]
        per_square: usize,
    },
    /// Fubini lines whose parameter runs over a Cantor set of measure 1/2
    /// (centred gaps of length `4^-k` at step `k`).
    CantorFragments {
        generation: usize,
        #[serde(default = "default_lines")]
        lines: usize,
    },
    /// One segment of length at most 1, plus an empty family across it.
    LineMeasure {
        #[serde(default = "default_line_from")]
        from: [f64; 2],
        #[serde(default = "default_line_to")]
        to: [f64; 2],
    },
    /// Fubini lines clipped to `inner <= |y - center| <= outer`.
    Annulus {
        #[serde(default = "default_center")]
        center: [f64; 2],
        #[serde(default = "default_inner")]
        inner: f64,
        #[serde(default = "default_outer")]
        outer: f64,
        #[serde(default = "default_lines")]
        lines: usize,
    },
    /// The square plus a horizontal line at height `line_y` of density
    /// `line_weight` in the reference measure.
    Mixture {
        #[serde(default = "default_lines")]
        lines: usize,
        #[serde(default = "default_line_y")]
        line_y: f64,
        #[serde(default = "default_line_weight")]
        line_weight: f64,
    },
}

fn default_lines() -> usize {
    16384
}
fn default_per_square() -> usize {
    16
}
fn default_line_from() -> [f64; 2] {
    [0.25, 0.5]
}
fn default_line_to() -> [f64; 2] {
    [0.75, 0.5]
}
fn default_center() -> [f64; 2] {
    [0.5, 0.5]
}
fn default_inner() -> f64 {
    0.2
}
fn default_outer() -> f64 {
    0.45
}
fn default_line_y() -> f64 {
    0.5
}
fn default_line_weight() -> f64 {
    1.0
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SquareFubini { .. } => "square-fubini",
            Self::FourCornerCantor { .. } => "four-corner-cantor",
            Self::CantorFragments { .. } => "cantor-fragments",
            Self::LineMeasure { .. } => "line-measure",
            Self::Annulus { .. } => "annulus",
            Self::Mixture { .. } => "mixture",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(GmtError::Scenario(format!("{}: {msg}", self.name())));
        let unit = |p: &[f64; 2]| p.iter().all(|c| (0.0..=1.0).contains(c));
        let lines_ok = |l: usize| (1..=MAX_LINES).contains(&l);
        match self {
            Self::SquareFubini { lines } | Self::Mixture { lines, .. } | Self::Annulus { lines, .. } if !lines_ok(*lines) => {
                fail(format!("lines = {lines} outside 1..={MAX_LINES}"))
            }
            Self::CantorFragments { lines, .. } if !lines_ok(*lines) => fail(format!("lines = {lines} outside 1..={MAX_LINES}")),
            Self::FourCornerCantor { generation, .. } | Self::CantorFragments { generation, .. }
                if *generation > MAX_GENERATION =>
            {
                fail(format!("generation {generation} exceeds {MAX_GENERATION}"))
            }
            Self::FourCornerCantor { per_square, .. } if !(1..=1024).contains(per_square) => {
                fail(format!("per_square = {per_square} outside 1..=1024"))
            }
            Self::LineMeasure { from, to } => {
                let len = ((to[0] - from[0]).powi(2) + (to[1] - from[1]).powi(2)).sqrt();
                if !unit(from) || !unit(to) {
                    fail("endpoints must lie in [0,1]^2".into())
                } else if !(len > 0.0 && len <= 1.0) {
                    fail(format!("length {len} outside (0, 1]"))
                } else {
                    Ok(())
                }
            }
            Self::Annulus { center, inner, outer, .. } => {
                let fits = center.iter().all(|c| c - outer >= 0.0 && c + outer <= 1.0);
                if !(0.0 <= *inner && inner < outer) || !fits {
                    fail("need 0 <= inner < outer with the disc inside [0,1]^2".into())
                } else {
                    Ok(())
                }
            }
            Self::Mixture { line_y, line_weight, .. } => {
                if !(0.0..=1.0).contains(line_y) || !(*line_weight > 0.0 && line_weight.is_finite()) {
                    fail("need line_y in [0,1] and a positive line_weight".into())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Decompose,
    Estimates,
    #[default]
    Certify,
    Scan,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Self::Decompose => "decompose",
            Self::Estimates => "estimates",
            Self::Certify => "certify",
            Self::Scan => "scan",
        }
    }
}

/// How the matrix measure `T` is realized on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tensor {
    /// `T = 1 mu`.
    #[default]
    Identity,
    /// Row `i` is the tangent field of family `i`.
    Families,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub cells: usize,
    pub side: f64,
    /// `None` centres the box on the unit square.
    #[serde(default)]
    pub origin: Option<Vec<f64>>,
    #[serde(default)]
    pub tensor: Tensor,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n: 2, cells: 128, side: 2.0, origin: None, tensor: Tensor::Identity }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<grid_measure::Grid> {
        let origin = self.origin.clone().unwrap_or_else(|| vec![0.5 - self.side / 2.0; self.n]);
        Ok(grid_measure::Grid::new(self.n, self.cells, self.side, origin)?)
    }

    pub fn with_cells(&self, cells: usize) -> Self {
        Self { cells, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Points {
    Explicit { points: Vec<Vec<f64>> },
    /// Uniform in the box `[lo, hi]`; a degenerate axis is held fixed.
    Box { count: usize, lo: Vec<f64>, hi: Vec<f64> },
    /// Drawn from the reference measure of the generator's families.
    Support { count: usize },
}

impl Default for Points {
    fn default() -> Self {
        Self::Support { count: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DecomposeSpec {
    /// Support ball centre; `None` is the centre of the unit square.
    #[serde(default)]
    pub center: Option<Vec<f64>>,
    /// `None` is the half-diagonal of the unit square.
    #[serde(default)]
    pub radius: Option<f64>,
    /// `None` is `n / (n - 1/2)`.
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub mode: DerivativeMode,
    /// Also write `mu`, `g` and `b` as binary grids.
    #[serde(default)]
    pub write_grids: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatesSpec {
    pub radii: Vec<f64>,
    pub eps: f64,
    pub delta: f64,
    pub big_r: f64,
}

impl Default for EstimatesSpec {
    fn default() -> Self {
        Self { radii: vec![1.0 / 64.0, 1.0 / 96.0, 1.0 / 128.0, 1.0 / 192.0, 1.0 / 256.0], eps: 0.49, delta: 0.45, big_r: 0.9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSpec {
    /// Halving scales.
    pub scales: Vec<f64>,
    pub mode: DerivativeMode,
    /// Grid sizes for the resolution-growth flag; empty skips it.
    pub resolutions: Vec<usize>,
    pub growth_scale: f64,
    pub growth_factor: f64,
}

impl Default for ScanSpec {
    fn default() -> Self {
        Self {
            scales: vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
            mode: DerivativeMode::CenteredDifference,
            resolutions: vec![],
            growth_scale: 1.0 / 16.0,
            growth_factor: 1.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// `None` is `out/<name>`.
    #[serde(default)]
    pub dir: Option<String>,
}

/// Command-line settings that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub pipeline: Option<Pipeline>,
    pub grid_n: Option<usize>,
    pub grid_cells: Option<usize>,
    pub out: Option<String>,
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GmtError::Scenario(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| GmtError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(p) = o.pipeline {
            self.pipeline = p;
        }
        if let Some(n) = o.grid_n {
            self.grid.n = n;
        }
        if let Some(c) = o.grid_cells {
            self.grid.cells = c;
        }
        if let Some(d) = &o.out {
            self.output.dir = Some(d.clone());
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
    }

    /// Fills every default and checks ranges.
    pub fn resolve(mut self) -> Result<Self> {
        let bad = |msg: String| Err(GmtError::Scenario(msg));
        if self.name.trim().is_empty() {
            return bad("name must not be empty".into());
        }
        self.generator.validate()?;
        let n = self.grid.n;
        if n != 2 {
            return bad(format!("generator {} is planar; grid n must be 2, got {n}", self.generator.name()));
        }
        if self.grid.origin.is_none() {
            self.grid.origin = Some(vec![0.5 - self.grid.side / 2.0; n]);
        }
        let grid = self.grid.build()?;
        if !grid.in_central_box(&vec![0.0; n]) || !grid.in_central_box(&vec![1.0; n]) {
            return bad("the unit square must lie in the central box of side L/2".into());
        }
        let cfg = self.analyzer.take().unwrap_or_else(|| AnalyzerConfig::for_dim(n));
        if cfg.dim != n {
            return bad(format!("analyzer dim {} differs from grid n {n}", cfg.dim));
        }
        cfg.validate().map_err(|e| GmtError::Scenario(format!("analyzer: {e}")))?;
        self.analyzer = Some(cfg);

        match &self.points {
            Points::Explicit { points } => {
                if let Some(p) = points.iter().find(|p| p.len() != n) {
                    return bad(format!("point {p:?} is not in dimension {n}"));
                }
            }
            Points::Box { lo, hi, .. } => {
                if lo.len() != n || hi.len() != n || lo.iter().zip(hi).any(|(a, b)| !(a <= b)) {
                    return bad("box needs lo <= hi in every coordinate".into());
                }
            }
            Points::Support { .. } => {}
        }

        let d = &mut self.decompose;
        d.center.get_or_insert_with(|| vec![0.5; n]);
        d.radius.get_or_insert((n as f64).sqrt() / 2.0);
        d.p.get_or_insert(fourier_decomposition::default_exponent(n));
        if d.center.as_ref().map(Vec::len) != Some(n) {
            return bad("decompose.center has the wrong dimension".into());
        }

        let e = &self.estimates;
        if e.radii.iter().any(|r| !(*r > 0.0)) || !(e.eps > 0.0 && e.eps < 1.0) || !(e.delta > 0.0 && e.delta <= 1.0) || !(e.big_r > 0.0) {
            return bad("estimates needs positive radii, eps in (0,1), delta in (0,1], big_r > 0".into());
        }

        let s = &self.scan;
        if s.scales.is_empty() || s.resolutions.iter().any(|c| !c.is_power_of_two()) || !(s.growth_factor > 1.0) || !(s.growth_scale > 0.0) {
            return bad("scan needs scales, power-of-two resolutions and growth_factor > 1".into());
        }

        if self.output.dir.is_none() {
            self.output.dir = Some(format!("out/{}", self.name));
        }
        Ok(self)
    }

    /// The resolved analyzer configuration.
    pub fn analyzer_config(&self) -> AnalyzerConfig {
        self.analyzer.clone().unwrap_or_else(|| AnalyzerConfig::for_dim(self.grid.n))
    }
}
