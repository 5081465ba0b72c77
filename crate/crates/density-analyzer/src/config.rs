//! Analyzer parameters.

use serde::{Deserialize, Serialize};

use crate::error::{AnalyzerError, Result};

/// Radii `r0, 3 r0, ..., 3^(count-1) r0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    pub r0: f64,
    pub count: usize,
}

impl Ladder {
    pub const FACTOR: f64 = 3.0;

    pub fn radii(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.r0 * Self::FACTOR.powi(k as i32)).collect()
    }

    pub fn top(&self) -> f64 {
        self.r0 * Self::FACTOR.powi(self.count.saturating_sub(1) as i32)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzerConfig {
    pub dim: usize,
    /// Bound on `|I^-1|`.
    pub tau: f64,
    /// Speed floor.
    pub delta: f64,
    /// Doubling constant.
    pub doubling: f64,
    /// Cone aperture.
    pub eps: f64,
    /// Scale of the density-good set.
    pub big_r: f64,
    pub p: f64,
    /// Divergence budget `D`; `None` uses `24 n C / delta^2`.
    #[serde(default)]
    pub big_d: Option<f64>,
    pub ladder: Ladder,
    /// Largest local grid, in cells per side.
    pub max_local_cells: usize,
}

impl AnalyzerConfig {
    /// Defaults for dimension `n`: `C = 3^n`, a three-step ladder from `r0 = 2^-11`.
    pub fn for_dim(n: usize) -> Self {
        Self {
            dim: n,
            tau: 1.0,
            delta: 0.45,
            doubling: 3f64.powi(n as i32),
            eps: 0.025,
            big_r: 0.4,
            p: fourier_decomposition::default_exponent(n),
            big_d: None,
            ladder: Ladder { r0: 1.0 / 2048.0, count: 3 },
            max_local_cells: 1024,
        }
    }

    /// `R0 = delta R / 5`.
    pub fn r0_cap(&self) -> f64 {
        self.delta * self.big_r / 5.0
    }

    /// The localized estimates need `r < delta R / 24`.
    pub fn localized_cap(&self) -> f64 {
        self.delta * self.big_r / 24.0
    }

    /// Local grids use four cells per finest radius.
    pub fn spacing(&self) -> f64 {
        self.ladder.r0 / 4.0
    }

    pub fn divergence_budget(&self) -> f64 {
        self.big_d.unwrap_or(24.0 * self.dim as f64 * self.doubling / (self.delta * self.delta))
    }

    /// `C eps / delta^2`.
    pub fn defect_budget_factor(&self) -> f64 {
        self.doubling * self.eps / (self.delta * self.delta)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(AnalyzerError::Config(m));
        if !(1..=3).contains(&self.dim) {
            return bad(format!("dimension {} outside 1..=3", self.dim));
        }
        if !(self.tau > 0.0) || !(self.delta > 0.0) || !(self.eps > 0.0) || !(self.big_r > 0.0) {
            return bad("tau, delta, eps and R must be positive".into());
        }
        if !(self.delta < 0.5) || !(self.eps < 0.5) {
            return bad("delta and eps must be below 1/2".into());
        }
        if !(self.doubling >= 1.0) || !self.doubling.is_finite() {
            return bad(format!("doubling constant {} must be at least 1", self.doubling));
        }
        if let Some(d) = self.big_d {
            if !(d > 0.0) {
                return bad(format!("divergence budget {d} must be positive"));
            }
        }
        fourier_decomposition::check_exponent(self.dim, self.p)?;
        if !(self.p > 1.0) {
            return bad("support bounds need p > 1".into());
        }
        if !(self.ladder.r0 > 0.0) || self.ladder.count == 0 {
            return bad("ladder needs r0 > 0 and at least one step".into());
        }
        let top = self.ladder.top();
        if !(top < self.r0_cap()) || !(top < self.localized_cap()) {
            return bad(format!(
                "ladder top {top} must stay below delta R / 24 = {} (R0 = {})",
                self.localized_cap(),
                self.r0_cap()
            ));
        }
        if self.max_local_cells < 8 || !self.max_local_cells.is_power_of_two() {
            return bad("max_local_cells must be a power of two, at least 8".into());
        }
        Ok(())
    }
}
