//! Lower bounds for the Lebesgue measure of the support of `mu`.

use serde::Serialize;

use crate::decompose::{scaled_decompose, DecompositionRequest, DecompositionResult};
use crate::error::{DecompError, Result};

/// Calibrated proportionality constant in the admissible defect level `d`.
pub const DEFECT_CALIBRATION: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SupportBound {
    Bound { volume: f64 },
    /// `|b| > |mu| / 2`.
    Refused { bad: f64, total: f64 },
}

impl SupportBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            SupportBound::Bound { volume } => Some(*volume),
            SupportBound::Refused { .. } => None,
        }
    }
}

/// `(total / (2 |g|_p))^{p/(p-1)}` when `bad <= total / 2`.
pub fn support_lower_bound(total: f64, bad: f64, g_norm_p: f64, p: f64) -> Result<SupportBound> {
    if !(total > 0.0) || !(g_norm_p > 0.0) || !(bad >= 0.0) {
        return Err(DecompError::Parameter(format!(
            "need total > 0, g norm > 0, bad >= 0 (got {total}, {g_norm_p}, {bad})"
        )));
    }
    if !(p > 1.0) {
        return Err(DecompError::Parameter(format!("exponent {p} must exceed 1")));
    }
    if bad > total / 2.0 {
        return Ok(SupportBound::Refused { bad, total });
    }
    let e = if p.is_infinite() { 1.0 } else { p / (p - 1.0) };
    Ok(SupportBound::Bound { volume: (total / (2.0 * g_norm_p)).powf(e) })
}

/// `d` with `d^{(p-1)/p} = kappa tau^-1 (tau^-1 + D)^{-1/p}`.
pub fn admissible_defect(tau: f64, big_d: f64, p: f64, kappa: f64) -> f64 {
    let base = kappa / tau * (1.0 / tau + big_d).powf(-1.0 / p);
    base.powf(p / (p - 1.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct SupportEstimate {
    pub bound: f64,
    pub c_emp: f64,
    pub d: f64,
    pub defect_ratio: f64,
    pub div_ratio: f64,
    #[serde(skip)]
    pub decomposition: DecompositionResult,
}

pub fn quantified_support_bound(req: &DecompositionRequest, tau: f64, big_d: f64) -> Result<SupportEstimate> {
    quantified_support_bound_with(req, tau, big_d, DEFECT_CALIBRATION)
}

/// Checks the frame, divergence and defect hypotheses, then runs the scaled
/// decomposition and converts it into a support bound.
pub fn quantified_support_bound_with(
    req: &DecompositionRequest,
    tau: f64,
    big_d: f64,
    kappa: f64,
) -> Result<SupportEstimate> {
    if !(tau > 0.0) || !(big_d > 0.0) || !(kappa > 0.0) {
        return Err(DecompError::Parameter("tau, D and kappa must be positive".into()));
    }
    let p = req.p;
    if !(p > 1.0) {
        return Err(DecompError::Parameter("support bounds need p > 1".into()));
    }
    let inv = req.frame.inv_norm();
    if inv > tau * (1.0 + 1e-9) {
        return Err(DecompError::Hypothesis { name: "frame-bound".into(), lhs: inv, rhs: tau });
    }
    let decomposition = scaled_decompose(req)?;
    let rep = &decomposition.report;
    let mu = rep.mu_norm;
    if !(mu > 0.0) {
        return Err(DecompError::Hypothesis { name: "nonzero-mass".into(), lhs: 0.0, rhs: 0.0 });
    }
    let div_lhs = req.radius * rep.div_norm;
    if div_lhs > big_d * mu {
        return Err(DecompError::Hypothesis { name: "divergence-bound".into(), lhs: div_lhs, rhs: big_d * mu });
    }
    let d = admissible_defect(tau, big_d, p, kappa);
    if rep.defect_norm > d * mu {
        return Err(DecompError::Hypothesis { name: "defect-bound".into(), lhs: rep.defect_norm, rhs: d * mu });
    }
    match support_lower_bound(mu, rep.b_norm, rep.g_norm_p, p)? {
        SupportBound::Bound { volume } => {
            let n = req.grid().dim() as i32;
            Ok(SupportEstimate {
                bound: volume,
                c_emp: volume / req.radius.powi(n),
                d,
                defect_ratio: rep.defect_norm / mu,
                div_ratio: div_lhs / mu,
                decomposition,
            })
        }
        SupportBound::Refused { bad, total } => {
            Err(DecompError::Hypothesis { name: "bad-part".into(), lhs: bad, rhs: total / 2.0 })
        }
    }
}
