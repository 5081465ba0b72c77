//! Lower-density certificates by induction over the scale ladder.

use serde::{Deserialize, Serialize};

use crate::config::AnalyzerConfig;
use crate::error::Result;
use crate::family::{frame_of, reference_ball_mass, DirectedFamily};
use crate::local::{local_support_estimate, Branch, StepReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CertificateStatus {
    Positive,
    NoSeed,
    HypothesisFail { radius: f64, name: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCertificate {
    pub point: Vec<f64>,
    pub radii: Vec<f64>,
    pub steps: Vec<StepReport>,
    /// `mu(B(x, r0))`.
    pub seed_mass: f64,
    /// The working `c` of the seed condition `mu(B(x, r0)) >= c (r0/3)^n`.
    pub seed_constant: f64,
    /// Lower bounds for `mu(B(x, r_k))`, `k = 0..=K`, while the chain is unbroken.
    pub lower_bounds: Vec<f64>,
    /// `c` with `mu(B(x, r')) >= c (r'/9)^n` for `r0 <= r' <= 3^K r0`; zero unless positive.
    pub c_emp: f64,
    /// `min_k mu(B(x, r_k)) / (2 r_k)^n`.
    pub theta_estimate: f64,
    pub status: CertificateStatus,
}

impl DensityCertificate {
    pub fn is_positive(&self) -> bool {
        self.status == CertificateStatus::Positive
    }

    pub fn bootstrap_count(&self) -> usize {
        self.steps.iter().filter(|s| s.branch == Branch::NonDoublingBootstrap).count()
    }
}

/// Runs every ladder step at `x`. `seed` is the working constant `c`; `None`
/// takes the measured `mu(B(x, r0)) 3^n / r0^n`.
pub fn scale_induction_certificate(
    fams: &[DirectedFamily],
    cfg: &AnalyzerConfig,
    x: &[f64],
    seed: Option<f64>,
) -> Result<DensityCertificate> {
    cfg.validate()?;
    frame_of(fams, cfg.dim, cfg.tau)?;
    let n = cfg.dim as i32;
    let radii = cfg.ladder.radii();
    let r0 = radii[0];
    let seed_mass = reference_ball_mass(fams, x, r0);
    let measured = seed_mass * (3.0 / r0).powi(n);
    let c = seed.unwrap_or(measured);
    let seeded = seed_mass > 0.0 && c > 0.0 && c <= measured;

    let mut steps = Vec::with_capacity(radii.len());
    let mut lower = seeded.then(|| c * (r0 / 3.0).powi(n));
    let mut lower_bounds = lower.into_iter().collect::<Vec<_>>();
    let mut failure = None;
    for &r in &radii {
        let step = local_support_estimate(fams, cfg, x, r)?;
        lower = match (&step.branch, lower) {
            (Branch::NonDoublingBootstrap, Some(l)) => Some(cfg.doubling * l),
            (Branch::DoublingPde, Some(_)) => step.bound,
            _ => None,
        };
        if let (Branch::HypothesisFail { name }, None) = (&step.branch, &failure) {
            failure = Some(CertificateStatus::HypothesisFail { radius: r, name: name.clone() });
        }
        if let Some(l) = lower {
            lower_bounds.push(l);
        }
        steps.push(step);
    }
    let theta_estimate = steps.iter().map(|s| s.mu_r / (2.0 * s.radius).powi(n)).fold(f64::INFINITY, f64::min);
    let status = if !seeded {
        CertificateStatus::NoSeed
    } else if let Some(f) = failure {
        f
    } else {
        CertificateStatus::Positive
    };
    let c_emp = if status == CertificateStatus::Positive {
        radii.iter().zip(&lower_bounds).map(|(r, l)| 3f64.powi(n) * l / r.powi(n)).fold(f64::INFINITY, f64::min)
    } else {
        0.0
    };
    Ok(DensityCertificate {
        point: x.to_vec(),
        radii,
        steps,
        seed_mass,
        seed_constant: c,
        lower_bounds,
        c_emp,
        theta_estimate,
        status,
    })
}
