//! One step of the scale induction at `(x, r)`.

use alberti::{
    defect_ball_mass, disintegrate_scalar, disintegrate_vector, extended_families, localized_estimates, DensityProfile,
    FamilyEntry, FragmentFamily, LocalizedReport,
};
use fourier_decomposition::{admissible_defect, scaled_decompose, support_lower_bound, DecompositionRequest, SupportBound};
use fragments::{extend_cutoff, CutoffSpec, IntervalUnion};
use grid_measure::{Grid, MatrixGridMeasure, ScalarGridMeasure, VectorGridMeasure};
use serde::{Deserialize, Serialize};

use crate::config::AnalyzerConfig;
use crate::error::{AnalyzerError, Result};
use crate::family::{frame_of, localize, reference_ball_mass, DirectedFamily};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "kebab-case")]
pub enum Branch {
    /// Doubling held and the support estimate went through.
    DoublingPde,
    /// `mu(B(x, 3r)) > C mu(B(x, r))`.
    NonDoublingBootstrap,
    HypothesisFail { name: String },
}

impl Branch {
    pub fn fail(name: &str) -> Self {
        Branch::HypothesisFail { name: name.into() }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Branch::HypothesisFail { .. })
    }
}

/// Realized quantities of the support estimate on `phi#(psi mu)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdeReport {
    pub local_cells: usize,
    pub local_spacing: f64,
    pub mu_norm: f64,
    pub g_norm_p: f64,
    pub b_norm: f64,
    /// `2r ‖Div T‖ / ‖psi mu‖`.
    pub div_ratio: f64,
    pub div_budget: f64,
    /// `‖I psi mu - T‖ / ‖psi mu‖`.
    pub defect_ratio: f64,
    /// The admissible level `d` for the realized divergence ratio.
    pub admissible_defect: f64,
    pub defect_within_admissible: bool,
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepReport {
    pub radius: f64,
    pub mu_r: f64,
    pub mu_3r: f64,
    pub branch: Branch,
    /// `nu_i(B(x, 2r))`, when the defect hypothesis was checked.
    pub nu_2r: Vec<f64>,
    /// `C eps / delta^2 mu(B(x, r))`.
    pub defect_budget: f64,
    pub localized: Vec<LocalizedReport>,
    pub pde: Option<PdeReport>,
    /// Lower bound for `H^n(spt phi#(psi mu))`.
    pub bound: Option<f64>,
    /// `bound / r^n`.
    pub c_emp: Option<f64>,
}

impl StepReport {
    fn new(radius: f64, mu_r: f64, mu_3r: f64, defect_budget: f64) -> Self {
        Self {
            radius,
            mu_r,
            mu_3r,
            branch: Branch::fail("unset"),
            nu_2r: vec![],
            defect_budget,
            localized: vec![],
            pde: None,
            bound: None,
            c_emp: None,
        }
    }

    fn finish(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }
}

/// Doubling and defect hypotheses at `(x, r)`, then the support estimate for
/// `phi#(psi mu)` at radius `2r`.
pub fn local_support_estimate(fams: &[DirectedFamily], cfg: &AnalyzerConfig, x: &[f64], r: f64) -> Result<StepReport> {
    cfg.validate()?;
    let frame = frame_of(fams, cfg.dim, cfg.tau)?;
    if x.len() != cfg.dim || !(r > 0.0) {
        return Err(AnalyzerError::Input(format!("need a point in dimension {} and r > 0", cfg.dim)));
    }
    let local: Vec<DirectedFamily> = fams
        .iter()
        .map(|f| DirectedFamily::new(localize(&f.family, x, 3.0 * r), f.direction.clone()))
        .collect();
    let mu_r = reference_ball_mass(&local, x, r);
    let mu_3r = reference_ball_mass(&local, x, 3.0 * r);
    let mut step = StepReport::new(r, mu_r, mu_3r, cfg.defect_budget_factor() * mu_r);
    if mu_3r > cfg.doubling * mu_r {
        return Ok(step.finish(Branch::NonDoublingBootstrap));
    }
    if !(mu_3r > 0.0) {
        return Ok(step.finish(Branch::fail("empty-ball")));
    }
    for f in &local {
        step.nu_2r.push(defect_ball_mass(&f.family, cfg.eps, cfg.big_r, x, 2.0 * r)?);
    }
    if step.nu_2r.iter().any(|nu| !(*nu < step.defect_budget)) {
        return Ok(step.finish(Branch::fail("defect")));
    }

    let cut = CutoffSpec::new(x.to_vec(), r)?;
    let mut rows = vec![];
    let mut psi_fams = vec![];
    for f in &local {
        step.localized.push(localized_estimates(&f.family, &cut, &f.direction, cfg.eps, cfg.delta, cfg.big_r)?);
        let (field, _) = extended_families(&f.family, &cut, &f.direction, cfg.eps, cfg.delta, cfg.big_r)?;
        rows.push(clip_to_support(&field)?);
        psi_fams.push(weighted_by_cutoff(&f.family, &cut)?);
    }
    let center = local[0].family.phi.apply(x);
    let grid = local_grid(cfg, &center, 2.0 * r, rows.iter().chain(&psi_fams))?;
    let mut psi_mu = vec![0.0; grid.len()];
    for pf in &psi_fams {
        let m = disintegrate_scalar(pf, &grid)?;
        psi_mu.iter_mut().zip(m.mass()).for_each(|(a, b)| *a += b / psi_fams.len() as f64);
    }
    let psi_mu = ScalarGridMeasure::new(grid.clone(), psi_mu)?;
    if !(psi_mu.total() > 0.0) {
        return Ok(step.finish(Branch::fail("nonzero-mass")));
    }
    let t_rows = rows.iter().map(|f| disintegrate_vector(f, &grid)).collect::<alberti::Result<Vec<VectorGridMeasure>>>()?;
    let t = MatrixGridMeasure::from_rows(&t_rows)?;
    let req = DecompositionRequest::new(psi_mu, t, center, 2.0 * r)?.with_frame(frame).with_p(cfg.p);
    let dec = scaled_decompose(&req)?;
    let rep = &dec.report;
    let div_ratio = 2.0 * r * rep.div_norm / rep.mu_norm;
    let defect_ratio = rep.defect_norm / rep.mu_norm;
    let d = admissible_defect(cfg.tau, div_ratio.max(f64::MIN_POSITIVE), cfg.p, fourier_decomposition::DEFECT_CALIBRATION);
    let mut pde = PdeReport {
        local_cells: grid.cells_per_side(),
        local_spacing: grid.spacing(),
        mu_norm: rep.mu_norm,
        g_norm_p: rep.g_norm_p,
        b_norm: rep.b_norm,
        div_ratio,
        div_budget: cfg.divergence_budget(),
        defect_ratio,
        admissible_defect: d,
        defect_within_admissible: defect_ratio <= d,
        bound: None,
    };
    if div_ratio > pde.div_budget {
        step.pde = Some(pde);
        return Ok(step.finish(Branch::fail("divergence-bound")));
    }
    if !(rep.g_norm_p > 0.0) {
        step.pde = Some(pde);
        return Ok(step.finish(Branch::fail("bad-part")));
    }
    let branch = match support_lower_bound(rep.mu_norm, rep.b_norm, rep.g_norm_p, cfg.p)? {
        SupportBound::Bound { volume } => {
            pde.bound = Some(volume);
            step.bound = Some(volume);
            step.c_emp = Some(volume / r.powi(cfg.dim as i32));
            Branch::DoublingPde
        }
        SupportBound::Refused { .. } => Branch::fail("bad-part"),
    };
    step.pde = Some(pde);
    Ok(step.finish(branch))
}

/// Each entry cut down to the hull of its profile's support.
fn clip_to_support(fam: &FragmentFamily) -> Result<FragmentFamily> {
    let mut entries = vec![];
    for e in &fam.entries {
        let Some(Some((lo, hi))) = e.profile.support() else { continue };
        let fragment = e.fragment.restrict(&IntervalUnion::interval(lo, hi)?);
        if !fragment.is_empty() {
            entries.push(FamilyEntry { fragment, ..e.clone() });
        }
    }
    Ok(FragmentFamily { phi: fam.phi.clone(), entries })
}

/// `F(psi |(phi gamma)'|, gamma, P)` restricted to where `psi ∘ gamma` is positive.
fn weighted_by_cutoff(fam: &FragmentFamily, cut: &CutoffSpec) -> Result<FragmentFamily> {
    let mut entries = vec![];
    for e in fam.entries.iter().filter(|e| !e.fragment.is_empty() && e.weight > 0.0) {
        let profile = extend_cutoff(&e.fragment, cut)?;
        if profile.is_zero() {
            continue;
        }
        entries.push(FamilyEntry::new(e.weight, e.fragment.clone(), DensityProfile::CutoffSpeed { profile })?);
    }
    clip_to_support(&FragmentFamily { phi: fam.phi.clone(), entries })
}

fn image_extent(fam: &FragmentFamily, center: &[f64]) -> f64 {
    fam.entries
        .iter()
        .flat_map(|e| e.fragment.knots().iter().map(|k| fam.phi.apply(&k.value)))
        .map(|y| y.iter().zip(center).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

/// A grid on the lattice of spacing `r0 / 4`, holding everything within twice the
/// largest extent in its central half.
fn local_grid<'a>(
    cfg: &AnalyzerConfig,
    center: &[f64],
    radius: f64,
    fams: impl Iterator<Item = &'a FragmentFamily>,
) -> Result<Grid> {
    let h = cfg.spacing();
    let extent = fams.map(|f| image_extent(f, center)).fold(radius, f64::max);
    let need = ((4.0 * extent / h).ceil() as usize + 4).max(16).next_power_of_two();
    if need > cfg.max_local_cells {
        return Err(AnalyzerError::LocalGrid { cells: need, limit: cfg.max_local_cells });
    }
    let side = need as f64 * h;
    let origin = center.iter().map(|c| (c / h).round() * h - side / 2.0).collect();
    Ok(Grid::new(cfg.dim, need, side, origin)?)
}

