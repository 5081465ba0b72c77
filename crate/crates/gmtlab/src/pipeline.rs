//! The four pipelines. Points fan out over rayon; results come back in order.

use std::collections::BTreeMap;

use alberti::{localized_estimates, LocalizedReport};
use density_analyzer::{
    resolution_growth, scale_induction_certificate, singular_ratio_scan_with, CertificateStatus, DensityCertificate,
    DirectedFamily, RatioTable, RATIO_FLOOR,
};
use fourier_decomposition::{decompose_divergence, support_lower_bound, DecompositionRequest, NormReport, SupportBound};
use fragments::CutoffSpec;
use grid_measure::outside_central_box;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GmtError, Result};
use crate::generate::{families, realize, sample_points};
use crate::scenario::{Pipeline, Scenario};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: u32,
    /// The scenario with every default filled in.
    pub scenario: Scenario,
    pub points: Vec<Vec<f64>>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "pipeline", rename_all = "kebab-case")]
pub enum Outcome {
    Decompose(DecomposeOutcome),
    Estimates(EstimatesOutcome),
    Certify(CertifyOutcome),
    Scan(ScanOutcome),
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeOutcome {
    pub norms: NormReport,
    pub support_bound: SupportBound,
    /// Volume of the cells where `mu` is nonzero.
    pub support_volume: f64,
    /// Mass of `mu` outside the central box, which periodicity would wrap.
    pub leakage: f64,
    pub min_good: f64,
    #[serde(skip)]
    pub grids: Option<Grids>,
}

#[derive(Debug, Clone)]
pub struct Grids {
    pub mu: grid_measure::ScalarGridMeasure,
    pub good: grid_measure::ScalarGridMeasure,
    pub bad: grid_measure::SignedGridMeasure,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateRow {
    pub point: Vec<f64>,
    pub family: usize,
    pub report: LocalizedReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimatesOutcome {
    pub checks: usize,
    pub holds_difference: usize,
    pub holds_variation: usize,
    pub rows: Vec<EstimateRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyOutcome {
    pub total: usize,
    pub positive: usize,
    pub no_seed: usize,
    /// Hypothesis failures by name.
    pub failures: BTreeMap<String, usize>,
    pub positive_fraction: f64,
    pub failure_fraction: f64,
    pub certificates: Vec<DensityCertificate>,
}

/// Shape of the bad-part ratio column over the scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    StrictlyDecreasing,
    /// Every scale is at or below `RATIO_FLOOR`.
    Vanishing,
    Other,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub table: RatioTable,
    pub trend: Trend,
    /// Divergence ratios at `growth_scale` over the resolutions.
    pub growth_ratios: Vec<f64>,
    pub growth_flag: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanOutcome {
    pub total: usize,
    pub strictly_decreasing: usize,
    pub vanishing: usize,
    pub flagged: usize,
    pub points: Vec<ScanPoint>,
}

pub fn trend(ratios: &[Option<f64>]) -> Trend {
    let Some(v) = ratios.iter().copied().collect::<Option<Vec<f64>>>() else {
        return Trend::Other;
    };
    if v.iter().all(|r| *r <= RATIO_FLOOR) {
        Trend::Vanishing
    } else if v.len() >= 2 && v.windows(2).all(|w| w[1] < w[0]) {
        Trend::StrictlyDecreasing
    } else {
        Trend::Other
    }
}

/// Resolves the scenario, generates its data and runs its pipeline.
pub fn run_scenario(s: Scenario) -> Result<Report> {
    let s = s.resolve()?;
    let fams = families(&s.generator)?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let points = match s.pipeline {
        Pipeline::Decompose => vec![],
        _ => sample_points(&fams, &s.points, &mut rng)?,
    };
    let outcome = match s.pipeline {
        Pipeline::Decompose => Outcome::Decompose(decompose(&s, &fams)?),
        Pipeline::Estimates => Outcome::Estimates(estimates(&s, &fams, &points)?),
        Pipeline::Certify => Outcome::Certify(certify(&s, &fams, &points)?),
        Pipeline::Scan => Outcome::Scan(scan(&s, &fams, &points)?),
    };
    Ok(Report { tool: "gmtlab", version: REPORT_VERSION, scenario: s, points, outcome })
}

fn decompose(s: &Scenario, fams: &[DirectedFamily]) -> Result<DecomposeOutcome> {
    let grid = s.grid.build()?;
    let (mu, t) = realize(fams, &grid, s.grid.tensor)?;
    let d = &s.decompose;
    let p = d.p.expect("resolved");
    let req = DecompositionRequest::new(mu.clone(), t, d.center.clone().expect("resolved"), d.radius.expect("resolved"))?
        .with_p(p)
        .with_mode(d.mode);
    let res = decompose_divergence(&req)?;
    let r = &res.report;
    let support_bound = if r.g_norm_p > 0.0 && r.mu_norm > 0.0 {
        support_lower_bound(r.mu_norm, r.b_norm, r.g_norm_p, p)?
    } else {
        SupportBound::Refused { bad: r.b_norm, total: r.mu_norm }
    };
    let grids = d.write_grids.then(|| Grids { mu: mu.clone(), good: res.good(), bad: res.bad() });
    Ok(DecomposeOutcome {
        norms: res.report.clone(),
        support_bound,
        support_volume: mu.support_volume(),
        leakage: outside_central_box(&mu),
        min_good: res.g.iter().cloned().fold(f64::INFINITY, f64::min),
        grids,
    })
}

fn estimates(s: &Scenario, fams: &[DirectedFamily], points: &[Vec<f64>]) -> Result<EstimatesOutcome> {
    let e = &s.estimates;
    let jobs: Vec<(usize, f64, usize)> = (0..points.len())
        .flat_map(|i| e.radii.iter().flat_map(move |&r| (0..fams.len()).map(move |f| (i, r, f))))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(i, r, f)| -> Result<EstimateRow> {
            let cut = CutoffSpec::new(points[i].clone(), r)?;
            let report = localized_estimates(&fams[f].family, &cut, &fams[f].direction, e.eps, e.delta, e.big_r)?;
            Ok(EstimateRow { point: points[i].clone(), family: f, report })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimatesOutcome {
        checks: rows.len(),
        holds_difference: rows.iter().filter(|r| r.report.holds1).count(),
        holds_variation: rows.iter().filter(|r| r.report.holds2).count(),
        rows,
    })
}

fn certify(s: &Scenario, fams: &[DirectedFamily], points: &[Vec<f64>]) -> Result<CertifyOutcome> {
    let cfg = s.analyzer_config();
    let certificates = points
        .par_iter()
        .map(|x| scale_induction_certificate(fams, &cfg, x, None).map_err(GmtError::from))
        .collect::<Result<Vec<_>>>()?;
    let mut failures = BTreeMap::new();
    let (mut positive, mut no_seed) = (0, 0);
    for c in &certificates {
        match &c.status {
            CertificateStatus::Positive => positive += 1,
            CertificateStatus::NoSeed => no_seed += 1,
            CertificateStatus::HypothesisFail { name, .. } => *failures.entry(name.clone()).or_insert(0) += 1,
        }
    }
    let total = certificates.len();
    let failed: usize = failures.values().sum();
    let frac = |k: usize| if total == 0 { 0.0 } else { k as f64 / total as f64 };
    Ok(CertifyOutcome {
        total,
        positive,
        no_seed,
        positive_fraction: frac(positive),
        failure_fraction: frac(failed),
        failures,
        certificates,
    })
}

fn scan(s: &Scenario, fams: &[DirectedFamily], points: &[Vec<f64>]) -> Result<ScanOutcome> {
    let sc = &s.scan;
    let grid = s.grid.build()?;
    let (_, t) = realize(fams, &grid, s.grid.tensor)?;
    let refined = sc
        .resolutions
        .iter()
        .map(|&cells| {
            let g = s.grid.with_cells(cells).build()?;
            Ok(realize(fams, &g, s.grid.tensor)?.1)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = points
        .par_iter()
        .map(|x| -> Result<ScanPoint> {
            let table = singular_ratio_scan_with(&t, x, &sc.scales, sc.mode)?;
            let trend = trend(&table.bad_ratios());
            let growth_ratios = refined
                .iter()
                .map(|tr| {
                    let row = &singular_ratio_scan_with(tr, x, &[sc.growth_scale], sc.mode)?.rows[0];
                    Ok(row.div_ratio.unwrap_or(0.0))
                })
                .collect::<Result<Vec<f64>>>()?;
            let growth_flag = (!refined.is_empty()).then(|| resolution_growth(&growth_ratios, sc.growth_factor));
            Ok(ScanPoint { table, trend, growth_ratios, growth_flag })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanOutcome {
        total: rows.len(),
        strictly_decreasing: rows.iter().filter(|p| p.trend == Trend::StrictlyDecreasing).count(),
        vanishing: rows.iter().filter(|p| p.trend == Trend::Vanishing).count(),
        flagged: rows.iter().filter(|p| p.growth_flag == Some(true)).count(),
        points: rows,
    })
}
