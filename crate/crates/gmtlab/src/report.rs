//! Artifacts: `report.json`, a per-row CSV, `summary.txt` and, for
//! decompositions on request, binary grids.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use grid_measure::io::write_raw;
use grid_measure::{GridMeasure, Kind};
use serde::Serialize;

use crate::error::{GmtError, Result};
use crate::pipeline::{Outcome, Report};

/// The pretty-printed report, newline terminated.
pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct DecomposeCsvRow {
    g_norm_p: f64,
    b_norm: f64,
    mu_norm: f64,
    div_norm: f64,
    defect_norm: f64,
    good_ratio: String,
    bad_ratio: String,
    support_bound: String,
    support_volume: f64,
}

#[derive(Serialize)]
struct CertifyRow<'a> {
    x: f64,
    y: f64,
    status: &'a str,
    failure: &'a str,
    failure_radius: String,
    bootstraps: usize,
    c_emp: f64,
    theta_estimate: f64,
}

#[derive(Serialize)]
struct ScanCsvRow {
    x: f64,
    y: f64,
    radius: f64,
    mass: f64,
    invertible: bool,
    wave_cone_gap: String,
    bad_ratio: String,
    defect_ratio: String,
    div_ratio: String,
    bound_ratio: String,
}

#[derive(Serialize)]
struct EstimateCsvRow {
    x: f64,
    y: f64,
    family: usize,
    radius: f64,
    lhs_difference: f64,
    rhs_difference: f64,
    lhs_variation: f64,
    rhs_variation: f64,
    holds_difference: bool,
    holds_variation: bool,
    zeroed: usize,
}

fn csv_bytes<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(vec![]);
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    w.into_inner().expect("in-memory writer")
}

/// The CSV table of the outcome.
pub fn report_csv(report: &Report) -> Vec<u8> {
    let xy = |p: &[f64]| (p[0], p.get(1).copied().unwrap_or(0.0));
    match &report.outcome {
        Outcome::Decompose(d) => {
            let n = &d.norms;
            csv_bytes([DecomposeCsvRow {
                g_norm_p: n.g_norm_p,
                b_norm: n.b_norm,
                mu_norm: n.mu_norm,
                div_norm: n.div_norm,
                defect_norm: n.defect_norm,
                good_ratio: opt(n.good_ratio),
                bad_ratio: opt(n.bad_ratio),
                support_bound: opt(d.support_bound.value()),
                support_volume: d.support_volume,
            }])
        }
        Outcome::Estimates(e) => csv_bytes(e.rows.iter().map(|r| {
            let (x, y) = xy(&r.point);
            EstimateCsvRow {
                x,
                y,
                family: r.family,
                radius: r.report.radius,
                lhs_difference: r.report.lhs1,
                rhs_difference: r.report.rhs1,
                lhs_variation: r.report.lhs2,
                rhs_variation: r.report.rhs2,
                holds_difference: r.report.holds1,
                holds_variation: r.report.holds2,
                zeroed: r.report.zeroed,
            }
        })),
        Outcome::Certify(c) => csv_bytes(c.certificates.iter().map(|cert| {
            let (x, y) = xy(&cert.point);
            let (status, failure, radius) = match &cert.status {
                density_analyzer::CertificateStatus::Positive => ("positive", "", None),
                density_analyzer::CertificateStatus::NoSeed => ("no-seed", "", None),
                density_analyzer::CertificateStatus::HypothesisFail { radius, name } => {
                    ("hypothesis-fail", name.as_str(), Some(*radius))
                }
            };
            CertifyRow {
                x,
                y,
                status,
                failure,
                failure_radius: opt(radius),
                bootstraps: cert.bootstrap_count(),
                c_emp: cert.c_emp,
                theta_estimate: cert.theta_estimate,
            }
        })),
        Outcome::Scan(s) => csv_bytes(s.points.iter().flat_map(|p| {
            let (x, y) = xy(&p.table.point);
            p.table.rows.iter().map(move |r| ScanCsvRow {
                x,
                y,
                radius: r.radius,
                mass: r.mass,
                invertible: r.invertible,
                wave_cone_gap: r.wave_cone_gap.to_string(),
                bad_ratio: opt(r.bad_ratio),
                defect_ratio: opt(r.defect_ratio),
                div_ratio: opt(r.div_ratio),
                bound_ratio: opt(r.bound_ratio),
            })
        })),
    }
}

/// Human-readable summary.
pub fn summary(report: &Report) -> String {
    let s = &report.scenario;
    let mut out = String::new();
    let _ = writeln!(out, "scenario {} ({}), pipeline {}, seed {}", s.name, s.generator.name(), s.pipeline.name(), s.seed);
    let _ = writeln!(out, "grid n = {}, N = {}, L = {}", s.grid.n, s.grid.cells, s.grid.side);
    let pct = |k: usize, n: usize| if n == 0 { 0.0 } else { 100.0 * k as f64 / n as f64 };
    match &report.outcome {
        Outcome::Decompose(d) => {
            let n = &d.norms;
            let _ = writeln!(out, "|mu| = {:.6e}, |Div T| = {:.6e}, |1 mu - T| = {:.6e}", n.mu_norm, n.div_norm, n.defect_norm);
            let _ = writeln!(out, "|g|_p = {:.6e}, |b| = {:.6e}, branch {:?}", n.g_norm_p, n.b_norm, n.branch);
            let _ = writeln!(out, "support bound {:?}, support volume {:.6e}", d.support_bound.value(), d.support_volume);
            let _ = writeln!(out, "mass outside the central box {:.3e}", d.leakage);
        }
        Outcome::Estimates(e) => {
            let _ = writeln!(out, "{} checks: difference bound held {}, variation bound held {}", e.checks, e.holds_difference, e.holds_variation);
        }
        Outcome::Certify(c) => {
            let _ = writeln!(out, "{} points: {} positive ({:.1}%), {} without seed", c.total, c.positive, pct(c.positive, c.total), c.no_seed);
            for (name, k) in &c.failures {
                let _ = writeln!(out, "  hypothesis failure {name}: {k} ({:.1}%)", pct(*k, c.total));
            }
        }
        Outcome::Scan(sc) => {
            let _ = writeln!(
                out,
                "{} points: {} strictly decreasing, {} vanishing, {} flagged by resolution growth",
                sc.total, sc.strictly_decreasing, sc.vanishing, sc.flagged
            );
        }
    }
    out
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| GmtError::io(path, e))
}

/// Writes the artifacts into the scenario's output directory; returns their paths.
pub fn write_artifacts(report: &Report) -> Result<Vec<PathBuf>> {
    let dir = PathBuf::from(report.scenario.output.dir.clone().expect("resolved"));
    std::fs::create_dir_all(&dir).map_err(|e| GmtError::io(&dir, e))?;
    let mut paths = vec![];
    let mut put = |name: &str, bytes: &[u8]| -> Result<()> {
        let p = dir.join(name);
        write_file(&p, bytes)?;
        paths.push(p);
        Ok(())
    };
    put("report.json", report_json(report).as_bytes())?;
    put(&format!("{}.csv", report.scenario.pipeline.name()), &report_csv(report))?;
    put("summary.txt", summary(report).as_bytes())?;
    if let Outcome::Decompose(d) = &report.outcome {
        if let Some(g) = &d.grids {
            for (name, grid, values) in [
                ("mu.grid", g.mu.grid(), g.mu.raw()),
                ("good.grid", g.good.grid(), g.good.raw()),
                ("bad.grid", g.bad.grid(), g.bad.raw()),
            ] {
                let p = dir.join(name);
                let f = File::create(&p).map_err(|e| GmtError::io(&p, e))?;
                let mut w = BufWriter::new(f);
                write_raw(&mut w, grid, Kind::Scalar, values).and_then(|_| w.flush()).map_err(|e| GmtError::io(&p, e))?;
                paths.push(p);
            }
        }
    }
    Ok(paths)
}
