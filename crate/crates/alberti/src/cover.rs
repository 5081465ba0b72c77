//! Finite cone covers and the refinement of a cone family into subfamilies.

use fragments::{cone_membership, in_cone, ConeClass, ConeSpec};
use serde::Serialize;

use crate::error::{AlbertiError, Result};
use crate::family::FragmentFamily;

/// Angle of the cone `C(w, x)`: `acos(1 - x^2)`.
pub fn aperture(x: f64) -> f64 {
    (1.0 - x * x).clamp(-1.0, 1.0).acos()
}

const CAP_SAMPLES: usize = 4096;
const RING_SAMPLES: usize = 512;
const MAX_MESH: usize = 1 << 14;

#[derive(Debug, Clone, Serialize)]
pub struct ConeCover {
    pub axis: Vec<f64>,
    /// Unit directions `w_k`.
    pub directions: Vec<Vec<f64>>,
    /// Angle of `C(e, theta + alpha/2)`, which must be covered.
    pub inner: f64,
    /// Angle of each `C(w_k, eps/2)`.
    pub cell: f64,
    /// Angle of `C(e, theta + alpha)`, which must contain every cell.
    pub outer: f64,
    /// Largest angle from a covered direction to its nearest `w_k`; exact for
    /// `n <= 2`, sampled plus a sampling allowance for `n = 3`.
    pub coverage: f64,
}

fn angle(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    d.clamp(-1.0, 1.0).acos()
}

/// Two unit vectors completing `e` to an orthonormal frame of R^3.
fn frame(e: &[f64]) -> ([f64; 3], [f64; 3]) {
    let k = (0..3).min_by(|&i, &j| e[i].abs().partial_cmp(&e[j].abs()).unwrap()).unwrap();
    let mut a = [0.0; 3];
    a[k] = 1.0;
    let d: f64 = (0..3).map(|i| a[i] * e[i]).sum();
    let mut u = [a[0] - d * e[0], a[1] - d * e[1], a[2] - d * e[2]];
    let l = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    u.iter_mut().for_each(|x| *x /= l);
    let v = [e[1] * u[2] - e[2] * u[1], e[2] * u[0] - e[0] * u[2], e[0] * u[1] - e[1] * u[0]];
    (u, v)
}

/// The direction at polar angle `a` and azimuth `b` around `e`.
fn polar(e: &[f64], f: &([f64; 3], [f64; 3]), a: f64, b: f64) -> Vec<f64> {
    let (u, v) = f;
    (0..3).map(|i| a.cos() * e[i] + a.sin() * (b.cos() * u[i] + b.sin() * v[i])).collect()
}

/// `m` Fibonacci points, uniform in area, on the cap of angle `cap` around `e`.
fn fibonacci_cap(e: &[f64], f: &([f64; 3], [f64; 3]), cap: f64, m: usize) -> Vec<Vec<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let h = 1.0 - cap.cos();
    (0..m).map(|i| polar(e, f, (1.0 - h * (i as f64 + 0.5) / m as f64).acos(), golden * i as f64)).collect()
}

/// Directions `w_k` with `C(e, theta + alpha/2) ⊂ ∪ C(w_k, eps/2) ⊂ C(e, theta + alpha)`.
pub fn build_cone_cover(e: &[f64], theta: f64, alpha: f64, eps: f64) -> Result<ConeCover> {
    if !(theta >= 0.0 && alpha > 0.0 && eps > 0.0) || !(theta + alpha < 1.0) || !(eps < alpha) {
        return Err(AlbertiError::Parameter(format!(
            "need theta + alpha < 1 and 0 < eps < alpha; got theta {theta}, alpha {alpha}, eps {eps}"
        )));
    }
    let l = e.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(l > 0.0) || !l.is_finite() {
        return Err(AlbertiError::Parameter("cone axis must be nonzero".into()));
    }
    let e: Vec<f64> = e.iter().map(|x| x / l).collect();
    let inner = aperture(theta + alpha / 2.0);
    let cell = aperture(eps / 2.0);
    let outer = aperture(theta + alpha);
    let (directions, coverage) = match e.len() {
        1 => (vec![e.clone()], 0.0),
        2 => {
            // end arcs flush with the inner cone; spacing at most 2 * cell
            let k = (inner / cell).ceil().max(1.0) as usize;
            let reach = (inner - cell).max(0.0);
            let step = if k > 1 { 2.0 * reach / (k - 1) as f64 } else { 0.0 };
            let dirs = (0..k)
                .map(|i| {
                    let c = -reach + i as f64 * step;
                    vec![c.cos() * e[0] - c.sin() * e[1], c.sin() * e[0] + c.cos() * e[1]]
                })
                .collect();
            (dirs, (0.5 * step).max(inner - reach))
        }
        3 => {
            let f = frame(&e);
            let mut samples = fibonacci_cap(&e, &f, inner, CAP_SAMPLES);
            samples.extend((0..RING_SAMPLES).map(|i| polar(&e, &f, inner, std::f64::consts::TAU * i as f64 / RING_SAMPLES as f64)));
            // every covered direction lies within this angle of some sample
            let area = std::f64::consts::TAU * (1.0 - inner.cos());
            let slack = (4.0 * area / CAP_SAMPLES as f64).sqrt();
            let mesh_cap = (inner - 0.5 * cell).max(0.0);
            let mut m = 8;
            loop {
                let dirs = fibonacci_cap(&e, &f, mesh_cap, m);
                let mut worst = (0.0, samples[0].clone());
                for s in &samples {
                    let d = dirs.iter().map(|w| angle(s, w)).fold(f64::INFINITY, f64::min);
                    if d > worst.0 {
                        worst = (d, s.clone());
                    }
                }
                if worst.0 + slack <= cell {
                    break (dirs, worst.0 + slack);
                }
                if m >= MAX_MESH {
                    return Err(AlbertiError::Cover(worst.1));
                }
                m *= 2;
            }
        }
        n => return Err(AlbertiError::Parameter(format!("cone covers are built for n <= 3, got {n}"))),
    };
    if let Some(w) = directions.iter().find(|w| angle(w, &e) + cell > outer + 1e-12) {
        return Err(AlbertiError::Cover(w.clone()));
    }
    Ok(ConeCover { axis: e, directions, inner, cell, outer, coverage })
}

#[derive(Debug, Clone)]
pub struct ConeRefinement {
    pub cover: ConeCover,
    /// One family per `w_k`, members of `Γ(phi, w_k, eps, delta/2)`.
    pub classes: Vec<FragmentFamily>,
    /// Indices into the input family, per class.
    pub assignment: Vec<Vec<usize>>,
    pub unclassified: Vec<usize>,
}

/// Sorts each entry into the first `w_k` whose cone `C(w_k, eps/2)` holds all
/// breakpoint-pair differences of `phi ∘ gamma`, then checks membership in
/// `Γ(phi, w_k, eps, delta/2)` with `delta = base.delta`.
pub fn cone_cover_refine(fam: &FragmentFamily, base: &ConeSpec, alpha: f64, eps: f64) -> Result<ConeRefinement> {
    if fam.phi.target_dim() != base.direction().len() {
        return Err(AlbertiError::Parameter("cone axis dimension differs from the map target".into()));
    }
    let cover = build_cone_cover(base.direction(), base.eps, alpha, eps)?;
    let specs = cover
        .directions
        .iter()
        .map(|w| ConeSpec::new(w.clone(), eps, base.delta / 2.0))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut assignment = vec![vec![]; specs.len()];
    let mut unclassified = vec![];
    for (j, e) in fam.entries.iter().enumerate() {
        if e.fragment.is_empty() {
            unclassified.push(j);
            continue;
        }
        let pts: Vec<Vec<f64>> = e.fragment.knots().iter().map(|k| fam.phi.apply(&k.value)).collect();
        let mut diffs = vec![];
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                diffs.push(pts[b].iter().zip(&pts[a]).map(|(x, y)| x - y).collect::<Vec<f64>>());
            }
        }
        let mut placed = false;
        for (k, (w, spec)) in cover.directions.iter().zip(&specs).enumerate() {
            if diffs.iter().all(|d| in_cone(d, w, eps / 2.0))
                && cone_membership(&e.fragment, &fam.phi, spec)?.class == ConeClass::InSpeed
            {
                assignment[k].push(j);
                placed = true;
                break;
            }
        }
        if !placed {
            unclassified.push(j);
        }
    }
    let classes = assignment
        .iter()
        .map(|idx| FragmentFamily::new(fam.phi.clone(), idx.iter().map(|&j| fam.entries[j].clone()).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConeRefinement { cover, classes, assignment, unclassified })
}
