//! Affine 1-Lipschitz maps `phi: R^m -> R^n` and cone membership of `phi ∘ gamma`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{FragmentError, Result};
use crate::fragment::{dot, norm, sub, Fragment, Knot, Segment};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LipschitzRecord", into = "LipschitzRecord")]
pub struct LipschitzMap {
    rows: Vec<Vec<f64>>,
    offset: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct LipschitzRecord {
    rows: Vec<Vec<f64>>,
    offset: Vec<f64>,
}

impl TryFrom<LipschitzRecord> for LipschitzMap {
    type Error = FragmentError;
    fn try_from(r: LipschitzRecord) -> Result<Self> {
        LipschitzMap::affine(r.rows, r.offset)
    }
}

impl From<LipschitzMap> for LipschitzRecord {
    fn from(m: LipschitzMap) -> Self {
        LipschitzRecord { rows: m.rows, offset: m.offset }
    }
}

impl LipschitzMap {
    /// `x -> A x + b`, rejected unless the operator norm of `A` is at most 1.
    pub fn affine(rows: Vec<Vec<f64>>, offset: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if n == 0 || m == 0 || rows.iter().any(|r| r.len() != m) || offset.len() != n {
            return Err(FragmentError::Parameter("malformed affine map".into()));
        }
        if rows.iter().flatten().chain(&offset).any(|x| !x.is_finite()) {
            return Err(FragmentError::Parameter("non-finite affine map".into()));
        }
        let a = DMatrix::from_fn(n, m, |i, j| rows[i][j]);
        let op = a.singular_values().max();
        if op > 1.0 + 1e-12 {
            return Err(FragmentError::Parameter(format!("operator norm {op} exceeds 1")));
        }
        Ok(Self { rows, offset })
    }

    pub fn identity(m: usize) -> Self {
        let rows = (0..m).map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Self { rows, offset: vec![0.0; m] }
    }

    pub fn source_dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn target_dim(&self) -> usize {
        self.rows.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().zip(&self.offset).map(|(r, b)| dot(r, x) + b).collect()
    }

    /// Linear part only.
    pub fn apply_linear(&self, v: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    /// `phi ∘ gamma`, with the same knots.
    pub fn compose(&self, g: &Fragment) -> Result<Fragment> {
        if g.dim() != self.source_dim() {
            return Err(FragmentError::Parameter("map and fragment dimensions differ".into()));
        }
        let knots = g.knots().iter().map(|k| Knot { t: k.t, value: self.apply(&k.value) }).collect();
        Fragment::new_unchecked(self.target_dim(), g.domain().clone(), knots)
    }
}

/// `v ∈ C(w, theta)`, i.e. `<v, w> >= (1 - theta^2) |v|`, for unit `w`.
pub fn in_cone(v: &[f64], w: &[f64], theta: f64) -> bool {
    let nv = norm(v);
    dot(v, w) >= (1.0 - theta * theta) * nv - 1e-12 * nv
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    direction: Vec<f64>,
    pub eps: f64,
    pub delta: f64,
}

impl ConeSpec {
    /// The direction is normalized; `eps ∈ (0, 1)` and `delta ∈ (0, 1]`.
    pub fn new(direction: Vec<f64>, eps: f64, delta: f64) -> Result<Self> {
        let l = norm(&direction);
        if !(l > 0.0) || !l.is_finite() {
            return Err(FragmentError::Parameter("cone direction must be nonzero".into()));
        }
        if !(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta <= 1.0) {
            return Err(FragmentError::Parameter(format!("need 0 < eps < 1 and 0 < delta <= 1, got {eps}, {delta}")));
        }
        Ok(Self { direction: direction.iter().map(|x| x / l).collect(), eps, delta })
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeClass {
    /// Both the direction and the speed conditions hold.
    InSpeed,
    /// Direction holds, speed fails.
    InCone,
    Out,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeMembership {
    pub class: ConeClass,
    /// A pair `t1 <= t2` violating the first failing condition.
    pub witness: Option<(f64, f64)>,
}

/// Minimum of `f` over `[0, ls] x [0, lt]`, where `f` is the quadratic
/// `c + p s + q t + A s^2 + B s t + C t^2` known through its coefficients;
/// returns the candidate minimizers (corners, edge and interior critical points).
fn quadratic_candidates(coef: [f64; 6], ls: f64, lt: f64) -> Vec<(f64, f64)> {
    let [_, p, q, a, b, c] = coef;
    let mut cand = vec![(0.0, 0.0), (ls, 0.0), (0.0, lt), (ls, lt)];
    if c > 0.0 {
        for s in [0.0, ls] {
            cand.push((s, (-(q + b * s) / (2.0 * c)).clamp(0.0, lt)));
        }
    }
    if a > 0.0 {
        for t in [0.0, lt] {
            cand.push(((-(p + b * t) / (2.0 * a)).clamp(0.0, ls), t));
        }
    }
    let det = 4.0 * a * c - b * b;
    if a > 0.0 && det > 0.0 {
        let s = (-2.0 * c * p + b * q) / det;
        let t = (-2.0 * a * q + b * p) / det;
        if (0.0..=ls).contains(&s) && (0.0..=lt).contains(&t) {
            cand.push((s, t));
        }
    }
    cand
}

/// Worst speed violation between two pieces, `u` before `v`: returns the pair
/// `(s, t)` minimizing `|D(s,t)|^2 - delta^2 (t - s)^2` if it is negative.
fn speed_violation(u: &Segment, v: &Segment, delta: f64) -> Option<(f64, f64)> {
    let vu = u.velocity();
    let vv = v.velocity();
    let d0 = sub(&v.p0, &u.p0);
    let w0 = v.t0 - u.t0;
    let d2 = delta * delta;
    // D = d0 + vv t - vu s, w = w0 + t - s
    let coef = [
        dot(&d0, &d0) - d2 * w0 * w0,
        -2.0 * dot(&d0, &vu) + 2.0 * d2 * w0,
        2.0 * dot(&d0, &vv) - 2.0 * d2 * w0,
        dot(&vu, &vu) - d2,
        -2.0 * dot(&vu, &vv) + 2.0 * d2,
        dot(&vv, &vv) - d2,
    ];
    let mut worst: Option<(f64, (f64, f64))> = None;
    for (s, t) in quadratic_candidates(coef, u.len(), v.len()) {
        let ts = u.t0 + s;
        let tt = v.t0 + t;
        let w = tt - ts;
        if w <= 0.0 {
            continue;
        }
        let gap = norm(&sub(&v.at(tt), &u.at(ts))) - delta * w;
        if gap < -(1e-10 * w + 1e-14) && worst.map_or(true, |(g, _)| gap < g) {
            worst = Some((gap, (ts, tt)));
        }
    }
    worst.map(|(_, p)| p)
}

/// Classify `phi ∘ gamma` against the direction condition
/// `<Δ, e> >= (1 - eps^2/2) |Δ|` and the speed condition `|Δ| >= delta (t2 - t1)`.
pub fn cone_membership(g: &Fragment, phi: &LipschitzMap, cone: &ConeSpec) -> Result<ConeMembership> {
    if g.is_empty() {
        return Err(FragmentError::Empty);
    }
    if phi.target_dim() != cone.direction.len() {
        return Err(FragmentError::Parameter("cone direction and map target differ in dimension".into()));
    }
    let h = phi.compose(g)?;
    let e = cone.direction();
    let lam = 1.0 - cone.eps * cone.eps / 2.0;
    // the image of a pair of pieces is a parallelogram spanned by knot pairs,
    // and the cone is convex
    let kn = h.knots();
    let mut worst: Option<(f64, (f64, f64))> = None;
    for i in 0..kn.len() {
        for j in i + 1..kn.len() {
            let d = sub(&kn[j].value, &kn[i].value);
            let nd = norm(&d);
            let gap = dot(&d, e) - lam * nd;
            if gap < -1e-12 * nd.max(1e-300) && worst.map_or(true, |(g, _)| gap < g) {
                worst = Some((gap, (kn[i].t, kn[j].t)));
            }
        }
    }
    if let Some((_, w)) = worst {
        return Ok(ConeMembership { class: ConeClass::Out, witness: Some(w) });
    }
    let segs = h.segments();
    for (i, u) in segs.iter().enumerate() {
        if !u.is_point() && norm(&u.velocity()) < cone.delta * (1.0 - 1e-10) {
            return Ok(ConeMembership { class: ConeClass::InCone, witness: Some((u.t0, u.t1)) });
        }
        for v in &segs[i + 1..] {
            if let Some(w) = speed_violation(u, v, cone.delta) {
                return Ok(ConeMembership { class: ConeClass::InCone, witness: Some(w) });
            }
        }
    }
    Ok(ConeMembership { class: ConeClass::InSpeed, witness: None })
}
