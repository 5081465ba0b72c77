//! Extensions of a fragment to `[0, 1]`: the curve `bar gamma` and the cutoff
//! profile `tilde psi` built from `psi(y) = max(2 - |y - x| / r, 0)`.

use serde::{Deserialize, Serialize};

use crate::error::{FragmentError, Result};
use crate::fragment::{dot, norm, sub, Fragment, Knot, Segment};
use crate::map::LipschitzMap;

/// A piecewise-linear curve on all of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullCurve {
    knots: Vec<Knot>,
}

impl FullCurve {
    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    pub fn dim(&self) -> usize {
        self.knots[0].value.len()
    }

    pub fn to_fragment(&self) -> Fragment {
        Fragment::new_unchecked(self.dim(), crate::interval::IntervalUnion::full(), self.knots.clone())
            .expect("knots span [0, 1]")
    }

    pub fn segments(&self) -> Vec<Segment> {
        self.knots
            .windows(2)
            .map(|w| Segment { t0: w[0].t, t1: w[1].t, p0: w[0].value.clone(), p1: w[1].value.clone() })
            .collect()
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let t = t.clamp(0.0, 1.0);
        let k = self.knots.partition_point(|k| k.t <= t).clamp(1, self.knots.len() - 1);
        let (l, r) = (&self.knots[k - 1], &self.knots[k]);
        let s = (t - l.t) / (r.t - l.t);
        l.value.iter().zip(&r.value).map(|(a, b)| a + s * (b - a)).collect()
    }

    /// Velocity on the piece containing `t` (the right piece at knots).
    pub fn velocity(&self, t: f64) -> Vec<f64> {
        let k = self.knots.partition_point(|k| k.t <= t).clamp(1, self.knots.len() - 1);
        let (l, r) = (&self.knots[k - 1], &self.knots[k]);
        l.value.iter().zip(&r.value).map(|(a, b)| (b - a) / (r.t - l.t)).collect()
    }
}

/// `bar gamma`: `phi ∘ gamma` on the domain, linear on gaps, and the chord line
/// through the hull endpoints outside it; a singleton domain moves along `e`.
pub fn extend_curve(g: &Fragment, phi: &LipschitzMap, e: &[f64]) -> Result<FullCurve> {
    if g.is_empty() {
        return Err(FragmentError::Empty);
    }
    let h = phi.compose(g)?;
    if e.len() != h.dim() {
        return Err(FragmentError::Parameter("direction and map target differ in dimension".into()));
    }
    let kn = h.knots();
    let (a, b) = h.domain().hull().expect("nonempty");
    let (pa, pb) = (&kn[0].value, &kn[kn.len() - 1].value);
    let line = |t: f64| -> Vec<f64> {
        if a == b {
            pa.iter().zip(e).map(|(p, d)| p + (t - a) * d).collect()
        } else {
            pa.iter().zip(pb).map(|(p, q)| ((b - t) * p + (t - a) * q) / (b - a)).collect()
        }
    };
    let mut knots = vec![];
    if a > 0.0 {
        knots.push(Knot { t: 0.0, value: line(0.0) });
    }
    knots.extend(kn.iter().cloned());
    if b < 1.0 {
        knots.push(Knot { t: 1.0, value: line(1.0) });
    }
    Ok(FullCurve { knots })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl CutoffSpec {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(FragmentError::Parameter(format!("cutoff radius {radius} must be positive")));
        }
        Ok(Self { center, radius })
    }

    pub fn psi(&self, y: &[f64]) -> f64 {
        (2.0 - norm(&sub(y, &self.center)) / self.radius).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProfilePiece {
    /// Off the domain: linear between the two values.
    Linear { t0: f64, t1: f64, v0: f64, v1: f64 },
    /// On a domain piece: `max(0, 2 - |q + v (t - t0)| / r)`.
    Radial { t0: f64, t1: f64, q: Vec<f64>, v: Vec<f64>, r: f64 },
}

impl ProfilePiece {
    pub fn span(&self) -> (f64, f64) {
        match self {
            ProfilePiece::Linear { t0, t1, .. } | ProfilePiece::Radial { t0, t1, .. } => (*t0, *t1),
        }
    }

    pub fn on_domain(&self) -> bool {
        matches!(self, ProfilePiece::Radial { .. })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ProfilePiece::Linear { t0, t1, v0, v1 } => {
                if t1 == t0 {
                    *v0
                } else {
                    v0 + (t - t0) / (t1 - t0) * (v1 - v0)
                }
            }
            ProfilePiece::Radial { t0, q, v, r, .. } => {
                let u = t - t0;
                let d = q.iter().zip(v).map(|(a, b)| (a + b * u).powi(2)).sum::<f64>().sqrt();
                (2.0 - d / r).max(0.0)
            }
        }
    }

    /// Parameter of the closest approach, where a radial piece changes monotonicity.
    fn turning_point(&self) -> Option<f64> {
        match self {
            ProfilePiece::Linear { .. } => None,
            ProfilePiece::Radial { t0, t1, q, v, .. } => {
                let a = dot(v, v);
                (a > 0.0).then(|| (t0 - dot(q, v) / a).clamp(*t0, *t1))
            }
        }
    }

    /// `∫ |d/dt|` over the piece, exact on monotone subpieces.
    pub fn total_variation(&self) -> f64 {
        let (t0, t1) = self.span();
        self.variation_between(t0, t1)
    }

    /// `∫_lo^hi |d/dt|`, clipped to the piece.
    pub fn variation_between(&self, lo: f64, hi: f64) -> f64 {
        let (t0, t1) = self.span();
        let (a, b) = (lo.max(t0), hi.min(t1));
        if a >= b {
            return 0.0;
        }
        match self.turning_point() {
            Some(m) if m > a && m < b => (self.eval(m) - self.eval(a)).abs() + (self.eval(b) - self.eval(m)).abs(),
            _ => (self.eval(b) - self.eval(a)).abs(),
        }
    }

    /// Closure of the set where the piece is positive.
    pub fn positive_span(&self) -> Option<(f64, f64)> {
        match self {
            ProfilePiece::Linear { t0, t1, v0, v1 } => {
                if *v0 <= 0.0 && *v1 <= 0.0 {
                    return None;
                }
                let root = t0 + (t1 - t0) * v0 / (v0 - v1);
                Some(if *v0 <= 0.0 { (root, *t1) } else if *v1 <= 0.0 { (*t0, root) } else { (*t0, *t1) })
            }
            ProfilePiece::Radial { t0, t1, q, v, r } => {
                let (rho2, a) = (4.0 * r * r, dot(v, v));
                let c = dot(q, q) - rho2;
                if a == 0.0 {
                    return (c < 0.0).then_some((*t0, *t1));
                }
                let u0 = -dot(q, v) / a;
                let disc = u0 * u0 - c / a;
                if disc <= 0.0 {
                    return None;
                }
                let w = disc.sqrt();
                let (lo, hi) = ((t0 + u0 - w).max(*t0), (t0 + u0 + w).min(*t1));
                (lo < hi).then_some((lo, hi))
            }
        }
    }

    /// `∫` of the piece.
    pub fn integral(&self) -> f64 {
        let (t0, t1) = self.span();
        self.integral_between(t0, t1)
    }

    /// `∫_lo^hi`, clipped to the piece.
    pub fn integral_between(&self, lo: f64, hi: f64) -> f64 {
        let Some((p, q)) = self.positive_span() else { return 0.0 };
        let (a, b) = (lo.max(p), hi.min(q));
        if a >= b {
            return 0.0;
        }
        match self {
            ProfilePiece::Linear { .. } => 0.5 * (b - a) * (self.eval(a) + self.eval(b)),
            ProfilePiece::Radial { t0, q, v, r, .. } => {
                2.0 * (b - a) - distance_integral(q, v, a - t0, b - t0) / r
            }
        }
    }
}

/// `∫_{u0}^{u1} |q + v u| du` in closed form.
pub fn distance_integral(q: &[f64], v: &[f64], u0: f64, u1: f64) -> f64 {
    let a2 = dot(v, v);
    if a2 == 0.0 {
        return norm(q) * (u1 - u0);
    }
    let a = a2.sqrt();
    let s0 = dot(q, v) / a2;
    let k2 = (dot(q, q) / a2 - s0 * s0).max(0.0);
    let k = k2.sqrt();
    let prim = |w: f64| {
        if k == 0.0 {
            0.5 * w * w.abs()
        } else {
            0.5 * (w * (w * w + k2).sqrt() + k2 * (w / k).asinh())
        }
    };
    a * (prim(u1 + s0) - prim(u0 + s0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffProfile {
    pub pieces: Vec<ProfilePiece>,
}

impl CutoffProfile {
    pub fn eval(&self, t: f64) -> f64 {
        let k = self.pieces.partition_point(|p| p.span().1 < t).min(self.pieces.len() - 1);
        self.pieces[k].eval(t)
    }

    pub fn total_variation(&self) -> f64 {
        self.pieces.iter().map(ProfilePiece::total_variation).sum()
    }

    pub fn integral(&self) -> f64 {
        self.pieces.iter().map(ProfilePiece::integral).sum()
    }

    fn overlapping(&self, lo: f64, hi: f64) -> impl Iterator<Item = &ProfilePiece> {
        let k = self.pieces.partition_point(|p| p.span().1 <= lo);
        self.pieces[k..].iter().take_while(move |p| p.span().0 < hi)
    }

    pub fn integral_between(&self, lo: f64, hi: f64) -> f64 {
        self.overlapping(lo, hi).map(|p| p.integral_between(lo, hi)).sum()
    }

    pub fn variation_between(&self, lo: f64, hi: f64) -> f64 {
        self.overlapping(lo, hi).map(|p| p.variation_between(lo, hi)).sum()
    }

    /// Hull of the support, `None` for the zero profile.
    pub fn support(&self) -> Option<(f64, f64)> {
        let spans: Vec<(f64, f64)> = self.pieces.iter().filter_map(ProfilePiece::positive_span).collect();
        Some((spans.first()?.0, spans.last()?.1))
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    pub fn zero() -> Self {
        Self { pieces: vec![ProfilePiece::Linear { t0: 0.0, t1: 1.0, v0: 0.0, v1: 0.0 }] }
    }
}

/// Linear pieces of `max(0, f1, f2, ...)` on `[t0, t1]` for lines
/// `f_i(t) = v_i + s_i (t - a_i)` given as `(a_i, v_i, s_i)`, split at every
/// pairwise crossing and zero inside.
fn max_affine(t0: f64, t1: f64, lines: &[(f64, f64, f64)], out: &mut Vec<ProfilePiece>) {
    if t1 <= t0 {
        return;
    }
    // values are O(1); residues of cancelled zero crossings are snapped to 0
    let f = |t: f64| {
        let m = lines.iter().fold(0.0f64, |m, (a, v, s)| m.max(v + s * (t - a)));
        if m < 1e-12 { 0.0 } else { m }
    };
    let mut cuts = vec![t0, t1];
    let mut all = lines.to_vec();
    all.push((t0, 0.0, 0.0));
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let (ai, vi, si) = all[i];
            let (aj, vj, sj) = all[j];
            if si != sj {
                // v_i + s_i (t - a_i) = v_j + s_j (t - a_j), solved around a_i
                let t = ai + (vj - vi + sj * (ai - aj)) / (si - sj);
                if t > t0 && t < t1 {
                    cuts.push(t);
                }
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    for w in cuts.windows(2) {
        out.push(ProfilePiece::Linear { t0: w[0], t1: w[1], v0: f(w[0]), v1: f(w[1]) });
    }
}

/// `tilde psi`: `psi ∘ gamma` on the domain, the tent
/// `max{0, psi(gamma(a)) - |a - t|/r, psi(gamma(b)) - |b - t|/r}` on gaps `(a, b)`,
/// and the one-sided tent outside the hull.
pub fn extend_cutoff(g: &Fragment, cut: &CutoffSpec) -> Result<CutoffProfile> {
    if g.is_empty() {
        return Err(FragmentError::Empty);
    }
    if cut.center.len() != g.dim() {
        return Err(FragmentError::Parameter("cutoff centre and fragment differ in dimension".into()));
    }
    let r = cut.radius;
    let segs = g.segments();
    let psi_at = |p: &[f64]| cut.psi(p);
    let mut pieces = vec![];
    let first = &segs[0];
    let pa = psi_at(&first.p0);
    max_affine(0.0, first.t0, &[(first.t0, pa, 1.0 / r)], &mut pieces);
    for (i, s) in segs.iter().enumerate() {
        if !s.is_point() {
            pieces.push(ProfilePiece::Radial { t0: s.t0, t1: s.t1, q: sub(&s.p0, &cut.center), v: s.velocity(), r });
        }
        if let Some(nx) = segs.get(i + 1) {
            if nx.t0 > s.t1 {
                let (a, b) = (s.t1, nx.t0);
                let (p0, p1) = (psi_at(&s.p1), psi_at(&nx.p0));
                max_affine(a, b, &[(a, p0, -1.0 / r), (b, p1, 1.0 / r)], &mut pieces);
            }
        }
    }
    let last = &segs[segs.len() - 1];
    let pb = psi_at(&last.p1);
    max_affine(last.t1, 1.0, &[(last.t1, pb, -1.0 / r)], &mut pieces);
    if pieces.is_empty() {
        // the domain is the single point 0 = 1 cannot happen; a point domain at an
        // end of [0, 1] still produces the other tail
        return Ok(CutoffProfile::zero());
    }
    Ok(CutoffProfile { pieces })
}
