//! Piecewise-linear 1-Lipschitz fragments `gamma: K -> R^m`, `K ⊆ [0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{FragmentError, Result};
use crate::interval::IntervalUnion;

const LIP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub t: f64,
    pub value: Vec<f64>,
}

/// Knots include every interval endpoint; between consecutive knots of one
/// interval the fragment is linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FragmentRecord", into = "FragmentRecord")]
pub struct Fragment {
    dim: usize,
    domain: IntervalUnion,
    knots: Vec<Knot>,
}

#[derive(Serialize, Deserialize)]
struct FragmentRecord {
    dim: usize,
    domain: IntervalUnion,
    knots: Vec<Knot>,
}

impl TryFrom<FragmentRecord> for Fragment {
    type Error = FragmentError;
    fn try_from(r: FragmentRecord) -> Result<Self> {
        Fragment::new(r.dim, r.domain, r.knots)
    }
}

impl From<Fragment> for FragmentRecord {
    fn from(f: Fragment) -> Self {
        FragmentRecord { dim: f.dim, domain: f.domain, knots: f.knots }
    }
}

/// A linear piece `[t0, t1]` of a fragment; `t0 == t1` for isolated points.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub t0: f64,
    pub t1: f64,
    pub p0: Vec<f64>,
    pub p1: Vec<f64>,
}

impl Segment {
    pub fn len(&self) -> f64 {
        self.t1 - self.t0
    }

    pub fn is_point(&self) -> bool {
        self.t1 == self.t0
    }

    pub fn velocity(&self) -> Vec<f64> {
        if self.is_point() {
            return vec![0.0; self.p0.len()];
        }
        let l = self.len();
        self.p0.iter().zip(&self.p1).map(|(a, b)| (b - a) / l).collect()
    }

    pub fn at(&self, t: f64) -> Vec<f64> {
        if self.is_point() {
            return self.p0.clone();
        }
        let s = (t - self.t0) / self.len();
        self.p0.iter().zip(&self.p1).map(|(a, b)| a + s * (b - a)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricDerivative {
    Defined { velocity: Vec<f64>, speed: f64 },
    /// Knot with a slope change, interval endpoint, or isolated point.
    Undefined,
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Fragment {
    pub fn new(dim: usize, domain: IntervalUnion, knots: Vec<Knot>) -> Result<Self> {
        let f = Self::new_unchecked(dim, domain, knots)?;
        f.check_lipschitz()?;
        Ok(f)
    }

    /// Structural checks only; the Lipschitz bound is assumed.
    pub fn new_unchecked(dim: usize, domain: IntervalUnion, knots: Vec<Knot>) -> Result<Self> {
        if dim == 0 {
            return Err(FragmentError::Parameter("target dimension must be positive".into()));
        }
        for w in knots.windows(2) {
            if !(w[0].t < w[1].t) {
                return Err(FragmentError::Parameter("knot times must increase strictly".into()));
            }
        }
        for k in &knots {
            if k.value.len() != dim || k.value.iter().any(|x| !x.is_finite()) {
                return Err(FragmentError::Parameter(format!("bad value at knot t = {}", k.t)));
            }
            if !domain.contains(k.t) {
                return Err(FragmentError::Domain(k.t));
            }
        }
        let has = |t: f64| knots.binary_search_by(|k| k.t.partial_cmp(&t).unwrap()).is_ok();
        if let Some(e) = domain.endpoints().into_iter().find(|&e| !has(e)) {
            return Err(FragmentError::Parameter(format!("interval endpoint {e} has no knot")));
        }
        Ok(Self { dim, domain, knots })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, domain: IntervalUnion::empty(), knots: vec![] }
    }

    /// Knots at the interval endpoints and at every `times` entry inside the domain.
    pub fn from_fn(dim: usize, domain: IntervalUnion, times: &[f64], f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        Self::new(dim, domain.clone(), Self::knots_for(&domain, times, f))
    }

    fn knots_for(domain: &IntervalUnion, times: &[f64], f: impl Fn(f64) -> Vec<f64>) -> Vec<Knot> {
        let mut ts: Vec<f64> = domain.endpoints();
        ts.extend(times.iter().copied().filter(|t| domain.contains(*t)));
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ts.dedup();
        ts.into_iter().map(|t| Knot { t, value: f(t) }).collect()
    }

    /// The straight fragment from `p` at `a` to `q` at `b`.
    pub fn segment(a: f64, b: f64, p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let dim = p.len();
        let mut knots = vec![Knot { t: a, value: p }];
        if b > a {
            knots.push(Knot { t: b, value: q });
        }
        Self::new(dim, IntervalUnion::interval(a, b)?, knots)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &IntervalUnion {
        &self.domain
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    fn check_lipschitz(&self) -> Result<()> {
        // gamma(t) - gamma(s) is affine on each rectangle of two pieces, so the
        // worst ratio is attained at knot pairs
        for i in 0..self.knots.len() {
            for j in i + 1..self.knots.len() {
                let (a, b) = (&self.knots[i], &self.knots[j]);
                let d = norm(&sub(&b.value, &a.value));
                if d > (b.t - a.t) * (1.0 + LIP_SLACK) + 1e-15 {
                    return Err(FragmentError::NotLipschitz(a.t, b.t));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        if !self.domain.contains(t) {
            return Err(FragmentError::Domain(t));
        }
        let k = self.knots.partition_point(|k| k.t <= t);
        let left = &self.knots[k - 1];
        if left.t == t || k == self.knots.len() {
            return Ok(left.value.clone());
        }
        let right = &self.knots[k];
        let s = (t - left.t) / (right.t - left.t);
        Ok(left.value.iter().zip(&right.value).map(|(a, b)| a + s * (b - a)).collect())
    }

    /// Linear pieces and isolated points, in order.
    pub fn segments(&self) -> Vec<Segment> {
        let mut out = vec![];
        let mut k = 0;
        for &(a, b) in self.domain.intervals() {
            while self.knots[k].t < a {
                k += 1;
            }
            if a == b {
                let v = self.knots[k].value.clone();
                out.push(Segment { t0: a, t1: a, p0: v.clone(), p1: v });
                continue;
            }
            while self.knots[k].t < b {
                let (l, r) = (&self.knots[k], &self.knots[k + 1]);
                out.push(Segment { t0: l.t, t1: r.t, p0: l.value.clone(), p1: r.value.clone() });
                k += 1;
            }
        }
        out
    }

    /// The restriction to `domain ∩ k`; the empty fragment if they are disjoint.
    pub fn restrict(&self, k: &IntervalUnion) -> Fragment {
        let domain = self.domain.intersect(k);
        let times: Vec<f64> = self.knots.iter().map(|k| k.t).collect();
        let knots = Self::knots_for(&domain, &times, |t| self.eval(t).expect("inside the original domain"));
        Self::new_unchecked(self.dim, domain, knots).expect("restriction of a valid fragment")
    }

    pub fn metric_derivative(&self, t: f64) -> Result<MetricDerivative> {
        let iv = self.domain.find(t).ok_or(FragmentError::Domain(t))?;
        let (a, b) = self.domain.intervals()[iv];
        if t == a || t == b {
            return Ok(MetricDerivative::Undefined);
        }
        let segs = self.segments();
        let at: Vec<&Segment> = segs.iter().filter(|s| s.t0 <= t && t <= s.t1).collect();
        let v = at[0].velocity();
        if at.len() > 1 && at[1].velocity() != v {
            return Ok(MetricDerivative::Undefined);
        }
        let speed = norm(&v);
        Ok(MetricDerivative::Defined { velocity: v, speed })
    }

    /// `{t in K : |gamma(t) - x| <= rho}`, exactly, piece by piece.
    pub fn preimage_ball(&self, x: &[f64], rho: f64) -> IntervalUnion {
        let mut iv = vec![];
        for s in self.segments() {
            if let Some(r) = segment_ball_times(&s, x, rho) {
                iv.push(r);
            }
        }
        IntervalUnion::new(iv).expect("sub-intervals of the domain")
    }

    /// Total length `∫_K |gamma'|`.
    pub fn length(&self) -> f64 {
        self.segments().iter().map(|s| norm(&sub(&s.p1, &s.p0))).sum()
    }
}

/// Times in the segment where `|s(t) - x| <= rho`, as one closed interval.
pub fn segment_ball_times(s: &Segment, x: &[f64], rho: f64) -> Option<(f64, f64)> {
    let q = sub(&s.p0, x);
    if s.is_point() {
        return (norm(&q) <= rho).then_some((s.t0, s.t0));
    }
    let v = s.velocity();
    let a = dot(&v, &v);
    let c = dot(&q, &q) - rho * rho;
    if a == 0.0 {
        return (c <= 0.0).then_some((s.t0, s.t1));
    }
    // |q + v u|^2 <= rho^2 with u = t - t0
    let u0 = -dot(&q, &v) / a;
    let disc = u0 * u0 - c / a;
    if disc < 0.0 {
        return None;
    }
    let w = disc.sqrt();
    let lo = (s.t0 + u0 - w).max(s.t0);
    let hi = (s.t0 + u0 + w).min(s.t1);
    (lo <= hi).then_some((lo, hi))
}
