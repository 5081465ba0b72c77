//! Finite unions of closed intervals in `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{FragmentError, Result};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct IntervalUnion {
    iv: Vec<(f64, f64)>,
}

impl TryFrom<Vec<[f64; 2]>> for IntervalUnion {
    type Error = FragmentError;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        IntervalUnion::new(v.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<IntervalUnion> for Vec<[f64; 2]> {
    fn from(u: IntervalUnion) -> Self {
        u.iv.into_iter().map(|(a, b)| [a, b]).collect()
    }
}

impl IntervalUnion {
    /// Sorts and merges; overlapping or touching intervals are joined.
    pub fn new(mut iv: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &iv {
            if !(a.is_finite() && b.is_finite()) || a > b || a < 0.0 || b > 1.0 {
                return Err(FragmentError::Parameter(format!("[{a}, {b}] is not a closed interval in [0, 1]")));
            }
        }
        iv.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
        for (a, b) in iv {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Ok(Self { iv: out })
    }

    pub fn empty() -> Self {
        Self { iv: vec![] }
    }

    pub fn full() -> Self {
        Self { iv: vec![(0.0, 1.0)] }
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b)])
    }

    pub fn point(t: f64) -> Result<Self> {
        Self::new(vec![(t, t)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.iv
    }

    pub fn is_empty(&self) -> bool {
        self.iv.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.iv.iter().map(|(a, b)| b - a).sum()
    }

    /// `H^1([lo, hi] ∩ K)`.
    pub fn measure_in(&self, lo: f64, hi: f64) -> f64 {
        self.iv.iter().map(|&(a, b)| (b.min(hi) - a.max(lo)).max(0.0)).sum()
    }

    pub fn hull(&self) -> Option<(f64, f64)> {
        Some((self.iv.first()?.0, self.iv.last()?.1))
    }

    pub fn contains(&self, t: f64) -> bool {
        self.find(t).is_some()
    }

    /// Index of the interval containing `t`.
    pub fn find(&self, t: f64) -> Option<usize> {
        let k = self.iv.partition_point(|iv| iv.1 < t);
        (k < self.iv.len() && self.iv[k].0 <= t).then_some(k)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = vec![];
        while i < self.iv.len() && j < other.iv.len() {
            let (a, b) = self.iv[i];
            let (c, d) = other.iv[j];
            let lo = a.max(c);
            let hi = b.min(d);
            if lo <= hi {
                out.push((lo, hi));
            }
            if b < d {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::new(out).expect("intersection of valid unions")
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(self.iv.iter().chain(&other.iv).copied().collect()).expect("union of valid unions")
    }

    /// Closure of `self \\ other`.
    pub fn closure_difference(&self, other: &Self) -> Self {
        let mut comp = vec![];
        let mut prev = 0.0;
        for &(a, b) in &other.iv {
            if a > prev {
                comp.push((prev, a));
            }
            prev = b;
        }
        if prev < 1.0 || other.iv.is_empty() {
            comp.push((prev, 1.0));
        }
        let comp = Self::new(comp).expect("complement pieces lie in [0, 1]");
        // touching points are not part of the closure unless isolated in `self`
        let out = self.intersect(&comp).iv.into_iter().filter(|(a, b)| b > a || !other.contains(*a)).collect();
        Self::new(out).expect("sub-intervals of self")
    }

    /// Open gaps between consecutive intervals.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        self.iv.windows(2).map(|w| (w[0].1, w[1].0)).collect()
    }

    /// All interval endpoints, ascending, without repetition.
    pub fn endpoints(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.iv.iter().flat_map(|&(a, b)| [a, b]).collect();
        e.dedup();
        e
    }

    /// Distance from `t` to the set.
    pub fn distance(&self, t: f64) -> f64 {
        let k = self.iv.partition_point(|iv| iv.1 < t);
        let mut best = f64::INFINITY;
        if k < self.iv.len() {
            best = (self.iv[k].0 - t).max(0.0);
        }
        if k > 0 {
            best = best.min(t - self.iv[k - 1].1);
        }
        best
    }
}
