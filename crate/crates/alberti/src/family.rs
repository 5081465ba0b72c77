//! Finite weighted families of fragments with per-entry density profiles.

use std::io::{BufRead, Write};

use fragments::{CutoffProfile, Fragment, LipschitzMap, Segment};
use serde::{Deserialize, Serialize};

use crate::error::{AlbertiError, Result};

/// The density `f(z, .)` of one entry, as a function of the curve parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensityProfile {
    /// `|(phi ∘ gamma)'|`.
    Speed,
    /// Piecewise linear through `[t, value]` knots spanning `[0, 1]`.
    Linear { knots: Vec<[f64; 2]> },
    /// A cutoff profile `tilde psi`.
    Cutoff { profile: CutoffProfile },
    /// `|d/dt tilde psi|`.
    CutoffSlope { profile: CutoffProfile },
    /// `tilde psi |(phi ∘ gamma)'|`.
    CutoffSpeed { profile: CutoffProfile },
}

impl DensityProfile {
    pub fn linear(knots: Vec<[f64; 2]>) -> Result<Self> {
        let ok = knots.len() >= 2
            && knots[0][0] == 0.0
            && knots[knots.len() - 1][0] == 1.0
            && knots.windows(2).all(|w| w[0][0] < w[1][0])
            && knots.iter().all(|k| k[1].is_finite());
        if !ok {
            return Err(AlbertiError::Parameter("linear profile knots must increase from 0 to 1".into()));
        }
        Ok(DensityProfile::Linear { knots })
    }

    pub fn constant(c: f64) -> Self {
        DensityProfile::Linear { knots: vec![[0.0, c], [1.0, c]] }
    }

    /// A tent rising from `a` to `peak` at `m` and back to zero at `b`.
    pub fn tent(a: f64, m: f64, b: f64, peak: f64) -> Result<Self> {
        let mut k = vec![[0.0, 0.0]];
        for (t, v) in [(a, 0.0), (m, peak), (b, 0.0)] {
            if t > k[k.len() - 1][0] {
                k.push([t, v]);
            }
        }
        k.push([1.0, 0.0]);
        Self::linear(k)
    }

    pub fn eval(&self, t: f64, speed: f64) -> f64 {
        match self {
            DensityProfile::Speed => speed,
            DensityProfile::Linear { knots } => {
                let k = knots.partition_point(|p| p[0] <= t).clamp(1, knots.len() - 1);
                let (a, b) = (knots[k - 1], knots[k]);
                a[1] + (t - a[0]) / (b[0] - a[0]) * (b[1] - a[1])
            }
            DensityProfile::Cutoff { profile } => profile.eval(t),
            DensityProfile::CutoffSlope { .. } => f64::NAN,
            DensityProfile::CutoffSpeed { profile } => profile.eval(t) * speed,
        }
    }

    /// `∫_lo^hi f` for `[lo, hi]` inside one linear piece of the fragment, where
    /// `speed` is `|(phi ∘ gamma)'|` on that piece.
    pub fn integral(&self, lo: f64, hi: f64, speed: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        match self {
            DensityProfile::Speed => speed * (hi - lo),
            DensityProfile::Linear { knots } => knots
                .windows(2)
                .map(|w| {
                    let (a, b) = (w[0][0].max(lo), w[1][0].min(hi));
                    if a >= b {
                        return 0.0;
                    }
                    let f = |t: f64| w[0][1] + (t - w[0][0]) / (w[1][0] - w[0][0]) * (w[1][1] - w[0][1]);
                    0.5 * (b - a) * (f(a) + f(b))
                })
                .sum(),
            DensityProfile::Cutoff { profile } => profile.integral_between(lo, hi),
            DensityProfile::CutoffSlope { profile } => profile.variation_between(lo, hi),
            DensityProfile::CutoffSpeed { profile } => speed * profile.integral_between(lo, hi),
        }
    }

    /// `∫_lo^hi |f'|`; the speed profile has no derivative budget.
    pub fn slope_integral(&self, lo: f64, hi: f64) -> Option<f64> {
        match self {
            DensityProfile::Speed | DensityProfile::CutoffSlope { .. } | DensityProfile::CutoffSpeed { .. } => None,
            DensityProfile::Linear { knots } => Some(
                knots
                    .windows(2)
                    .map(|w| {
                        let (a, b) = (w[0][0].max(lo), w[1][0].min(hi));
                        if a >= b {
                            0.0
                        } else {
                            (w[1][1] - w[0][1]).abs() * (b - a) / (w[1][0] - w[0][0])
                        }
                    })
                    .sum(),
            ),
            DensityProfile::Cutoff { profile } => Some(profile.variation_between(lo, hi)),
        }
    }

    /// Hull of the closed support, when it is known exactly.
    pub fn support(&self) -> Option<Option<(f64, f64)>> {
        match self {
            DensityProfile::Speed | DensityProfile::CutoffSlope { .. } => None,
            DensityProfile::Cutoff { profile } | DensityProfile::CutoffSpeed { profile } => Some(profile.support()),
            DensityProfile::Linear { knots } => {
                let nz: Vec<usize> = (0..knots.len()).filter(|&i| knots[i][1] != 0.0).collect();
                let (Some(&f), Some(&l)) = (nz.first(), nz.last()) else { return Some(None) };
                let lo = if f == 0 { 0.0 } else { knots[f - 1][0] };
                let hi = if l + 1 == knots.len() { 1.0 } else { knots[l + 1][0] };
                Some(Some((lo, hi)))
            }
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            DensityProfile::Linear { knots } => knots.iter().all(|k| k[1] >= 0.0),
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub weight: f64,
    pub fragment: Fragment,
    pub profile: DensityProfile,
}

impl FamilyEntry {
    pub fn new(weight: f64, fragment: Fragment, profile: DensityProfile) -> Result<Self> {
        if !(weight >= 0.0) || !weight.is_finite() {
            return Err(AlbertiError::Parameter(format!("weight {weight} must be finite and nonnegative")));
        }
        Ok(Self { weight, fragment, profile })
    }

    /// `|(phi ∘ gamma)'|` on a piece.
    pub fn speed(&self, phi: &LipschitzMap, s: &Segment) -> f64 {
        phi.apply_linear(&s.velocity()).iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `∫_dom f`.
    pub fn mass(&self, phi: &LipschitzMap) -> f64 {
        self.fragment
            .segments()
            .iter()
            .map(|s| self.profile.integral(s.t0, s.t1, self.speed(phi, s)))
            .sum()
    }
}

/// A finite empirical measure on fragments.
#[derive(Debug, Clone, PartialEq)]
pub struct FragmentFamily {
    pub phi: LipschitzMap,
    pub entries: Vec<FamilyEntry>,
}

impl FragmentFamily {
    pub fn new(phi: LipschitzMap, entries: Vec<FamilyEntry>) -> Result<Self> {
        if let Some(e) = entries.iter().find(|e| e.fragment.dim() != phi.source_dim()) {
            return Err(AlbertiError::Parameter(format!(
                "fragment dimension {} differs from the map source {}",
                e.fragment.dim(),
                phi.source_dim()
            )));
        }
        Ok(Self { phi, entries })
    }

    pub fn empty(phi: LipschitzMap) -> Self {
        Self { phi, entries: vec![] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ w_j ∫ f_j`.
    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|e| e.weight * e.mass(&self.phi)).sum()
    }

    pub fn write_ndjson<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        fragments::write_ndjson(w, &self.entries)
    }

    pub fn read_ndjson<R: BufRead>(r: R, phi: LipschitzMap) -> Result<Self> {
        Self::new(phi, fragments::read_ndjson(r)?)
    }
}

/// Parameters of the defect measure; `R0 = delta R / 5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectParams {
    pub eps: f64,
    pub big_r: f64,
    pub delta: f64,
}

impl DefectParams {
    pub fn new(eps: f64, big_r: f64, delta: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 0.5) || !(big_r > 0.0) || !(delta > 0.0 && delta <= 1.0) {
            return Err(AlbertiError::Parameter(format!("need 0 < eps < 1/2, R > 0, 0 < delta <= 1; got {eps}, {big_r}, {delta}")));
        }
        Ok(Self { eps, big_r, delta })
    }

    pub fn r0(&self) -> f64 {
        self.delta * self.big_r / 5.0
    }
}
