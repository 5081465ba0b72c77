//! Localized estimates for a family in a cone `Γ(phi, e, eps, delta)` around a
//! cutoff `psi` at `x` of radius `r`.

use fragments::{
    cone_membership, extend_curve, extend_cutoff, good_points_near, pushforward_ball_mass, ConeClass, ConeSpec,
    CutoffProfile, CutoffSpec, LipschitzMap, ProfilePiece,
};
use serde::Serialize;

use crate::defect::GoodSetCache;
use crate::error::{AlbertiError, Result};
use crate::family::{DensityProfile, FamilyEntry, FragmentFamily};

/// Constant of the difference estimate used by the proof.
pub const DIFFERENCE_CONSTANT: f64 = 48.0;
/// The constant as printed in the statement.
pub const STATED_DIFFERENCE_CONSTANT: f64 = 32.0;
pub const VARIATION_CONSTANT: f64 = 12.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizedReport {
    pub radius: f64,
    /// Curvewise upper bound of `‖e phi#(psi mu) - F(tilde psi D bar gamma, bar gamma, P)‖`.
    pub lhs1: f64,
    /// `48 eps / delta^2 mu(B(x, 3r)) + 2 nu(B(x, 2r))`.
    pub rhs1: f64,
    /// The same with 32 in place of 48.
    pub rhs1_stated: f64,
    /// `r ‖F(|d_t tilde psi|, bar gamma, P)‖`.
    pub lhs2: f64,
    /// `12 / delta^2 mu(B(x, 3r))`.
    pub rhs2: f64,
    pub mu_3r: f64,
    pub nu_2r: f64,
    pub holds1: bool,
    pub holds2: bool,
    /// Every `tilde psi` is supported compactly inside `(0, 1)`.
    pub support_inside: bool,
    /// Entries whose good points miss `B(x, 2r)`, so `tilde psi = 0`.
    pub zeroed: usize,
}

/// `tilde psi` for one entry: the extension of `psi ∘ gamma`, or zero when no
/// good point of `gamma` lands in `B(x, 2r)`.
fn cutoff_for(e: &FamilyEntry, cut: &CutoffSpec, good: &fragments::IntervalUnion) -> Result<Option<CutoffProfile>> {
    if good_points_near(&e.fragment, &cut.center, 2.0 * cut.radius, good).is_empty() {
        return Ok(None);
    }
    Ok(Some(extend_cutoff(&e.fragment, cut)?))
}

fn check_parameters(fam: &FragmentFamily, cut: &CutoffSpec, e: &[f64], eps: f64, delta: f64, big_r: f64) -> Result<ConeSpec> {
    if !(eps > 0.0 && eps < 0.5) || !(delta > 0.0 && delta < 0.5) || !(big_r > 0.0) {
        return Err(AlbertiError::Parameter(format!("need 0 < eps, delta < 1/2 and R > 0; got {eps}, {delta}, {big_r}")));
    }
    let r = cut.radius;
    if !(r < delta * big_r / 24.0) {
        return Err(AlbertiError::Precondition {
            name: "radius".into(),
            detail: format!("r = {r} must be below delta R / 24 = {}", delta * big_r / 24.0),
        });
    }
    if cut.center.len() != fam.phi.source_dim() {
        return Err(AlbertiError::Parameter("cutoff centre and fragments differ in dimension".into()));
    }
    if let Some(j) = fam.entries.iter().position(|e| e.profile != DensityProfile::Speed) {
        return Err(AlbertiError::Parameter(format!("entry {j}: localized estimates need speed profiles")));
    }
    let cone = ConeSpec::new(e.to_vec(), eps, delta)?;
    for (j, en) in fam.entries.iter().enumerate() {
        if en.fragment.is_empty() {
            continue;
        }
        let m = cone_membership(&en.fragment, &fam.phi, &cone)?;
        if m.class != ConeClass::InSpeed {
            let (t1, t2) = m.witness.unwrap_or((f64::NAN, f64::NAN));
            return Err(AlbertiError::Cone { index: j, t1, t2 });
        }
    }
    Ok(cone)
}

pub fn localized_estimates(
    fam: &FragmentFamily,
    cut: &CutoffSpec,
    e: &[f64],
    eps: f64,
    delta: f64,
    big_r: f64,
) -> Result<LocalizedReport> {
    let cone = check_parameters(fam, cut, e, eps, delta, big_r)?;
    let e = cone.direction();
    let (x, r) = (&cut.center, cut.radius);
    let mut cache = GoodSetCache::new(eps, big_r);
    let (mut lhs1, mut lhs2, mut mu_3r, mut nu_2r) = (0.0, 0.0, 0.0, 0.0);
    let mut support_inside = true;
    let mut zeroed = 0;
    for en in fam.entries.iter().filter(|en| !en.fragment.is_empty() && en.weight > 0.0) {
        let w = en.weight;
        let g = &en.fragment;
        let good = cache.good(g.domain())?;
        mu_3r += w * pushforward_ball_mass(g, &fam.phi, x, 3.0 * r);
        let bad = g.restrict(&g.domain().closure_difference(&good));
        if !bad.is_empty() {
            nu_2r += w * pushforward_ball_mass(&bad, &fam.phi, x, 2.0 * r);
        }
        let curve = extend_curve(g, &fam.phi, e)?;
        let profile = cutoff_for(en, cut, &good)?;
        let psi = match &profile {
            Some(p) => p.clone(),
            None => {
                zeroed += 1;
                extend_cutoff(g, cut)?
            }
        };
        for piece in &psi.pieces {
            let (t0, t1) = piece.span();
            if t1 <= t0 {
                continue;
            }
            let v = curve.velocity(0.5 * (t0 + t1));
            let speed = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            let coef = match (piece, profile.is_some()) {
                (ProfilePiece::Radial { .. }, true) => {
                    v.iter().zip(e).map(|(vi, ei)| (speed * ei - vi).powi(2)).sum::<f64>().sqrt()
                }
                (ProfilePiece::Radial { .. }, false) => speed,
                (ProfilePiece::Linear { .. }, true) => speed,
                (ProfilePiece::Linear { .. }, false) => 0.0,
            };
            lhs1 += w * coef * piece.integral();
        }
        if let Some(p) = &profile {
            lhs2 += w * r * p.total_variation();
            match p.support() {
                Some((lo, hi)) if lo <= 0.0 || hi >= 1.0 => support_inside = false,
                _ => {}
            }
        }
    }
    let d2 = delta * delta;
    let rhs1 = DIFFERENCE_CONSTANT * eps / d2 * mu_3r + 2.0 * nu_2r;
    let rhs1_stated = STATED_DIFFERENCE_CONSTANT * eps / d2 * mu_3r + 2.0 * nu_2r;
    let rhs2 = VARIATION_CONSTANT / d2 * mu_3r;
    let slack = |a: f64, b: f64| a <= b * (1.0 + 1e-9) + 1e-12;
    Ok(LocalizedReport {
        radius: r,
        lhs1,
        rhs1,
        rhs1_stated,
        lhs2,
        rhs2,
        mu_3r,
        nu_2r,
        holds1: slack(lhs1, rhs1),
        holds2: slack(lhs2, rhs2),
        support_inside,
        zeroed,
    })
}

/// The families `F(tilde psi D bar gamma, bar gamma, P)` and `F(|d_t tilde psi|, bar gamma, P)`
/// as fragment families of full curves in the target space.
pub fn extended_families(
    fam: &FragmentFamily,
    cut: &CutoffSpec,
    e: &[f64],
    eps: f64,
    delta: f64,
    big_r: f64,
) -> Result<(FragmentFamily, FragmentFamily)> {
    let cone = check_parameters(fam, cut, e, eps, delta, big_r)?;
    let mut cache = GoodSetCache::new(eps, big_r);
    let id = LipschitzMap::identity(fam.phi.target_dim());
    let (mut field, mut slope) = (vec![], vec![]);
    for en in fam.entries.iter().filter(|en| !en.fragment.is_empty() && en.weight > 0.0) {
        let good = cache.good(en.fragment.domain())?;
        let Some(p) = cutoff_for(en, cut, &good)? else { continue };
        let curve = extend_curve(&en.fragment, &fam.phi, cone.direction())?.to_fragment();
        field.push(FamilyEntry::new(en.weight, curve.clone(), DensityProfile::Cutoff { profile: p.clone() })?);
        slope.push(FamilyEntry::new(en.weight, curve, DensityProfile::CutoffSlope { profile: p })?);
    }
    Ok((FragmentFamily::new(id.clone(), field)?, FragmentFamily::new(id, slope)?))
}
