//! Push-forward length measure of a fragment in a ball.

use serde::{Deserialize, Serialize};

use crate::error::{FragmentError, Result};
use crate::fragment::{norm, segment_ball_times, sub, Fragment};
use crate::good::density_good_set;
use crate::interval::IntervalUnion;
use crate::map::{cone_membership, ConeClass, ConeSpec, LipschitzMap};

/// `gamma_#(|(phi ∘ gamma)'| H^1)(B(x, rho))`, exact per piece.
pub fn pushforward_ball_mass(g: &Fragment, phi: &LipschitzMap, x: &[f64], rho: f64) -> f64 {
    g.segments()
        .iter()
        .filter(|s| !s.is_point())
        .map(|s| match segment_ball_times(s, x, rho) {
            Some((lo, hi)) => norm(&phi.apply_linear(&s.velocity())) * (hi - lo),
            None => 0.0,
        })
        .sum()
}

/// Good parameters whose image lies in `B(x, rho)`.
pub fn good_points_near(g: &Fragment, x: &[f64], rho: f64, good: &IntervalUnion) -> IntervalUnion {
    g.preimage_ball(x, rho).intersect(good)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallMassReport {
    pub mass: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Mass in `B(x, 3r)` against `2(1 - eps) delta r`, for a cone member whose
/// good point `t0` (at scale `r`) lands in `B(x, 2r)`.
pub fn fragment_ball_mass(
    g: &Fragment,
    phi: &LipschitzMap,
    cone: &ConeSpec,
    x: &[f64],
    r: f64,
    t0: f64,
) -> Result<BallMassReport> {
    if g.is_empty() {
        return Err(FragmentError::Empty);
    }
    if !(r > 0.0) || x.len() != g.dim() {
        return Err(FragmentError::Parameter("need r > 0 and a centre in the fragment's space".into()));
    }
    let member = cone_membership(g, phi, cone)?;
    if member.class != ConeClass::InSpeed {
        return Err(FragmentError::Precondition { name: "cone".into(), detail: format!("{:?}", member) });
    }
    if !density_good_set(g.domain(), cone.eps, r)?.contains(t0) {
        return Err(FragmentError::Precondition { name: "density-good".into(), detail: format!("t0 = {t0}") });
    }
    let d = norm(&sub(&g.eval(t0)?, x));
    if d > 2.0 * r * (1.0 + 1e-9) {
        return Err(FragmentError::Precondition { name: "near-centre".into(), detail: format!("|gamma(t0) - x| = {d}") });
    }
    let mass = pushforward_ball_mass(g, phi, x, 3.0 * r);
    let bound = 2.0 * (1.0 - cone.eps) * cone.delta * r;
    Ok(BallMassReport { mass, bound, holds: mass >= bound * (1.0 - 1e-12) })
}

/// The smallest good parameter with `gamma(t0) ∈ B(x, rho)`.
pub fn first_good_point(g: &Fragment, x: &[f64], rho: f64, good: &IntervalUnion) -> Option<f64> {
    good_points_near(g, x, rho, good).hull().map(|h| h.0)
}
