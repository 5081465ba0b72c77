//! The defect measure `nu`: the family restricted to parameters outside the
//! density-good set.

use std::collections::HashMap;

use fragments::{density_good_set, IntervalUnion};
use grid_measure::{Grid, ScalarGridMeasure};

use crate::disintegrate::{disintegrate_scalar, family_ball_mass};
use crate::error::Result;
use crate::family::{FamilyEntry, FragmentFamily};

/// Good sets keyed by domain, since families often share domains.
#[derive(Default)]
pub struct GoodSetCache {
    eps: f64,
    big_r: f64,
    map: HashMap<Vec<u64>, IntervalUnion>,
}

impl GoodSetCache {
    pub fn new(eps: f64, big_r: f64) -> Self {
        Self { eps, big_r, map: HashMap::new() }
    }

    pub fn good(&mut self, domain: &IntervalUnion) -> Result<IntervalUnion> {
        let key: Vec<u64> = domain.intervals().iter().flat_map(|(a, b)| [a.to_bits(), b.to_bits()]).collect();
        if let Some(g) = self.map.get(&key) {
            return Ok(g.clone());
        }
        let g = density_good_set(domain, self.eps, self.big_r)?;
        self.map.insert(key, g.clone());
        Ok(g)
    }

    pub fn bad(&mut self, domain: &IntervalUnion) -> Result<IntervalUnion> {
        Ok(domain.closure_difference(&self.good(domain)?))
    }
}

/// Entries restricted to the closure of `dom ∖ G(eps, R)`; empty restrictions are dropped.
pub fn defect_family(fam: &FragmentFamily, eps: f64, big_r: f64) -> Result<FragmentFamily> {
    let mut cache = GoodSetCache::new(eps, big_r);
    let mut entries = vec![];
    for e in &fam.entries {
        let bad = cache.bad(e.fragment.domain())?;
        let g = e.fragment.restrict(&bad);
        if !g.is_empty() {
            entries.push(FamilyEntry { weight: e.weight, fragment: g, profile: e.profile.clone() });
        }
    }
    FragmentFamily::new(fam.phi.clone(), entries)
}

pub fn defect_measure(fam: &FragmentFamily, eps: f64, big_r: f64, grid: &Grid) -> Result<ScalarGridMeasure> {
    disintegrate_scalar(&defect_family(fam, eps, big_r)?, grid)
}

/// `nu(B(x, rho))`, exactly.
pub fn defect_ball_mass(fam: &FragmentFamily, eps: f64, big_r: f64, x: &[f64], rho: f64) -> Result<f64> {
    Ok(family_ball_mass(&defect_family(fam, eps, big_r)?, x, rho))
}
