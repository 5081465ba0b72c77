//! Corpus generators: weighted line families in the unit square, their grid
//! realizations and point samplers.

use alberti::{disintegrate_scalar, disintegrate_vector, DensityProfile, FamilyEntry, FragmentFamily};
use density_analyzer::DirectedFamily;
use fragments::{Fragment, IntervalUnion, LipschitzMap};
use grid_measure::{Grid, MatrixGridMeasure, ScalarGridMeasure};
use rand::Rng;

use crate::error::{GmtError, Result};
use crate::scenario::{Generator, Points, Tensor};

/// Middle-half Cantor intervals of generation `g` in `[0, 1]`.
pub fn cantor_intervals(g: usize) -> Vec<(f64, f64)> {
    let mut iv = vec![(0.0, 1.0)];
    for _ in 0..g {
        iv = iv
            .iter()
            .flat_map(|&(a, b)| {
                let q = (b - a) / 4.0;
                [(a, a + q), (b - q, b)]
            })
            .collect();
    }
    iv
}

/// Step `k` removes the centred open interval of length `4^-k` from each piece.
pub fn fat_cantor_intervals(g: usize) -> Vec<(f64, f64)> {
    let mut iv = vec![(0.0, 1.0)];
    for k in 1..=g {
        let gap = 0.25f64.powi(k as i32);
        iv = iv
            .iter()
            .flat_map(|&(a, b)| {
                let m = (a + b) / 2.0;
                [(a, m - gap / 2.0), (m + gap / 2.0, b)]
            })
            .collect();
    }
    iv
}

/// Axis line at offset `c` over the parameters in `domain`; `axis` is its direction.
fn axis_line(axis: usize, c: f64, domain: &IntervalUnion) -> Result<Fragment> {
    let (p, q) = if axis == 0 { (vec![0.0, c], vec![1.0, c]) } else { (vec![c, 0.0], vec![c, 1.0]) };
    Ok(Fragment::segment(0.0, 1.0, p, q)?.restrict(domain))
}

fn family(entries: Vec<FamilyEntry>) -> Result<FragmentFamily> {
    Ok(FragmentFamily::new(LipschitzMap::identity(2), entries)?)
}

fn directed(h: FragmentFamily, v: FragmentFamily) -> Vec<DirectedFamily> {
    vec![DirectedFamily::new(h, vec![1.0, 0.0]), DirectedFamily::new(v, vec![0.0, 1.0])]
}

/// Lines at `(k + 1/2) / lines`, weight `1 / lines`, with a per-line domain.
fn fubini(lines: usize, domain: impl Fn(usize, f64) -> Result<IntervalUnion>) -> Result<[FragmentFamily; 2]> {
    let s = 1.0 / lines as f64;
    let build = |axis: usize| -> Result<FragmentFamily> {
        let mut entries = Vec::with_capacity(lines);
        for k in 0..lines {
            let c = (k as f64 + 0.5) * s;
            let dom = domain(axis, c)?;
            if dom.is_empty() {
                continue;
            }
            entries.push(FamilyEntry::new(s, axis_line(axis, c, &dom)?, DensityProfile::Speed)?);
        }
        family(entries)
    };
    Ok([build(0)?, build(1)?])
}

/// Parameters `t` with `inner <= |(t, c) - center| <= outer` for a line along `axis`.
fn annulus_chord(center: &[f64; 2], inner: f64, outer: f64, axis: usize, c: f64) -> Result<IntervalUnion> {
    let (along, across) = if axis == 0 { (center[0], center[1]) } else { (center[1], center[0]) };
    let dy = c - across;
    if dy.abs() >= outer {
        return Ok(IntervalUnion::empty());
    }
    let wo = (outer * outer - dy * dy).sqrt();
    let iv = if dy.abs() < inner {
        let wi = (inner * inner - dy * dy).sqrt();
        vec![(along - wo, along - wi), (along + wi, along + wo)]
    } else {
        vec![(along - wo, along + wo)]
    };
    let clipped = iv.into_iter().map(|(a, b)| (a.max(0.0), b.min(1.0))).filter(|(a, b)| a < b).collect();
    Ok(IntervalUnion::new(clipped)?)
}

/// One family per coordinate direction.
pub fn families(gen: &Generator) -> Result<Vec<DirectedFamily>> {
    gen.validate()?;
    let full = IntervalUnion::full();
    match gen {
        Generator::SquareFubini { lines } => {
            let [h, v] = fubini(*lines, |_, _| Ok(full.clone()))?;
            Ok(directed(h, v))
        }
        Generator::FourCornerCantor { generation, per_square } => {
            let iv = cantor_intervals(*generation);
            let domain = IntervalUnion::new(iv.clone())?;
            let s = (iv[0].1 - iv[0].0) / *per_square as f64;
            let build = |axis: usize| -> Result<FragmentFamily> {
                let mut entries = vec![];
                for &(a, _) in &iv {
                    for k in 0..*per_square {
                        let c = a + (k as f64 + 0.5) * s;
                        entries.push(FamilyEntry::new(s, axis_line(axis, c, &domain)?, DensityProfile::Speed)?);
                    }
                }
                family(entries)
            };
            Ok(directed(build(0)?, build(1)?))
        }
        Generator::CantorFragments { generation, lines } => {
            let domain = IntervalUnion::new(fat_cantor_intervals(*generation))?;
            let [h, v] = fubini(*lines, |_, _| Ok(domain.clone()))?;
            Ok(directed(h, v))
        }
        Generator::LineMeasure { from, to } => {
            let d = [to[0] - from[0], to[1] - from[1]];
            let len = d[0].hypot(d[1]);
            let seg = Fragment::segment(0.0, len, from.to_vec(), to.to_vec())?;
            let line = family(vec![FamilyEntry::new(1.0, seg, DensityProfile::Speed)?])?;
            let across = FragmentFamily::empty(LipschitzMap::identity(2));
            Ok(vec![
                DirectedFamily::new(line, vec![d[0] / len, d[1] / len]),
                DirectedFamily::new(across, vec![-d[1] / len, d[0] / len]),
            ])
        }
        Generator::Annulus { center, inner, outer, lines } => {
            let [h, v] = fubini(*lines, |axis, c| annulus_chord(center, *inner, *outer, axis, c))?;
            Ok(directed(h, v))
        }
        Generator::Mixture { lines, line_y, line_weight } => {
            let [mut h, v] = fubini(*lines, |_, _| Ok(full.clone()))?;
            // the reference measure is the mean of the two families
            let extra = FamilyEntry::new(2.0 * line_weight, axis_line(0, *line_y, &full)?, DensityProfile::Speed)?;
            let mut entries = h.entries;
            entries.push(extra);
            h = family(entries)?;
            Ok(directed(h, v))
        }
    }
}

/// `mu` as the mean of the families' arc-length measures, and `T`.
pub fn realize(fams: &[DirectedFamily], grid: &Grid, tensor: Tensor) -> Result<(ScalarGridMeasure, MatrixGridMeasure)> {
    let n = grid.dim();
    let mut mu = ScalarGridMeasure::zeros(grid.clone());
    for f in fams {
        mu = mu.add(&disintegrate_scalar(&f.family, grid)?)?;
    }
    let mu = mu.scaled(1.0 / fams.len() as f64)?;
    let t = match tensor {
        Tensor::Identity => {
            let id: Vec<f64> = (0..n * n).map(|k| if k / n == k % n { 1.0 } else { 0.0 }).collect();
            MatrixGridMeasure::from_scalar(&mu, &id)
        }
        Tensor::Families => {
            let rows = fams.iter().map(|f| disintegrate_vector(&f.family, grid)).collect::<alberti::Result<Vec<_>>>()?;
            MatrixGridMeasure::from_rows(&rows)?
        }
    };
    Ok((mu, t))
}

/// A point of the reference measure: an entry chosen by mass, then a uniform
/// parameter in its domain. Entries are unit speed.
fn support_point(fams: &[DirectedFamily], cumulative: &[(f64, usize, usize)], rng: &mut impl Rng) -> Result<Vec<f64>> {
    let total = cumulative.last().map(|c| c.0).unwrap_or(0.0);
    let u = rng.gen_range(0.0..total);
    let k = cumulative.partition_point(|c| c.0 <= u).min(cumulative.len() - 1);
    let (_, fi, ei) = cumulative[k];
    let frag = &fams[fi].family.entries[ei].fragment;
    let dom = frag.domain();
    let mut s = rng.gen_range(0.0..dom.measure());
    for &(a, b) in dom.intervals() {
        if s <= b - a {
            return Ok(frag.eval(a + s)?);
        }
        s -= b - a;
    }
    let (_, b) = dom.hull().expect("nonempty domain");
    Ok(frag.eval(b)?)
}

pub fn sample_points(fams: &[DirectedFamily], points: &Points, rng: &mut impl Rng) -> Result<Vec<Vec<f64>>> {
    match points {
        Points::Explicit { points } => Ok(points.clone()),
        Points::Box { count, lo, hi } => Ok((0..*count)
            .map(|_| lo.iter().zip(hi).map(|(a, b)| if a < b { rng.gen_range(*a..*b) } else { *a }).collect())
            .collect()),
        Points::Support { count } => {
            let mut cumulative = vec![];
            let mut acc = 0.0;
            for (fi, f) in fams.iter().enumerate() {
                for (ei, e) in f.family.entries.iter().enumerate() {
                    let m = e.weight * e.fragment.domain().measure();
                    if m > 0.0 {
                        acc += m;
                        cumulative.push((acc, fi, ei));
                    }
                }
            }
            if cumulative.is_empty() {
                return Err(GmtError::Scenario("support sampling needs a family of positive mass".into()));
            }
            (0..*count).map(|_| support_point(fams, &cumulative, rng)).collect()
        }
    }
}
