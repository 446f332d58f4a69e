//! Orthospectrum enumeration for pants models.
//!
//! The universal cover is tiled by the images `gH` of the fundamental
//! hexagon under the reflection group `W = <r1, r2, r3>`; reduced words in
//! `W` are in bijection with tiles. For each cuff `i` the base lift is put on
//! `(0, oo)`, and every other boundary lift with a foot in one period window
//! of the cuff translation and distance at most `l_max` is collected. A tile is
//! explored only if it can contain a point within `l_max` of the window, which
//! makes the search complete: the perpendicular from the window to any such
//! lift crosses a gallery of tiles that all pass the same test.

use rayon::prelude::*;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use super::mobius::{point_distance, Geodesic, Isometry, Motion};
use super::pants::{Hexagon, SurfaceModel};
use crate::error::{domain, Error, Result};

/// Ortholengths with multiplicity, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoSpectrum {
    pub lengths: Vec<(f64, u64)>,
    pub l_max: f64,
    pub complete_below_cutoff: bool,
}

impl OrthoSpectrum {
    pub fn empty(l_max: f64) -> Self {
        Self { lengths: Vec::new(), l_max, complete_below_cutoff: true }
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// Number of orthogeodesics counted with multiplicity.
    pub fn count(&self) -> u64 {
        self.lengths.iter().map(|(_, m)| m).sum()
    }

    /// Sum of `mult * f(l)`.
    pub fn sum_by(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.lengths.iter().map(|&(l, m)| m as f64 * f(l)).sum()
    }

    /// The part of the spectrum with `l <= cutoff`.
    pub fn truncate(&self, cutoff: f64) -> Self {
        let cut = cutoff.min(self.l_max);
        Self {
            lengths: self.lengths.iter().copied().filter(|(l, _)| *l <= cut).collect(),
            l_max: cut,
            complete_below_cutoff: self.complete_below_cutoff,
        }
    }
}

impl Serialize for OrthoSpectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.lengths.len()))?;
        for (l, m) in &self.lengths {
            seq.serialize_element(&(l, m))?;
        }
        seq.end()
    }
}

/// Reads `[[l, mult], ...]`; the cutoff becomes the largest length and the
/// completeness flag is not claimed.
impl<'de> Deserialize<'de> for OrthoSpectrum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = OrthoSpectrum;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an array of [length, multiplicity] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<OrthoSpectrum, A::Error> {
                let mut lengths: Vec<(f64, u64)> = Vec::new();
                while let Some((l, m)) = seq.next_element::<(f64, u64)>()? {
                    if !(l > 0.0) || !l.is_finite() || m == 0 {
                        return Err(de::Error::custom(format!("invalid entry [{l}, {m}]")));
                    }
                    lengths.push((l, m));
                }
                lengths.sort_by(|a, b| a.0.total_cmp(&b.0));
                let l_max = lengths.last().map_or(0.0, |e| e.0);
                Ok(OrthoSpectrum { lengths, l_max, complete_below_cutoff: false })
            }
        }
        d.deserialize_seq(V)
    }
}

/// One orthogeodesic class: its length, the (unordered) cuffs it joins and
/// how many distinct orthogeodesics share that length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthoClass {
    pub length: f64,
    pub cuffs: (usize, usize),
    pub multiplicity: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationOptions {
    /// Added to the tile pruning radius; the bound is exact without it.
    pub extra_radius: f64,
    /// Abort instead of exploring more tiles than this per cuff.
    pub max_tiles: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self { extra_radius: 0.5, max_tiles: 20_000_000 }
    }
}

const LENGTH_TOL: f64 = 1e-8;
const FOOT_TOL: f64 = 1e-7;

pub fn enumerate_orthospectrum(s: &SurfaceModel, l_max: f64) -> Result<OrthoSpectrum> {
    enumerate_orthospectrum_with(s, l_max, &EnumerationOptions::default())
}

pub fn enumerate_orthospectrum_with(
    s: &SurfaceModel,
    l_max: f64,
    opts: &EnumerationOptions,
) -> Result<OrthoSpectrum> {
    let classes = enumerate_classes(s, l_max, opts)?;
    let mut lengths: Vec<(f64, u64)> = Vec::new();
    for c in classes {
        match lengths.last_mut() {
            Some(last) if same_length(last.0, c.length) => last.1 += c.multiplicity,
            _ => lengths.push((c.length, c.multiplicity)),
        }
    }
    Ok(OrthoSpectrum { lengths, l_max, complete_below_cutoff: true })
}

/// Orthogeodesics up to `l_max`, grouped by cuff pair and length.
pub fn enumerate_classes(s: &SurfaceModel, l_max: f64, opts: &EnumerationOptions) -> Result<Vec<OrthoClass>> {
    if !(l_max > 0.0) || !l_max.is_finite() {
        return domain("enumerate_orthospectrum", format!("l_max must be positive, got {l_max}"));
    }
    if s.cusp_count > 0 {
        return Err(Error::Unsupported(
            "orthospectrum enumeration for surfaces with boundary cusps".into(),
        ));
    }
    let hex = s
        .hexagon
        .as_ref()
        .ok_or_else(|| Error::Unsupported("surface model without a fundamental hexagon".into()))?;

    let per_base: Vec<Vec<(usize, f64)>> = (0..3)
        .into_par_iter()
        .map(|i| oriented_from_cuff(hex, i, l_max, opts))
        .collect::<Result<_>>()?;

    // every unoriented orthogeodesic is seen once from each end
    let mut by_pair: Vec<((usize, usize), f64)> = Vec::new();
    for (i, found) in per_base.iter().enumerate() {
        for &(k, d) in found {
            by_pair.push(((i.min(k), i.max(k)), d));
        }
    }
    by_pair.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut classes = Vec::new();
    let mut idx = 0;
    while idx < by_pair.len() {
        let (pair, d0) = by_pair[idx];
        let mut end = idx + 1;
        while end < by_pair.len() && by_pair[end].0 == pair && same_length(by_pair[end - 1].1, by_pair[end].1) {
            end += 1;
        }
        let count = (end - idx) as u64;
        if count % 2 != 0 {
            return Err(Error::Numerical(format!(
                "orthogeodesic of length {d0} between cuffs {pair:?} seen an odd number of times"
            )));
        }
        let mean = by_pair[idx..end].iter().map(|e| e.1).sum::<f64>() / count as f64;
        if mean <= l_max {
            classes.push(OrthoClass { length: mean, cuffs: pair, multiplicity: count / 2 });
        }
        idx = end;
    }
    classes.sort_by(|a, b| a.length.total_cmp(&b.length).then(a.cuffs.cmp(&b.cuffs)));
    Ok(classes)
}

fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= LENGTH_TOL * (1.0 + a.abs())
}

/// Oriented orthogeodesics leaving cuff `i`, as `(target cuff, length)`.
fn oriented_from_cuff(hex: &Hexagon, i: usize, l_max: f64, opts: &EnumerationOptions) -> Result<Vec<(usize, f64)>> {
    let period = hex.cuff_lengths[i];
    let frame: Motion = Isometry::normalizing(&hex.cuffs[i]).into();
    let heights = hex.cuff_vertices(i).map(|v| frame.apply_point(v).norm().ln());
    let mid = 0.5 * (heights[0] + heights[1]);
    let lo = mid - 0.5 * period;
    let centre = Complex64::new(0.0, mid.exp());
    let reach = l_max + hex.radius + 0.5 * period + opts.extra_radius;

    // (foot, target, length)
    let mut found: Vec<(f64, usize, f64)> = Vec::new();
    let mut stack: Vec<(Motion, usize)> = vec![(frame, usize::MAX)];
    let mut tiles = 0usize;
    while let Some((g, last)) = stack.pop() {
        tiles += 1;
        if tiles > opts.max_tiles {
            return Err(Error::Numerical(format!(
                "tile budget {} exhausted; lower l_max or raise max_tiles",
                opts.max_tiles
            )));
        }
        if point_distance(centre, g.apply_point(hex.centroid)) > reach {
            continue;
        }
        for (k, cuff) in hex.cuffs.iter().enumerate() {
            let lift = g.apply_geodesic(cuff);
            if is_base(&lift) {
                continue;
            }
            let (p, q) = (lift.p, lift.q);
            if !(p * q > 0.0) || !p.is_finite() || !q.is_finite() {
                return Err(Error::InvalidModel(format!(
                    "boundary lift ({p}, {q}) is not disjoint from the base lift of cuff {}",
                    i + 1
                )));
            }
            let d = ((q + p) / (q - p)).abs().max(1.0).acosh();
            if d > l_max + LENGTH_TOL * (1.0 + l_max) {
                continue;
            }
            // record the lift only from the tile whose cuff side carries the
            // end of the perpendicular; far tiles along the lift are less accurate
            let end_re = 2.0 * p * q / (p + q);
            let [u, v] = hex.cuff_vertices(k).map(|z| g.apply_point(z).re);
            let slack = 1e-6 * (u - v).abs();
            if end_re < u.min(v) - slack || end_re > u.max(v) + slack {
                continue;
            }
            let foot = 0.5 * (p.abs().ln() + q.abs().ln());
            let edge = FOOT_TOL * period.max(1.0);
            if foot < lo - edge || foot >= lo + period + edge {
                continue;
            }
            found.push((lo + (foot - lo).rem_euclid(period), k, d));
        }
        for (a, r) in hex.reflections.iter().enumerate() {
            if a != last {
                stack.push((g.compose(r), a));
            }
        }
    }

    // the same lift is a side of many tiles, and translates by the cuff
    // word share a reduced foot
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let tol = FOOT_TOL * period.max(1.0);
    let mut unique: Vec<(f64, usize, f64)> = Vec::new();
    for f in found {
        let dup = unique
            .iter()
            .rev()
            .take_while(|u| f.0 - u.0 <= tol)
            .any(|u| u.1 == f.1 && same_length(u.2, f.2));
        if !dup {
            unique.push(f);
        }
    }
    if unique.len() > 1 {
        let (first, last) = (unique[0], unique[unique.len() - 1]);
        if first.0 + period - last.0 <= tol && first.1 == last.1 && same_length(first.2, last.2) {
            unique.pop();
        }
    }
    Ok(unique.into_iter().map(|(_, k, d)| (k, d)).collect())
}

/// The base lift `(0, oo)`, recognised by the ratio of its endpoints: any
/// other lift has `min/max = tanh^2(d/2)` for its distance `d` to the base.
fn is_base(g: &Geodesic) -> bool {
    let (x, y) = (g.p.abs(), g.q.abs());
    let ratio = x.min(y) / x.max(y);
    ratio < 1e-12 || ratio.is_nan()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pants::build_pants;

    fn seam(lk: f64, li: f64, lj: f64) -> f64 {
        let (ck, ci, cj) = ((0.5 * lk).cosh(), (0.5 * li).cosh(), (0.5 * lj).cosh());
        ((ck + ci * cj) / ((0.5 * li).sinh() * (0.5 * lj).sinh())).acosh()
    }

    #[test]
    fn empty_below_minimum() {
        let s = build_pants(1.0, 1.0, 1.0).unwrap();
        let spec = enumerate_orthospectrum(&s, 0.5).unwrap();
        assert!(spec.is_empty());
        assert!(spec.complete_below_cutoff);
    }

    #[test]
    fn seams_appear_with_hexagon_lengths() {
        let cuffs = [1.3, 2.1, 0.8];
        let s = build_pants(cuffs[0], cuffs[1], cuffs[2]).unwrap();
        let classes = enumerate_classes(&s, 6.0, &EnumerationOptions::default()).unwrap();
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let want = seam(cuffs[k], cuffs[i], cuffs[j]);
            let pair = (i.min(j), i.max(j));
            let hit = classes.iter().find(|c| c.cuffs == pair && (c.length - want).abs() < 1e-9);
            assert!(hit.is_some(), "missing seam {k} of length {want}: {classes:?}");
            // it is the shortest orthogeodesic between those two cuffs
            let shortest = classes.iter().filter(|c| c.cuffs == pair).map(|c| c.length).fold(f64::INFINITY, f64::min);
            assert!((shortest - want).abs() < 1e-9);
        }
    }

    #[test]
    fn symmetric_pants_multiplicities() {
        let s = build_pants(1.0, 1.0, 1.0).unwrap();
        let full = enumerate_orthospectrum(&s, 6.0).unwrap();
        let d = seam(1.0, 1.0, 1.0);
        let seam_entry = full.lengths.iter().find(|(l, _)| (l - d).abs() < 1e-9).unwrap();
        assert_eq!(seam_entry.1 % 3, 0);
        assert!(full.lengths.iter().all(|(_, m)| m % 3 == 0));
    }

    #[test]
    fn monotone_in_cutoff() {
        let s = build_pants(0.9, 1.4, 2.0).unwrap();
        let small = enumerate_orthospectrum(&s, 4.0).unwrap();
        let big = enumerate_orthospectrum(&s, 6.0).unwrap();
        assert_eq!(big.truncate(4.0).lengths.len(), small.lengths.len());
        for ((l1, m1), (l2, m2)) in small.lengths.iter().zip(big.truncate(4.0).lengths.iter()) {
            assert!((l1 - l2).abs() < 1e-9);
            assert_eq!(m1, m2);
        }
    }

    #[test]
    fn stable_under_larger_search_radius() {
        let s = build_pants(1.0, 2.0, 3.0).unwrap();
        let base = enumerate_orthospectrum(&s, 5.5).unwrap();
        let wide = enumerate_orthospectrum_with(&s, 5.5, &EnumerationOptions { extra_radius: 3.0, ..Default::default() }).unwrap();
        assert_eq!(base.lengths.len(), wide.lengths.len());
        for (x, y) in base.lengths.iter().zip(&wide.lengths) {
            assert!((x.0 - y.0).abs() < 1e-10 && x.1 == y.1, "{x:?} vs {y:?}");
        }
    }

    #[test]
    fn label_permutation_invariance() {
        let a = enumerate_orthospectrum(&build_pants(0.7, 1.9, 2.6).unwrap(), 5.0).unwrap();
        let b = enumerate_orthospectrum(&build_pants(2.6, 0.7, 1.9).unwrap(), 5.0).unwrap();
        let c = enumerate_orthospectrum(&build_pants(1.9, 2.6, 0.7).unwrap(), 5.0).unwrap();
        for other in [&b, &c] {
            assert_eq!(a.lengths.len(), other.lengths.len());
            for (x, y) in a.lengths.iter().zip(other.lengths.iter()) {
                assert!((x.0 - y.0).abs() < 1e-9 && x.1 == y.1);
            }
        }
    }

    // Independent oracle: orbit of the boundary axes under reduced words in
    // the free group <A, B>, reduced by the cuff translation.
    fn brute_force(s: &SurfaceModel, l_max: f64, depth: usize) -> Vec<((usize, usize), f64)> {
        let gens = [s.generators[0], s.generators[0].inverse(), s.generators[1], s.generators[1].inverse()];
        let mut words = vec![(Isometry::IDENTITY, usize::MAX)];
        let mut frontier = words.clone();
        for _ in 0..depth {
            let mut next = Vec::new();
            for (w, last) in &frontier {
                for (x, g) in gens.iter().enumerate() {
                    if *last != usize::MAX && x == (*last ^ 1) {
                        continue;
                    }
                    next.push((*w * *g, x));
                }
            }
            words.extend(next.iter().copied());
            frontier = next;
        }
        let axes: Vec<Geodesic> = s.boundary_words.iter().map(|b| b.axis().unwrap()).collect();
        let mut out = Vec::new();
        for i in 0..3 {
            let n = Isometry::normalizing(&axes[i]);
            let period = s.cuff_lengths[i];
            let mut feet: Vec<(usize, f64, f64)> = Vec::new();
            for (w, _) in &words {
                for j in 0..3 {
                    let lift = (n * *w).apply_geodesic(&axes[j]);
                    if is_base(&lift) {
                        continue;
                    }
                    let (p, q) = (lift.p, lift.q);
                    assert!(p * q > 0.0);
                    let d = ((q + p) / (q - p)).abs().acosh();
                    if d > l_max {
                        continue;
                    }
                    let foot = (0.5 * (p.abs().ln() + q.abs().ln())).rem_euclid(period);
                    let seen = feet.iter().any(|f| {
                        f.0 == j && (f.2 - d).abs() < 1e-5 && {
                            let df = (f.1 - foot).abs();
                            df.min(period - df) < 1e-4
                        }
                    });
                    if !seen {
                        feet.push((j, foot, d));
                    }
                }
            }
            out.extend(feet.into_iter().map(|(j, _, d)| ((i.min(j), i.max(j)), d)));
        }
        out.sort_by(|a, b| a.1.total_cmp(&b.1));
        out
    }

    #[test]
    fn matches_free_group_search() {
        for cuffs in [[1.0, 1.0, 1.0], [1.0, 2.0, 3.0]] {
            let s = build_pants(cuffs[0], cuffs[1], cuffs[2]).unwrap();
            let l_max = 6.5;
            let oracle = brute_force(&s, l_max, 9);
            let classes = enumerate_classes(&s, l_max, &EnumerationOptions::default()).unwrap();
            let total: u64 = classes.iter().map(|c| c.multiplicity).sum();
            assert_eq!(2 * total as usize, oracle.len(), "cuffs {cuffs:?}");
            for c in &classes {
                let hits = oracle.iter().filter(|o| o.0 == c.cuffs && (o.1 - c.length).abs() < 1e-5).count();
                assert_eq!(hits as u64, 2 * c.multiplicity, "{c:?}");
            }
        }
    }

    #[test]
    fn cusped_models_rejected() {
        let t = crate::geom::pants::ideal_triangle();
        assert!(matches!(enumerate_orthospectrum(&t, 3.0), Err(Error::Unsupported(_))));
        let s = build_pants(1.0, 1.0, 1.0).unwrap();
        assert!(enumerate_orthospectrum(&s, -1.0).is_err());
    }

    #[test]
    fn json_shape() {
        let spec = OrthoSpectrum { lengths: vec![(1.5, 2), (2.25, 1)], l_max: 3.0, complete_below_cutoff: true };
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, "[[1.5,2],[2.25,1]]");
        let back: OrthoSpectrum = serde_json::from_str(&text).unwrap();
        assert_eq!(back.lengths, spec.lengths);
        assert!(!back.complete_below_cutoff);
        assert!(serde_json::from_str::<OrthoSpectrum>("[[1.0,0]]").is_err());
    }
}
