//! Monte Carlo estimates of hitting-length moments by flowing sampled
//! boundary-entering geodesics through the fundamental hexagon.
//!
//! A pants is the double of a right-angled hexagon along its seams, so the
//! geodesic flow is the billiard in the hexagon: crossing a seam reflects the
//! geodesic back into the base copy, reaching a cuff side ends the flow.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geom::{Geodesic, Hexagon, Isometry, Motion, SurfaceModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub seed: u64,
    pub samples: u64,
    /// Flow length after which a sample is capped.
    pub max_length: f64,
    pub surface: SurfaceModel,
}

impl FlowConfig {
    pub fn new(surface: SurfaceModel, samples: u64, seed: u64) -> Result<Self> {
        let c = Self { seed, samples, max_length: 200.0, surface };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return domain("FlowConfig", "samples must be at least 1");
        }
        if !(self.max_length > 0.0) {
            return domain("FlowConfig", format!("max_length must be positive, got {}", self.max_length));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMoments {
    pub samples: u64,
    pub k_values: Vec<u32>,
    /// `M_k ~ 2 Len(dS) mean(L^k)`.
    pub estimates: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub capped_count: u64,
    /// Samples that needed a perturbed restart.
    pub retried_count: u64,
    pub bias_note: Option<String>,
}

/// A boundary-entering geodesic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    /// Oriented into the base hexagon.
    pub geodesic: Geodesic,
    pub point: Complex64,
    /// Arc length along the boundary, cuffs taken in order.
    pub s: f64,
    /// Angle from the boundary tangent, in `(0, pi)`.
    pub theta: f64,
    pub cuff: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOutcome {
    pub length: f64,
    pub capped: bool,
    /// Cuff side reached; `None` when capped.
    pub exit_cuff: Option<usize>,
    pub exit_point: Complex64,
    /// The geodesic in the base hexagon at the exit.
    pub exit_geodesic: Geodesic,
    pub seam_crossings: u64,
    /// Product of the seam reflections applied, renormalized each step.
    pub unfolding: Motion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSample {
    pub length: f64,
    pub capped: bool,
    pub retries: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: u64,
}

const BLOCK: u64 = 1024;
const MAX_RETRIES: u32 = 3;
const MAX_CROSSINGS: u64 = 1_000_000;
/// `|sinh(distance)|` below which a vertex counts as lying on the geodesic.
const VERTEX_TOL: f64 = 1e-12;

fn hexagon(s: &SurfaceModel) -> Result<&Hexagon> {
    if s.cusp_count > 0 {
        return Err(Error::Unsupported("geodesic flow sampling needs compact geodesic boundary (no cusps)".into()));
    }
    s.hexagon.as_ref().ok_or_else(|| Error::Unsupported("surface has no fundamental hexagon".into()))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    Cuff(usize),
    Seam(usize),
}

fn side_vertices(h: &Hexagon, side: Side) -> [Complex64; 2] {
    match side {
        Side::Cuff(k) => h.cuff_vertices(k),
        Side::Seam(k) => h.seam_vertices(k),
    }
}

const SIDES: [Side; 6] = [Side::Cuff(0), Side::Cuff(1), Side::Cuff(2), Side::Seam(0), Side::Seam(1), Side::Seam(2)];

/// Geodesic entering through cuff side `cuff` of the base hexagon at distance
/// `offset` from its first vertex, at angle `theta` from the cuff tangent.
pub fn entering_geodesic_at(s: &SurfaceModel, cuff: usize, offset: f64, theta: f64) -> Result<Entry> {
    let h = hexagon(s)?;
    if cuff > 2 {
        return domain("entering_geodesic_at", format!("cuff index {cuff} out of range"));
    }
    let half = 0.5 * h.cuff_lengths[cuff];
    if !(0.0..=half).contains(&offset) {
        return domain("entering_geodesic_at", format!("offset must lie in [0, {half}], got {offset}"));
    }
    if !(theta > 0.0 && theta < PI) {
        return domain("entering_geodesic_at", format!("theta must lie in (0, pi), got {theta}"));
    }
    let n = Isometry::normalizing(&h.cuffs[cuff]);
    let [va, vb] = h.cuff_vertices(cuff).map(|v| n.apply_point(v).im);
    let y = if vb > va { va * offset.exp() } else { va * (-offset).exp() };
    let sigma = if n.apply_point(h.centroid).re > 0.0 { 1.0 } else { -1.0 };
    let inv = n.inverse();
    let forward = inv.apply(sigma * y / (0.5 * theta).tan());
    let backward = inv.apply(-sigma * y * (0.5 * theta).tan());
    let arc: f64 = h.cuff_lengths[..cuff].iter().sum();
    Ok(Entry {
        geodesic: Geodesic::new(backward, forward)?,
        point: inv.apply_point(Complex64::new(0.0, y)),
        s: arc + offset,
        theta,
        cuff,
    })
}

/// Entry point uniform in boundary arc length, `cos(theta)` uniform on `(-1, 1)`.
///
/// The second half of each cuff belongs to the mirror hexagon; by symmetry it
/// is folded onto the base copy with `theta -> pi - theta`.
pub fn sample_entering_geodesic<R: Rng>(s: &SurfaceModel, rng: &mut R) -> Result<Entry> {
    let h = hexagon(s)?;
    let total: f64 = h.cuff_lengths.iter().sum();
    let arc = rng.gen::<f64>() * total;
    let theta = rng.gen_range(-1.0f64..1.0).acos().clamp(f64::MIN_POSITIVE, PI * (1.0 - f64::EPSILON));
    let mut start = 0.0;
    let mut cuff = 2;
    for (k, l) in h.cuff_lengths.iter().enumerate() {
        if arc < start + l {
            cuff = k;
            break;
        }
        start += l;
    }
    let len = h.cuff_lengths[cuff];
    let o = (arc - start).clamp(0.0, len);
    let mut e = if o <= 0.5 * len {
        entering_geodesic_at(s, cuff, o, theta)?
    } else {
        entering_geodesic_at(s, cuff, len - o, PI - theta)?
    };
    e.s = arc;
    e.theta = theta;
    Ok(e)
}

/// Hitting length of `g` entering at `entry`, a point of a cuff side.
pub fn flow_to_exit(s: &SurfaceModel, g: &Geodesic, entry: Complex64, max_length: f64) -> Result<FlowOutcome> {
    let h = hexagon(s)?;
    let start = (0..3)
        .map(|k| (k, h.cuffs[k].distance_to_point(entry)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .filter(|(_, d)| *d < 1e-9)
        .map(|(k, _)| Side::Cuff(k))
        .ok_or_else(|| Error::Domain { func: "flow_to_exit", msg: "entry point is not on a cuff".into() })?;
    flow(h, *g, entry, start, max_length)
}

fn flow(h: &Hexagon, mut g: Geodesic, mut z: Complex64, mut side: Side, max_length: f64) -> Result<FlowOutcome> {
    let mut length = 0.0;
    let mut crossings = 0u64;
    let mut unfolding = Motion::IDENTITY;
    loop {
        let n = Isometry::normalizing(&g);
        let t0 = n.apply_point(z).im;
        // exit side: the nearest forward crossing of a side segment
        let mut best: Option<(f64, Side)> = None;
        for cand in SIDES {
            if cand == side {
                continue;
            }
            let [a, b] = side_vertices(h, cand).map(|v| n.apply_point(v));
            let (sa, sb) = (a.re / a.im, b.re / b.im);
            let height = if sa.abs() < VERTEX_TOL {
                a.im
            } else if sb.abs() < VERTEX_TOL {
                b.im
            } else if sa * sb < 0.0 {
                let c = (a.norm_sqr() - b.norm_sqr()) / (2.0 * (a.re - b.re));
                (a.norm_sqr() - 2.0 * c * a.re).sqrt()
            } else {
                continue;
            };
            if !(height > t0 * (1.0 + 1e-13)) {
                continue;
            }
            let better = match best {
                None => true,
                Some((hb, sb_)) => {
                    let close = (height - hb).abs() <= 1e-12 * hb;
                    // at a shared vertex the cuff wins: the flow leaves the surface there
                    if close { matches!(cand, Side::Cuff(_)) && matches!(sb_, Side::Seam(_)) } else { height < hb }
                }
            };
            if better {
                best = Some((height, cand));
            }
        }
        let (height, next) = best.ok_or_else(|| Error::Numerical("geodesic leaves the hexagon through no side".into()))?;
        let step = (height / t0).ln();
        if length + step >= max_length {
            return Ok(FlowOutcome {
                length: max_length,
                capped: true,
                exit_cuff: None,
                exit_point: z,
                exit_geodesic: g,
                seam_crossings: crossings,
                unfolding,
            });
        }
        length += step;
        z = n.inverse().apply_point(Complex64::new(0.0, height));
        match next {
            Side::Cuff(k) => {
                return Ok(FlowOutcome {
                    length,
                    capped: false,
                    exit_cuff: Some(k),
                    exit_point: z,
                    exit_geodesic: g,
                    seam_crossings: crossings,
                    unfolding,
                })
            }
            Side::Seam(k) => {
                let r = &h.reflections[k];
                g = r.apply_geodesic(&g);
                unfolding = unfolding.compose(r);
                side = next;
                crossings += 1;
                if crossings > MAX_CROSSINGS {
                    return Err(Error::Numerical("too many seam crossings".into()));
                }
            }
        }
    }
}

fn flow_sample<R: Rng>(s: &SurfaceModel, h: &Hexagon, rng: &mut R, max_length: f64) -> Result<FlowSample> {
    let e = sample_entering_geodesic(s, rng)?;
    let mut last = None;
    for retry in 0..=MAX_RETRIES {
        let entry = if retry == 0 {
            e
        } else {
            // nudge the angle and retry
            let theta = (e.theta + 1e-9 * retry as f64).min(PI - 1e-9);
            let len = h.cuff_lengths[e.cuff];
            let o = e.s - h.cuff_lengths[..e.cuff].iter().sum::<f64>();
            if o <= 0.5 * len {
                entering_geodesic_at(s, e.cuff, o.max(0.0), theta)?
            } else {
                entering_geodesic_at(s, e.cuff, (len - o).max(0.0), PI - theta)?
            }
        };
        match flow(h, entry.geodesic, entry.point, Side::Cuff(entry.cuff), max_length) {
            Ok(out) => return Ok(FlowSample { length: out.length, capped: out.capped, retries: retry }),
            Err(err @ Error::Numerical(_)) => last = Some(err),
            Err(err) => return Err(err),
        }
    }
    Err(last.unwrap_or_else(|| Error::Numerical("flow failed".into())))
}

/// Hitting lengths of `config.samples` sampled geodesics, in a fixed order.
///
/// Block `b` of 1024 samples draws from ChaCha8 stream `b` of the seed, so
/// the output does not depend on the number of worker threads.
pub fn sample_lengths(config: &FlowConfig) -> Result<Vec<FlowSample>> {
    config.validate()?;
    let s = &config.surface;
    let h = hexagon(s)?;
    let blocks = config.samples.div_ceil(BLOCK);
    let parts: Vec<Vec<FlowSample>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(b);
            let n = BLOCK.min(config.samples - b * BLOCK);
            (0..n).map(|_| flow_sample(s, h, &mut rng, config.max_length)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Moments from already drawn samples.
pub fn moments_from_samples(surface: &SurfaceModel, samples: &[FlowSample], k_values: &[u32]) -> Result<EmpiricalMoments> {
    if samples.is_empty() {
        return domain("estimate_moments", "no samples");
    }
    let mass = 2.0 * surface.boundary_length;
    let n = samples.len() as f64;
    let mut estimates = Vec::with_capacity(k_values.len());
    let mut std_errors = Vec::with_capacity(k_values.len());
    for &k in k_values {
        let vals = samples.iter().map(|x| x.length.powi(k as i32));
        let mean = vals.clone().sum::<f64>() / n;
        let var = if samples.len() > 1 { vals.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        estimates.push(mass * mean);
        std_errors.push(mass * (var / n).sqrt());
    }
    let capped_count = samples.iter().filter(|x| x.capped).count() as u64;
    let retried_count = samples.iter().filter(|x| x.retries > 0).count() as u64;
    let bias_note = (capped_count > 0).then(|| {
        format!("{capped_count} capped samples contribute L = max_length, biasing the moments low")
    });
    Ok(EmpiricalMoments {
        samples: samples.len() as u64,
        k_values: k_values.to_vec(),
        estimates,
        std_errors,
        capped_count,
        retried_count,
        bias_note,
    })
}

pub fn estimate_moments(config: &FlowConfig, k_values: &[u32]) -> Result<EmpiricalMoments> {
    let samples = sample_lengths(config)?;
    moments_from_samples(&config.surface, &samples, k_values)
}

/// `A = M_2 / (2 Vol(T_1 S))` with its standard error.
pub fn hitting_time_from_moments(surface: &SurfaceModel, m: &EmpiricalMoments) -> Result<(f64, f64)> {
    let i = m
        .k_values
        .iter()
        .position(|k| *k == 2)
        .ok_or_else(|| Error::Domain { func: "estimate_hitting_time", msg: "moments lack k = 2".into() })?;
    let scale = 2.0 * surface.unit_tangent_volume();
    Ok((m.estimates[i] / scale, m.std_errors[i] / scale))
}

pub fn estimate_hitting_time(config: &FlowConfig) -> Result<(f64, f64)> {
    let m = estimate_moments(config, &[2])?;
    hitting_time_from_moments(&config.surface, &m)
}

/// Equal-width histogram of the sampled lengths on `[0, max L]`.
pub fn histogram(samples: &[FlowSample], bins: usize) -> Vec<HistogramBin> {
    let bins = bins.max(1);
    let top = samples.iter().map(|x| x.length).fold(0.0, f64::max);
    let width = if top > 0.0 { top / bins as f64 } else { 1.0 };
    let mut counts = vec![0u64; bins];
    for x in samples {
        let i = ((x.length / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin { bin_left: i as f64 * width, bin_right: (i + 1) as f64 * width, count })
        .collect()
}

/// Histogram as CSV with columns `bin_left,bin_right,count`.
pub fn write_histogram_csv<W: Write>(bins: &[HistogramBin], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Numerical(format!("csv output failed: {e}"));
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    for b in bins {
        w.serialize(b).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Numerical(format!("csv output failed: {e}")))?;
    Ok(())
}
