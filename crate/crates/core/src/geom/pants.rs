//! Concrete surface models: the pair of pants with prescribed cuff lengths
//! (glued from two right-angled hexagons) and the ideal triangle.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mobius::{centroid, geodesic_distance, point_distance, Geodesic, Isometry, Motion};
use crate::error::{domain, Error, Result};

/// JSON description of a surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    Pants { cuffs: [f64; 3] },
    IdealTriangle,
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<SurfaceModel> {
        match self {
            SurfaceSpec::Pants { cuffs } => build_pants(cuffs[0], cuffs[1], cuffs[2]),
            SurfaceSpec::IdealTriangle => Ok(ideal_triangle()),
        }
    }
}

/// Right-angled hexagon with alternate sides of lengths `L_k / 2`.
///
/// Cuff side `k` lies on `cuffs[k]`, seam side `k` (opposite cuff `k`) on
/// `seams[k]`. In the fixed frame `cuffs[0] = (oo, 0)`, `seams[1]` is the unit
/// circle and `seams[2]` the circle of radius `e^(L_1 / 2)`, both centred at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Hexagon {
    pub cuff_lengths: [f64; 3],
    pub cuffs: [Geodesic; 3],
    pub seams: [Geodesic; 3],
    /// Reflections in the seam lines.
    pub reflections: [Motion; 3],
    /// Vertices in cyclic order c1-s3, s3-c2, c2-s1, s1-c3, c3-s2, s2-c1.
    pub vertices: [Complex64; 6],
    pub centroid: Complex64,
    /// Largest distance from the centroid to a vertex.
    pub radius: f64,
}

impl Hexagon {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        for (i, l) in [l1, l2, l3].into_iter().enumerate() {
            if !(l > 0.0) || !l.is_finite() {
                return domain("build_pants", format!("cuff length {} must be positive, got {l}", i + 1));
            }
        }
        let big_r = (0.5 * l1).exp();
        let (c2, c3) = ((0.5 * l2).cosh(), (0.5 * l3).cosh());
        // seam 1 is the circle |z - m| = rho nested inside |z| = R, outside |z| = 1
        let rho = (big_r * big_r - 1.0) / (2.0 * (c3 + big_r * c2));
        let m = (1.0 + rho * rho + 2.0 * rho * c3).sqrt();
        let seams = [
            Geodesic::new(m - rho, m + rho)?,
            Geodesic::new(-1.0, 1.0)?,
            Geodesic::new(-big_r, big_r)?,
        ];
        let reflections = seams.map(|s| Motion::reflection(&s));
        let words = boundary_words_from(&reflections)?;
        let mut cuffs = [seams[0]; 3];
        for (c, w) in cuffs.iter_mut().zip(&words) {
            *c = w.axis()?;
        }
        let meet = |a: &Geodesic, b: &Geodesic| {
            a.intersection(b)
                .ok_or_else(|| Error::InvalidModel("hexagon sides fail to meet".into()))
        };
        let vertices = [
            meet(&cuffs[0], &seams[2])?,
            meet(&seams[2], &cuffs[1])?,
            meet(&cuffs[1], &seams[0])?,
            meet(&seams[0], &cuffs[2])?,
            meet(&cuffs[2], &seams[1])?,
            meet(&seams[1], &cuffs[0])?,
        ];
        let o = centroid(&vertices);
        let radius = vertices.iter().map(|v| point_distance(o, *v)).fold(0.0, f64::max);
        Ok(Self {
            cuff_lengths: [l1, l2, l3],
            cuffs,
            seams,
            reflections,
            vertices,
            centroid: o,
            radius,
        })
    }

    /// The two vertices on cuff side `k`.
    pub fn cuff_vertices(&self, k: usize) -> [Complex64; 2] {
        let v = &self.vertices;
        match k {
            0 => [v[5], v[0]],
            1 => [v[1], v[2]],
            _ => [v[3], v[4]],
        }
    }

    /// The two vertices on seam side `k`.
    pub fn seam_vertices(&self, k: usize) -> [Complex64; 2] {
        let v = &self.vertices;
        match k {
            0 => [v[2], v[3]],
            1 => [v[4], v[5]],
            _ => [v[0], v[1]],
        }
    }

    /// Lengths of the seam sides, measured between the cuff lines.
    pub fn seam_lengths(&self) -> Result<[f64; 3]> {
        let c = &self.cuffs;
        Ok([
            geodesic_distance(&c[1], &c[2])?,
            geodesic_distance(&c[2], &c[0])?,
            geodesic_distance(&c[0], &c[1])?,
        ])
    }
}

/// `r2 r3`, `r3 r1`, `r1 r2` as orientation-preserving isometries.
fn boundary_words_from(r: &[Motion; 3]) -> Result<[Isometry; 3]> {
    let word = |x: &Motion, y: &Motion| {
        x.compose(y)
            .to_isometry()
            .ok_or_else(|| Error::InvalidModel("product of two reflections reverses orientation".into()))
    };
    Ok([word(&r[1], &r[2])?, word(&r[2], &r[0])?, word(&r[0], &r[1])?])
}

/// A hyperbolic surface with totally geodesic boundary, as a group action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SurfaceSpec", try_from = "SurfaceSpec")]
pub struct SurfaceModel {
    pub spec: SurfaceSpec,
    pub generators: Vec<Isometry>,
    pub boundary_words: Vec<Isometry>,
    pub cuff_lengths: Vec<f64>,
    /// Effective Euler characteristic, `Area = 2 pi |chi_eff|`.
    pub chi_eff: f64,
    pub cusp_count: u32,
    pub boundary_length: f64,
    /// Fundamental hexagon of the reflection double cover; pants only.
    pub hexagon: Option<Hexagon>,
}

impl SurfaceModel {
    pub fn abs_chi(&self) -> f64 {
        self.chi_eff.abs()
    }

    pub fn area(&self) -> f64 {
        2.0 * PI * self.abs_chi()
    }

    /// Liouville volume of the unit tangent bundle, `2 pi Area`.
    pub fn unit_tangent_volume(&self) -> f64 {
        2.0 * PI * self.area()
    }
}

impl From<SurfaceModel> for SurfaceSpec {
    fn from(s: SurfaceModel) -> Self {
        s.spec
    }
}

impl TryFrom<SurfaceSpec> for SurfaceModel {
    type Error = Error;
    fn try_from(spec: SurfaceSpec) -> Result<Self> {
        spec.build()
    }
}

/// Pair of pants with cuff lengths `(L1, L2, L3)`.
///
/// Generators are `A = r2 r3` and `B = r3 r1`, products of reflections in the
/// seams of the fundamental hexagon, with `tr A = 2cosh(L1/2)`,
/// `tr B = 2cosh(L2/2)` and `tr AB = -2cosh(L3/2)`.
pub fn build_pants(l1: f64, l2: f64, l3: f64) -> Result<SurfaceModel> {
    let hex = Hexagon::new(l1, l2, l3)?;
    let words = boundary_words_from(&hex.reflections)?;
    let (a, b) = (words[0], words[1]);
    Ok(SurfaceModel {
        spec: SurfaceSpec::Pants { cuffs: [l1, l2, l3] },
        generators: vec![a, b],
        boundary_words: vec![a, b, (a * b).inverse()],
        cuff_lengths: vec![l1, l2, l3],
        chi_eff: -1.0,
        cusp_count: 0,
        boundary_length: l1 + l2 + l3,
        hexagon: Some(hex),
    })
}

/// The ideal triangle: three infinite geodesic sides and three boundary cusps.
pub fn ideal_triangle() -> SurfaceModel {
    SurfaceModel {
        spec: SurfaceSpec::IdealTriangle,
        generators: Vec::new(),
        boundary_words: Vec::new(),
        cuff_lengths: Vec::new(),
        chi_eff: -0.5,
        cusp_count: 3,
        boundary_length: 0.0,
        hexagon: None,
    }
}
