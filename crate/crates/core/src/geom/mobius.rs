//! Isometries of the upper half-plane and geodesics given by their endpoints.
//!
//! Points at infinity are extended reals; `f64::INFINITY` stands for the
//! single point `oo` of the projective line (a `-inf` input is folded into it).

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

const DET_TOL: f64 = 1e-12;
const HYPERBOLIC_TOL: f64 = 1e-12;

/// Orientation-preserving isometry `z -> (az + b)/(cz + d)` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Isometry of either orientation, stored as a real matrix with `det = +-1`.
/// A matrix of determinant `-1` acts by `z -> (a conj(z) + b)/(c conj(z) + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Motion {
    pub m: [f64; 4],
}

/// Oriented geodesic from `p` to `q` on the boundary at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    pub p: f64,
    pub q: f64,
}

fn fold_infinity(x: f64) -> f64 {
    if x.is_infinite() {
        f64::INFINITY
    } else {
        x
    }
}

/// Projective action of a real 2x2 matrix on the extended real line.
fn act_real(m: &[f64; 4], x: f64) -> f64 {
    let [a, b, c, d] = *m;
    if x.is_infinite() {
        return if c == 0.0 { f64::INFINITY } else { a / c };
    }
    let den = c * x + d;
    if den == 0.0 {
        f64::INFINITY
    } else {
        (a * x + b) / den
    }
}

fn mat_mul(l: &[f64; 4], r: &[f64; 4]) -> [f64; 4] {
    [
        l[0] * r[0] + l[1] * r[2],
        l[0] * r[1] + l[1] * r[3],
        l[2] * r[0] + l[3] * r[2],
        l[2] * r[1] + l[3] * r[3],
    ]
}

fn rescale(m: [f64; 4]) -> [f64; 4] {
    let det = m[0] * m[3] - m[1] * m[2];
    let s = 1.0 / det.abs().sqrt();
    [m[0] * s, m[1] * s, m[2] * s, m[3] * s]
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// Builds an isometry, rejecting entries with `|det - 1| >= 1e-12`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() >= DET_TOL {
            return domain("Isometry::new", format!("determinant {det} is not 1"));
        }
        Ok(Self { a, b, c, d })
    }

    /// Scales a matrix of positive determinant into `SL(2, R)`.
    pub fn from_matrix(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return domain("Isometry::from_matrix", format!("determinant {det} is not positive"));
        }
        let [a, b, c, d] = rescale([a, b, c, d]);
        Ok(Self { a, b, c, d })
    }

    /// Hyperbolic translation by `s` along `(0, oo)`, towards `oo`.
    pub fn translation(s: f64) -> Self {
        let h = (0.5 * s).exp();
        Self { a: h, b: 0.0, c: 0.0, d: 1.0 / h }
    }

    /// An isometry taking `g` to `(0, oo)` with `g.p -> 0` and `g.q -> oo`.
    pub fn normalizing(g: &Geodesic) -> Self {
        let (p, q) = (g.p, g.q);
        let m = if q.is_infinite() {
            [1.0, -p, 0.0, 1.0]
        } else if p.is_infinite() {
            [0.0, -1.0, 1.0, -q]
        } else if p < q {
            [-1.0, p, 1.0, -q]
        } else {
            [1.0, -p, 1.0, -q]
        };
        let [a, b, c, d] = rescale(m);
        Self { a, b, c, d }
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Representative with the first nonzero entry positive.
    pub fn canonical(&self) -> Self {
        let first = self.entries().into_iter().find(|v| *v != 0.0).unwrap_or(1.0);
        if first < 0.0 {
            Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            *self
        }
    }

    /// `self * other`, renormalized to determinant one.
    pub fn compose(&self, other: &Isometry) -> Self {
        let [a, b, c, d] = rescale(mat_mul(&self.entries(), &other.entries()));
        Self { a, b, c, d }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn apply(&self, x: f64) -> f64 {
        act_real(&self.entries(), x)
    }

    pub fn apply_point(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    pub fn apply_geodesic(&self, g: &Geodesic) -> Geodesic {
        Geodesic { p: self.apply(g.p), q: self.apply(g.q) }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0 + HYPERBOLIC_TOL
    }

    /// `2 arccosh(|tr| / 2)`.
    pub fn translation_length(&self) -> Result<f64> {
        let t = self.trace().abs();
        if t <= 2.0 + HYPERBOLIC_TOL {
            return domain("translation_length", format!("|trace| = {t} is not hyperbolic"));
        }
        Ok(2.0 * (0.5 * t).acosh())
    }

    /// Ordered `(repelling, attracting)` fixed points.
    pub fn axis(&self) -> Result<Geodesic> {
        if !self.is_hyperbolic() {
            return domain("axis", format!("trace {} is not hyperbolic", self.trace()));
        }
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let disc = ((a + d) * (a + d) - 4.0).sqrt();
        let (x1, x2) = if c == 0.0 {
            (f64::INFINITY, b / (d - a))
        } else {
            // roots of c x^2 + (d - a) x - b = 0 without cancellation
            let bb = d - a;
            let qq = -0.5 * (bb + bb.signum() * disc);
            if qq == 0.0 {
                return Err(Error::Numerical("degenerate fixed-point equation".into()));
            }
            (qq / c, -b / qq)
        };
        // attracting where the derivative 1/(cx + d)^2 is below one
        let gain = |x: f64| if x.is_infinite() { (d / a).abs() } else { 1.0 / (c * x + d).powi(2) };
        let (rep, att) = if gain(x1) < gain(x2) { (x2, x1) } else { (x1, x2) };
        Ok(Geodesic { p: rep, q: att })
    }
}

impl Default for Isometry {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl std::ops::Mul for Isometry {
    type Output = Isometry;
    fn mul(self, rhs: Isometry) -> Isometry {
        self.compose(&rhs)
    }
}

impl Motion {
    pub const IDENTITY: Motion = Motion { m: [1.0, 0.0, 0.0, 1.0] };

    pub fn from_matrix(m: [f64; 4]) -> Result<Self> {
        let det = m[0] * m[3] - m[1] * m[2];
        if det == 0.0 || !det.is_finite() {
            return domain("Motion::from_matrix", "singular matrix");
        }
        Ok(Self { m: rescale(m) })
    }

    /// Reflection in the geodesic `g`.
    pub fn reflection(g: &Geodesic) -> Self {
        let (p, q) = (g.p, g.q);
        if p.is_infinite() || q.is_infinite() {
            // vertical line x = t
            let t = if p.is_infinite() { q } else { p };
            return Self { m: [-1.0, 2.0 * t, 0.0, 1.0] };
        }
        let centre = 0.5 * (p + q);
        let r = 0.5 * (q - p).abs();
        Self { m: [centre / r, (r * r - centre * centre) / r, 1.0 / r, -centre / r] }
    }

    pub fn det(&self) -> f64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn preserves_orientation(&self) -> bool {
        self.det() > 0.0
    }

    pub fn compose(&self, other: &Motion) -> Self {
        Self { m: rescale(mat_mul(&self.m, &other.m)) }
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        let det = self.det();
        Self { m: [d / det, -b / det, -c / det, a / det] }
    }

    pub fn apply(&self, x: f64) -> f64 {
        act_real(&self.m, x)
    }

    pub fn apply_point(&self, z: Complex64) -> Complex64 {
        let w = if self.preserves_orientation() { z } else { z.conj() };
        let [a, b, c, d] = self.m;
        (w * a + b) / (w * c + d)
    }

    pub fn apply_geodesic(&self, g: &Geodesic) -> Geodesic {
        Geodesic { p: self.apply(g.p), q: self.apply(g.q) }
    }

    pub fn to_isometry(&self) -> Option<Isometry> {
        if !self.preserves_orientation() {
            return None;
        }
        let [a, b, c, d] = self.m;
        Some(Isometry { a, b, c, d })
    }
}

impl From<Isometry> for Motion {
    fn from(t: Isometry) -> Self {
        Self { m: t.entries() }
    }
}

impl std::ops::Mul for Motion {
    type Output = Motion;
    fn mul(self, rhs: Motion) -> Motion {
        self.compose(&rhs)
    }
}

impl Geodesic {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if p.is_nan() || q.is_nan() {
            return domain("Geodesic::new", "NaN endpoint");
        }
        let (p, q) = (fold_infinity(p), fold_infinity(q));
        if p == q {
            return domain("Geodesic::new", format!("endpoints coincide at {p}"));
        }
        Ok(Self { p, q })
    }

    pub fn reversed(&self) -> Self {
        Self { p: self.q, q: self.p }
    }

    pub fn has_infinite_end(&self) -> bool {
        self.p.is_infinite() || self.q.is_infinite()
    }

    /// Same unoriented geodesic, up to a relative tolerance on the endpoints.
    pub fn same_line(&self, other: &Geodesic, tol: f64) -> bool {
        let eq = |x: f64, y: f64| {
            if x.is_infinite() || y.is_infinite() {
                x.is_infinite() && y.is_infinite() || x.abs().min(y.abs()) > 1.0 / tol
            } else {
                (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
            }
        };
        (eq(self.p, other.p) && eq(self.q, other.q)) || (eq(self.p, other.q) && eq(self.q, other.p))
    }

    /// Cross ratio `(p1-p2)(q1-q2) / ((p1-q2)(q1-p2))`; negative exactly when
    /// the endpoint pairs interleave.
    pub fn cross_ratio(&self, other: &Geodesic) -> f64 {
        let (a, b, c, d) = (self.p, self.q, other.p, other.q);
        (diff(a, c) * diff(b, d)) / (diff(a, d) * diff(b, c))
    }

    pub fn crosses(&self, other: &Geodesic) -> bool {
        self.cross_ratio(other) < 0.0
    }

    /// Point where two crossing geodesics meet.
    pub fn intersection(&self, other: &Geodesic) -> Option<Complex64> {
        if !self.crosses(other) {
            return None;
        }
        let t = Isometry::normalizing(self);
        let g = t.apply_geodesic(other);
        let h = (-g.p * g.q).sqrt();
        Some(t.inverse().apply_point(Complex64::new(0.0, h)))
    }

    /// Hyperbolic distance from a point of the upper half-plane to this geodesic.
    pub fn distance_to_point(&self, z: Complex64) -> f64 {
        let t = Isometry::normalizing(self);
        let w = t.apply_point(z);
        // sinh d = |Re w| / Im w for the line (0, oo)
        (w.re.abs() / w.im).asinh()
    }
}

/// Difference of extended reals with any factor containing `oo` replaced by 1.
fn diff(x: f64, y: f64) -> f64 {
    if x.is_infinite() || y.is_infinite() {
        1.0
    } else {
        x - y
    }
}

/// Length of the common perpendicular of two disjoint, non-asymptotic geodesics.
pub fn geodesic_distance(g1: &Geodesic, g2: &Geodesic) -> Result<f64> {
    let (a, b, c, d) = (g1.p, g1.q, g2.p, g2.q);
    if a == c || a == d || b == c || b == d {
        return domain("geodesic_distance", "geodesics share an endpoint (asymptotic)");
    }
    if g1.crosses(g2) {
        return domain("geodesic_distance", "geodesics cross");
    }
    let num = (diff(a, d) * diff(b, c) + diff(a, c) * diff(b, d)).abs();
    let den = (diff(a, b) * diff(d, c)).abs();
    let ch = num / den;
    if !ch.is_finite() {
        return Err(Error::Numerical("distance overflow".into()));
    }
    Ok(ch.max(1.0).acosh())
}

/// Hyperbolic distance between two points of the upper half-plane.
pub fn point_distance(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm_sqr();
    // acosh(1 + x) = 2 asinh(sqrt(x / 2))
    2.0 * (0.5 * (num / (z.im * w.im)).sqrt()).asinh()
}

/// `a = sech^2(l / 2)`.
pub fn a_of_l(l: f64) -> Result<f64> {
    if !(l > 0.0) || !l.is_finite() {
        return domain("a_of_l", format!("requires finite l > 0, got {l}"));
    }
    let c = (0.5 * l).cosh();
    Ok(1.0 / (c * c))
}

/// Inverse of [`a_of_l`]: `l = 2 atanh(sqrt(1 - a))`.
pub fn l_of_a(a: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return domain("l_of_a", format!("requires 0 < a < 1, got {a}"));
    }
    Ok(2.0 * (1.0 - a).sqrt().atanh())
}

/// Points of the upper half-plane as unit vectors of the hyperboloid model.
pub(crate) fn to_hyperboloid(z: Complex64) -> [f64; 3] {
    let (x, y) = (z.re, z.im);
    let r2 = x * x + y * y;
    [(r2 + 1.0) / (2.0 * y), (r2 - 1.0) / (2.0 * y), x / y]
}

pub(crate) fn from_hyperboloid(v: [f64; 3]) -> Complex64 {
    let y = 1.0 / (v[0] - v[1]);
    Complex64::new(v[2] * y, y)
}

/// Normalized hyperboloid barycentre of a set of points.
pub fn centroid(points: &[Complex64]) -> Complex64 {
    let mut s = [0.0; 3];
    for z in points {
        let v = to_hyperboloid(*z);
        for i in 0..3 {
            s[i] += v[i];
        }
    }
    let norm = (s[0] * s[0] - s[1] * s[1] - s[2] * s[2]).sqrt();
    from_hyperboloid([s[0] / norm, s[1] / norm, s[2] / norm])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn apply_examples() {
        assert_eq!(Isometry::IDENTITY.apply(3.0), 3.0);
        let par = Isometry::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(par.apply(f64::INFINITY).is_infinite());
        let dil = Isometry::new(2.0, 0.0, 0.0, 0.5).unwrap();
        assert_eq!(dil.apply(1.0), 4.0);
        let inv = Isometry::new(0.0, -1.0, 1.0, 0.0).unwrap();
        assert!(inv.apply(0.0).is_infinite());
        assert_eq!(inv.apply(f64::INFINITY), 0.0);
    }

    #[test]
    fn determinant_checked() {
        assert!(Isometry::new(1.0, 1.0, 1.0, 1.0).is_err());
        let t = Isometry::from_matrix(2.0, 1.0, 1.0, 3.0).unwrap();
        assert!((t.det() - 1.0).abs() < 1e-15);
        assert!(Isometry::from_matrix(1.0, 2.0, 3.0, 4.0).is_err());
    }

    #[test]
    fn canonical_sign() {
        let t = Isometry { a: -2.0, b: 0.0, c: 0.0, d: -0.5 };
        assert_eq!(t.canonical().entries(), [2.0, 0.0, 0.0, 0.5]);
        let u = Isometry { a: 0.0, b: -1.0, c: 1.0, d: 0.0 };
        assert_eq!(u.canonical().entries(), [0.0, 1.0, -1.0, 0.0]);
    }

    #[test]
    fn translation_lengths() {
        let s = 1.7;
        assert!((Isometry::translation(s).translation_length().unwrap() - s).abs() < 1e-14);
        let tr = 2.0 * 1.0f64.cosh();
        let w = Isometry::new(tr - 1.0, 1.0, tr - 2.0, 1.0).unwrap();
        assert!((w.translation_length().unwrap() - 2.0).abs() < 1e-12);
        assert!((w.inverse().translation_length().unwrap() - 2.0).abs() < 1e-12);
        assert!(Isometry::new(1.0, 1.0, 0.0, 1.0).unwrap().translation_length().is_err());
        assert!(Isometry::new(0.0, -1.0, 1.0, 0.0).unwrap().translation_length().is_err());
    }

    #[test]
    fn axis_examples() {
        let t = Isometry::new(2.0, 0.0, 0.0, 0.5).unwrap();
        let ax = t.axis().unwrap();
        assert_eq!(ax.p, 0.0);
        assert!(ax.q.is_infinite());
        let shift = Isometry::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let conj = shift * t * shift.inverse();
        let ax = conj.axis().unwrap();
        assert!((ax.p - 1.0).abs() < 1e-14 && ax.q.is_infinite());
        let back = t.inverse().axis().unwrap();
        assert!(back.p.is_infinite() && back.q == 0.0);
        // a generic one: both ends finite and fixed
        let g = Isometry::from_matrix(3.0, 1.0, 2.0, 1.0).unwrap();
        let ax = g.axis().unwrap();
        for x in [ax.p, ax.q] {
            assert!((g.apply(x) - x).abs() < 1e-12);
        }
        // iterating drifts to the attracting end
        let mut x = 0.123;
        for _ in 0..200 {
            x = g.apply(x);
        }
        assert!((x - ax.q).abs() < 1e-10);
    }

    fn numeric_distance(g1: &Geodesic, g2: &Geodesic) -> f64 {
        // golden-section search on each geodesic, parametrized by arclength
        let pt = |g: &Geodesic, s: f64| {
            let t = Isometry::normalizing(g).inverse();
            t.apply_point(Complex64::new(0.0, s.exp()))
        };
        let inner = |z: Complex64| golden(|s| point_distance(z, pt(g2, s)), -40.0, 40.0);
        golden(|s| inner(pt(g1, s)), -40.0, 40.0)
    }

    fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let r = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let x1 = hi - r * (hi - lo);
            let x2 = lo + r * (hi - lo);
            if f(x1) < f(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        f(0.5 * (lo + hi))
    }

    #[test]
    fn distance_examples() {
        let base = Geodesic::new(0.0, f64::INFINITY).unwrap();
        let r: f64 = 1.8;
        let g = Geodesic::new(1.0, r * r).unwrap();
        let d = geodesic_distance(&base, &g).unwrap();
        let want = ((r * r + 1.0) / (r * r - 1.0)).acosh();
        assert!((d - want).abs() < 1e-14);
        assert!((numeric_distance(&base, &g) - want).abs() < 1e-7);
        let scaled = Geodesic::new(3.7, 3.7 * r * r).unwrap();
        assert!((geodesic_distance(&base, &scaled).unwrap() - d).abs() < 1e-14);
        let l: f64 = 0.9;
        let inner = Geodesic::new(-1.0, 1.0).unwrap();
        let outer = Geodesic::new(-l.exp(), l.exp()).unwrap();
        assert!((geodesic_distance(&inner, &outer).unwrap() - l).abs() < 1e-14);
        assert!((numeric_distance(&inner, &outer) - l).abs() < 1e-7);
    }

    #[test]
    fn distance_errors() {
        let base = Geodesic::new(0.0, f64::INFINITY).unwrap();
        assert!(geodesic_distance(&base, &Geodesic::new(-1.0, 1.0).unwrap()).is_err());
        assert!(geodesic_distance(&base, &Geodesic::new(0.0, 1.0).unwrap()).is_err());
        assert!(Geodesic::new(2.0, 2.0).is_err());
        assert!(Geodesic::new(f64::NEG_INFINITY, f64::INFINITY).is_err());
    }

    #[test]
    fn a_and_l() {
        let l = 2.0 * 2f64.sqrt().acosh();
        assert!((a_of_l(l).unwrap() - 0.5).abs() < 1e-15);
        assert!((a_of_l(l_of_a(0.3).unwrap()).unwrap() - 0.3).abs() < 1e-15);
        assert!(a_of_l(1e-6).unwrap() < 1.0 && a_of_l(1e-6).unwrap() > a_of_l(1e-3).unwrap());
        assert!(a_of_l(0.0).is_err());
        assert!(l_of_a(1.0).is_err());
        assert!(l_of_a(0.0).is_err());
    }

    #[test]
    fn reflections() {
        let g = Geodesic::new(-1.0, 3.0).unwrap();
        let r = Motion::reflection(&g);
        assert!((r.det() + 1.0).abs() < 1e-14);
        for x in [g.p, g.q] {
            assert!((r.apply(x) - x).abs() < 1e-14);
        }
        let z = Complex64::new(0.3, 0.4);
        let back = r.apply_point(r.apply_point(z));
        assert!((back - z).norm() < 1e-14);
        // points on the geodesic are fixed
        let on = Complex64::new(1.0, 2.0);
        assert!((r.apply_point(on) - on).norm() < 1e-14);
        let v = Motion::reflection(&Geodesic::new(2.0, f64::INFINITY).unwrap());
        assert!((v.apply_point(Complex64::new(1.0, 1.0)) - Complex64::new(3.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn intersections() {
        let a = Geodesic::new(-1.0, 1.0).unwrap();
        let b = Geodesic::new(0.0, f64::INFINITY).unwrap();
        let z = a.intersection(&b).unwrap();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        assert!(a.intersection(&Geodesic::new(2.0, 3.0).unwrap()).is_none());
        assert!(b.distance_to_point(Complex64::new(0.0, 5.0)).abs() < 1e-15);
    }

    fn hyperbolic_isometry() -> impl Strategy<Value = Isometry> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, 0.2..3.0f64).prop_map(|(p, q, s, k)| {
            let g = Geodesic::new(p, q + if (q - p).abs() < 0.1 { 0.5 } else { 0.0 }).unwrap();
            let n = Isometry::normalizing(&g);
            let shift = Isometry::from_matrix(1.0, s, 0.0, 1.0).unwrap();
            n.inverse() * Isometry::translation(k) * n * shift
        })
    }

    proptest! {
        #[test]
        fn distance_is_invariant(t in hyperbolic_isometry(), p in 0.1..5.0f64, w in 0.1..5.0f64) {
            let g1 = Geodesic::new(-1.0, 1.0).unwrap();
            let g2 = Geodesic::new(1.0 + p, 1.0 + p + w).unwrap();
            let d = geodesic_distance(&g1, &g2).unwrap();
            let d2 = geodesic_distance(&t.apply_geodesic(&g1), &t.apply_geodesic(&g2)).unwrap();
            prop_assert!((d - d2).abs() < 1e-10 * d.max(1.0), "{d} vs {d2}");
        }

        #[test]
        fn normalizing_maps_to_imaginary_axis(p in -5.0..5.0f64, q in -5.0..5.0f64) {
            prop_assume!((p - q).abs() > 1e-3);
            let g = Geodesic::new(p, q).unwrap();
            let n = Isometry::normalizing(&g);
            prop_assert!(n.apply(p).abs() < 1e-12);
            prop_assert!(n.apply(q).is_infinite() || n.apply(q).abs() > 1e12);
            prop_assert!((n.det() - 1.0).abs() < 1e-12);
        }
    }
}
