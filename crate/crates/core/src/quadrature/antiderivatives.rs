//! Numerical confirmation of the closed-form antiderivatives used to reduce
//! the second moment kernel to polylogarithms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{integrate_with_gaps, QuadratureSpec};
use crate::error::Result;
use crate::specfun::{li2, li3, ZETA2, ZETA3};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AntiderivativeCheck {
    pub name: &'static str,
    pub points: usize,
    /// Largest `|d/dx closed form - integrand| / max(1, |integrand|)`.
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

const POINTS: usize = 100;
const TOL: f64 = 1e-9;
const SEED: u64 = 0x5eed_0004;

type Antiderivative = fn(f64, f64) -> Result<f64>;
type Integrand = fn(f64, f64) -> f64;
/// Integrand on `(0, a)` given `x` and `a - x` separately.
type GapIntegrand = fn(f64, f64) -> f64;

fn log_over_linear(x: f64, a: f64) -> Result<f64> {
    Ok(x.ln() * (-x / a).ln_1p() + li2(x / a)?)
}

fn log_sq_over_linear(x: f64, a: f64) -> Result<f64> {
    let lx = x.ln();
    Ok(lx * lx * (-x / a).ln_1p() + 2.0 * lx * li2(x / a)? - 2.0 * li3(x / a)?)
}

fn log_log_over_x(x: f64, a: f64) -> Result<f64> {
    let lx = x.ln();
    Ok(0.5 * lx * lx * a.ln() - lx * li2(x / a)? + li3(x / a)?)
}

/// `int log(a - x) log(1 - x) / x dx` for `0 < x < a < 1`.
pub fn g_antiderivative(x: f64, a: f64) -> Result<f64> {
    let l1x = (-x).ln_1p();
    let r1 = (a - x) / a;
    let r2 = (a - x) / (1.0 - x);
    let r3 = (a - x) / (a * (1.0 - x));
    Ok(l1x * r1.ln() * (x / a).ln() + a.ln() * l1x * x.ln() + 0.5 * a.ln() * l1x * l1x
        + (a * (1.0 - x)).ln() * li2(1.0 - x)?
        + r1.ln() * li2(r1)?
        + r3.ln() * (li2(r2)? - li2(r3)?)
        - li3(1.0 - x)?
        - li3(r2)?
        - li3(r1)?
        + li3(r3)?)
}

/// `int log(a - x) log(x) / (1 - x) dx` for `0 < x < a < 1`.
pub fn h_antiderivative(x: f64, a: f64) -> Result<f64> {
    let b = 1.0 - a;
    let lx = x.ln();
    let s1 = (x - a) / b;
    let s2 = (x - a) / x;
    let s3 = (x - a) / (b * x);
    Ok(-lx * ((a - x) / b).ln() * ((1.0 - x) / b).ln() - b.ln() * (-x).ln_1p() * lx - 0.5 * b.ln() * lx * lx
        - (b * x).ln() * li2(x)?
        - ((a - x) / b).ln() * li2(s1)?
        - ((a - x) / (b * x)).ln() * (li2(s2)? - li2(s3)?)
        + li3(x)?
        + li3(s2)?
        + li3(s1)?
        - li3(s3)?)
}

/// `int_0^a log(a - x) log(1 - x) / x dx`.
pub fn g_definite(a: f64) -> Result<f64> {
    let (la, lb) = (a.ln(), (-a).ln_1p());
    Ok(ZETA3 - ZETA2 * la + 0.5 * la * lb * lb + lb * la * la + (la + lb) * li2(1.0 - a)? + li3(a)? - li3(1.0 - a)?)
}

/// `int_0^a log(a - x) log(x) / (1 - x) dx`.
pub fn h_definite(a: f64) -> Result<f64> {
    let (la, lb) = (a.ln(), (-a).ln_1p());
    let m = -a / (1.0 - a);
    Ok(ZETA2 * lb - lb.powi(3) / 3.0 - lb * la * la - (la + lb) * li2(a)? + (la - lb) * li2(m)? + li3(a)? - li3(m)?)
}

/// Five-point central difference.
fn derivative(f: Antiderivative, x: f64, a: f64, h: f64) -> Result<f64> {
    let v = |t: f64| f(x + t, a);
    Ok((v(-2.0 * h)? - 8.0 * v(-h)? + 8.0 * v(h)? - v(2.0 * h)?) / (12.0 * h))
}

fn check(
    name: &'static str,
    f: Antiderivative,
    g: Integrand,
    sample: impl Fn(&mut ChaCha8Rng) -> (f64, f64),
    rng: &mut ChaCha8Rng,
) -> Result<AntiderivativeCheck> {
    let mut worst: f64 = 0.0;
    for _ in 0..POINTS {
        let (x, a) = sample(rng);
        let gap = x.min(a - x);
        let h = 1e-3 * gap;
        let d = derivative(f, x, a, h)?;
        let want = g(x, a);
        worst = worst.max((d - want).abs() / want.abs().max(1.0));
    }
    Ok(AntiderivativeCheck { name, points: POINTS, max_residual: worst, tolerance: TOL, passed: worst < TOL })
}

fn check_definite(
    name: &'static str,
    closed: fn(f64) -> Result<f64>,
    g: GapIntegrand,
    rng: &mut ChaCha8Rng,
) -> Result<AntiderivativeCheck> {
    let spec = QuadratureSpec::new(1e-12, 1e-13, 10_000)?;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let a = rng.gen_range(0.05..0.95);
        let num = integrate_with_gaps(|x, _, r| g(x, r), 0.0, a, &spec)?;
        let want = closed(a)?;
        worst = worst.max((num.value - want).abs() / want.abs().max(1.0));
    }
    Ok(AntiderivativeCheck { name, points: 10, max_residual: worst, tolerance: TOL, passed: worst < TOL })
}

/// Verifies each antiderivative by differentiating it numerically at 100
/// pseudo-random interior points (fixed seed), and the two definite
/// integrals against quadrature.
pub fn indefinite_integral_checks() -> Result<Vec<AntiderivativeCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let beyond = |r: &mut ChaCha8Rng| {
        let a = r.gen_range(0.5..3.0);
        (a * r.gen_range(0.05..0.95), a)
    };
    let unit = |r: &mut ChaCha8Rng| {
        let a = r.gen_range(0.1..0.9);
        (a * r.gen_range(0.05..0.95), a)
    };
    Ok(vec![
        check("log(x)/(x-a)", log_over_linear, |x, a| x.ln() / (x - a), beyond, &mut rng)?,
        check("log(x)^2/(x-a)", log_sq_over_linear, |x, a| x.ln().powi(2) / (x - a), beyond, &mut rng)?,
        check("log(x)log(a-x)/x", log_log_over_x, |x, a| x.ln() * (a - x).ln() / x, beyond, &mut rng)?,
        check("G: log(a-x)log(1-x)/x", g_antiderivative, |x, a| (a - x).ln() * (-x).ln_1p() / x, unit, &mut rng)?,
        check("H: log(a-x)log(x)/(1-x)", h_antiderivative, |x, a| (a - x).ln() * x.ln() / (1.0 - x), unit, &mut rng)?,
        check_definite("G definite on (0,a)", g_definite, |x, d| d.ln() * (-x).ln_1p() / x, &mut rng)?,
        check_definite("H definite on (0,a)", h_definite, |x, d| d.ln() * x.ln() / (1.0 - x), &mut rng)?,
    ])
}
