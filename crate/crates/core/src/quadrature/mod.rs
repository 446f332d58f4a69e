//! Double-exponential (tanh-sinh) quadrature and the numerical moment kernels.
//!
//! Integrands receive the node `x` together with its distances to both
//! interval ends, computed directly from the node parameter, so endpoint
//! singularities such as `log(1 - x)` are evaluated without cancellation.

mod antiderivatives;
mod moments;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub use antiderivatives::{indefinite_integral_checks, AntiderivativeCheck};
pub use moments::{kernel_l, sinh_moment, f_k_numeric, f_nk_numeric};

/// Tolerances for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the number of panels created by bisection.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-9, abs_tol: 1e-10, max_subdivisions: 1_000_000 }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !(abs_tol > 0.0) {
            return domain("QuadratureSpec", "tolerances must be positive");
        }
        if max_subdivisions == 0 {
            return domain("QuadratureSpec", "max_subdivisions must be at least 1");
        }
        Ok(Self { rel_tol, abs_tol, max_subdivisions })
    }

    /// Both tolerances divided by `factor`.
    pub fn tighter(&self, factor: f64) -> Self {
        Self { rel_tol: self.rel_tol / factor, abs_tol: self.abs_tol / factor, ..*self }
    }
}

/// An integral value with its a-posteriori error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: u64,
}

/// Node parameter range; the smallest gap to an end is about `5e-62 (b - a)`.
const T_MAX: f64 = 4.5;
const MIN_LEVEL: u32 = 3;
const MAX_LEVEL: u32 = 11;
/// Floor on a reported panel error: agreement between levels cannot certify
/// more than a few ulps.
const ROUNDING: f64 = 4.0 * f64::EPSILON;

/// Neumaier compensated summation.
#[derive(Default, Clone, Copy)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// Node at parameter `t` on `[a, b]`: `(x, x - a, b - x, dx/dt)`.
fn node(t: f64, a: f64, b: f64) -> (f64, f64, f64, f64) {
    let w = b - a;
    let u = std::f64::consts::FRAC_PI_2 * t.sinh();
    let left = w / (1.0 + (-2.0 * u).exp());
    let right = w / (1.0 + (2.0 * u).exp());
    let x = if left <= right { a + left } else { b - right };
    let jac = std::f64::consts::PI * t.cosh() * left * right / w;
    (x, left, right, jac)
}

struct Panel {
    value: f64,
    error: f64,
    evals: u64,
    converged: bool,
}

/// One tanh-sinh panel, refining the step until successive levels agree.
fn panel<F>(f: &F, a: f64, b: f64, abs_target: f64, rel_tol: f64, parallel: bool) -> Result<Panel>
where
    F: Fn(f64, f64, f64) -> Result<(f64, f64)> + Sync,
{
    let eval_level = |h: f64, odd_only: bool| -> Result<(Sum, f64, u64)> {
        let n = (T_MAX / h).floor() as i64;
        let ks: Vec<i64> = (-n..=n).filter(|k| !odd_only || k.rem_euclid(2) == 1).collect();
        let term = |k: &i64| -> Result<(f64, f64)> {
            let (x, l, r, jac) = node(*k as f64 * h, a, b);
            if jac == 0.0 || l == 0.0 || r == 0.0 {
                return Ok((0.0, 0.0));
            }
            let (v, e) = f(x, l, r)?;
            if !v.is_finite() {
                return Err(Error::Numerical(format!("integrand not finite at x = {x}")));
            }
            Ok((jac * v, jac * e.abs()))
        };
        let terms: Vec<(f64, f64)> = if parallel {
            ks.par_iter().map(term).collect::<Result<_>>()?
        } else {
            ks.iter().map(term).collect::<Result<_>>()?
        };
        let mut s = Sum::default();
        let mut inner_err = 0.0;
        for (v, e) in &terms {
            s.add(*v);
            inner_err += e;
        }
        Ok((s, inner_err, terms.len() as u64))
    };

    let mut h = 1.0;
    let (mut sum, mut inner_err, mut evals) = eval_level(h, false)?;
    let mut prev = sum.value() * h;
    let mut err = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let (s_new, e_new, n_new) = eval_level(h, true)?;
        sum.add(s_new.value());
        inner_err += e_new;
        evals += n_new;
        let cur = sum.value() * h;
        err = (cur - prev).abs() + inner_err * h;
        prev = cur;
        if level >= MIN_LEVEL && err <= abs_target.max(rel_tol * cur.abs()) {
            return Ok(Panel { value: cur, error: err.max(ROUNDING * cur.abs()), evals, converged: true });
        }
    }
    Ok(Panel { value: prev, error: err.max(ROUNDING * prev.abs()), evals, converged: false })
}

/// `int_a^b f(x, x - a, b - x) dx`, where `f` also returns an error bound on
/// its own value (for nested integrals).
pub fn integrate_nested<F>(f: &F, a: f64, b: f64, spec: &QuadratureSpec, parallel: bool) -> Result<Estimate>
where
    F: Fn(f64, f64, f64) -> Result<(f64, f64)> + Sync,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return domain("integrate", format!("invalid interval [{a}, {b}]"));
    }
    let mut stack = vec![(a, b, spec.abs_tol)];
    let mut panels = 1usize;
    let mut total = Sum::default();
    let mut err = 0.0;
    let mut evals = 0u64;
    let mut failed = false;
    while let Some((lo, hi, target)) = stack.pop() {
        let p = panel(f, lo, hi, target, spec.rel_tol, parallel)?;
        evals += p.evals;
        if p.converged || panels + 2 > spec.max_subdivisions {
            failed |= !p.converged;
            total.add(p.value);
            err += p.error;
            continue;
        }
        let mid = 0.5 * (lo + hi);
        stack.push((mid, hi, 0.5 * target));
        stack.push((lo, mid, 0.5 * target));
        panels += 2;
    }
    let value = total.value();
    if failed && err > spec.abs_tol.max(spec.rel_tol * value.abs()) {
        return Err(Error::ToleranceNotMet {
            estimate: value,
            achieved: err,
            requested: spec.abs_tol.max(spec.rel_tol * value.abs()),
        });
    }
    Ok(Estimate { value, error: err, evaluations: evals })
}

/// `int_a^b f(x, x - a, b - x) dx`.
pub fn integrate_with_gaps<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64, f64, f64) -> f64 + Sync,
{
    integrate_nested(&|x, l, r| Ok((f(x, l, r), 0.0)), a, b, spec, false)
}

/// `int_a^b f(x) dx`.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    integrate_with_gaps(|x, _, _| f(x), a, b, spec)
}

/// `int_a^oo f(x) dx`, through `x = a + s / (1 - s)`.
pub fn integrate_to_infinity<F>(f: F, a: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    integrate_with_gaps(
        |_, s, r| {
            let x = a + s / r;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (r * r)
            }
        },
        0.0,
        1.0,
        spec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn smooth_and_singular() {
        let spec = QuadratureSpec::default();
        let e = integrate(|x| x.exp(), 0.0, 1.0, &spec).unwrap();
        assert!((e.value - (1f64.exp() - 1.0)).abs() < 1e-13);
        let e = integrate_with_gaps(|_, l, _| l.ln(), 0.0, 1.0, &spec).unwrap();
        assert!((e.value + 1.0).abs() < 1e-13);
        let e = integrate_with_gaps(|_, l, _| 1.0 / l.sqrt(), 0.0, 1.0, &spec).unwrap();
        assert!((e.value - 2.0).abs() < 1e-12);
        let e = integrate_with_gaps(|_, l, r| l.ln() * r.ln(), 0.0, 1.0, &spec).unwrap();
        assert!((e.value - (2.0 - PI * PI / 6.0)).abs() < 1e-13);
    }

    #[test]
    fn half_line() {
        let spec = QuadratureSpec::default();
        let e = integrate_to_infinity(|x| (-x).exp(), 0.0, &spec).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
        let e = integrate_to_infinity(|x| 1.0 / (1.0 + x * x), 0.0, &spec).unwrap();
        assert!((e.value - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn error_estimates_cover_truth() {
        let spec = QuadratureSpec::new(1e-6, 1e-8, 1000).unwrap();
        let e = integrate_with_gaps(|_, l, _| l.ln().powi(2), 0.0, 1.0, &spec).unwrap();
        assert!((e.value - 2.0).abs() <= e.error.max(1e-15));
        assert!(e.evaluations > 0);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(0.0, 1e-9, 10).is_err());
        assert!(QuadratureSpec::new(1e-9, 1e-9, 0).is_err());
        assert!(integrate(|x| x, 1.0, 0.0, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn tolerance_not_met_is_reported() {
        // oscillatory integrand with a budget of one panel
        let spec = QuadratureSpec::new(1e-15, 1e-300, 1).unwrap();
        let r = integrate(|x| (1000.0 * x).sin() * x.sqrt(), 0.0, 1.0, &spec);
        assert!(matches!(r, Err(Error::ToleranceNotMet { .. })));
    }

    #[test]
    fn compensated_sum() {
        let mut s = Sum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }
}
