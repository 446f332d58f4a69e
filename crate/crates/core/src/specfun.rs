//! Real-argument polylogarithms, the Rogers dilogarithm and the Riemann /
//! Hurwitz zeta functions.
//!
//! Everything here works on the real branch `x <= 1`. The evaluation
//! strategy is the usual one for double precision:
//!
//! * `|x| <= 1/2`: the defining power series `sum x^n / n^k`;
//! * `1/2 < x < 1`: Euler reflection for `Li_2`, and for higher orders the
//!   expansion of `Li_k(e^mu)` in powers of `mu = ln x`;
//! * `-1 <= x < -1/2`: Landen's transform for `Li_2`, the square relation
//!   `Li_k(x) = 2^(1-k) Li_k(x^2) - Li_k(-x)` for higher orders;
//! * `x < -1`: the inversion formula `x -> 1/x`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

/// `zeta(2) = pi^2 / 6`.
pub const ZETA2: f64 = 1.644_934_066_848_226_4;
/// Apery's constant `zeta(3)`.
pub const ZETA3: f64 = 1.202_056_903_159_594_2;

/// Series truncation controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalTolerance {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Default for EvalTolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            max_terms: 1_000_000,
        }
    }
}

impl EvalTolerance {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return domain("EvalTolerance", format!("abs_tol must be positive, got {abs_tol}"));
        }
        if max_terms == 0 {
            return domain("EvalTolerance", "max_terms must be at least 1");
        }
        Ok(Self { abs_tol, max_terms })
    }

    /// A term below this magnitude no longer changes a partial sum `sum`.
    fn negligible(&self, term: f64, sum: f64) -> bool {
        term.abs() <= self.abs_tol.min(f64::EPSILON * sum.abs())
    }
}

// B_{2j} for j = 1..=12.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const ZETA_TABLE_MAX: usize = 96;

/// `zeta(k)` for `k = 0..ZETA_TABLE_MAX` (entries 0 and 1 unused).
fn zeta_table() -> &'static [f64; ZETA_TABLE_MAX] {
    static TABLE: OnceLock<[f64; ZETA_TABLE_MAX]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [f64::NAN; ZETA_TABLE_MAX];
        for (k, slot) in t.iter_mut().enumerate().skip(2) {
            *slot = hurwitz_em(k as f64, 1.0, &EvalTolerance::default());
        }
        t
    })
}

/// `zeta(-n)` for `n >= 0`, via `zeta(1-2m) = (-1)^m 2 (2m-1)! zeta(2m) / (2 pi)^(2m)`.
fn zeta_nonpositive(n: usize) -> f64 {
    if n == 0 {
        return -0.5;
    }
    if n % 2 == 0 {
        return 0.0;
    }
    let m = (n + 1) / 2;
    let two_pi = 2.0 * PI;
    // (2m-1)! / (2 pi)^(2m), accumulated to stay in range
    let mut ratio = 1.0 / two_pi;
    for i in 1..(2 * m) {
        ratio *= i as f64 / two_pi;
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    sign * 2.0 * ratio * zeta_int_positive(2 * m)
}

fn zeta_int_positive(k: usize) -> f64 {
    debug_assert!(k >= 2);
    if k < ZETA_TABLE_MAX {
        zeta_table()[k]
    } else {
        // 2^-96 is below double precision
        1.0
    }
}

/// Riemann zeta at an integer `k >= 2`.
pub fn riemann_zeta(k: i64) -> Result<f64> {
    if k < 2 {
        return domain("riemann_zeta", format!("requires k >= 2, got {k}"));
    }
    Ok(zeta_int_positive(k as usize))
}

/// Hurwitz zeta `sum_{n >= 0} (n + t)^(-s)` for `s > 1`, `t > 0`.
pub fn hurwitz_zeta(s: f64, t: f64) -> Result<f64> {
    hurwitz_zeta_with(s, t, &EvalTolerance::default())
}

pub fn hurwitz_zeta_with(s: f64, t: f64, tol: &EvalTolerance) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return domain("hurwitz_zeta", format!("requires s > 1, got {s}"));
    }
    if !(t > 0.0) || !t.is_finite() {
        return domain("hurwitz_zeta", format!("requires t > 0, got {t}"));
    }
    Ok(hurwitz_em(s, t, tol))
}

/// Euler-Maclaurin: 64 explicit terms, then the integral, half-term and
/// Bernoulli corrections.
fn hurwitz_em(s: f64, t: f64, tol: &EvalTolerance) -> f64 {
    const N: usize = 64;
    let mut head = 0.0;
    for n in (0..N).rev() {
        head += (n as f64 + t).powf(-s);
    }
    let x = N as f64 + t;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * x^(-s-2j+1)
    let mut rising = s; // s(s+1)...(s+2j-2)
    let mut fact = 2.0; // (2j)!
    let mut xpow = x.powf(-s - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let j = j + 1;
        if j > 1 {
            rising *= (s + (2 * j - 3) as f64) * (s + (2 * j - 2) as f64);
            fact *= ((2 * j - 1) * (2 * j)) as f64;
            xpow /= x * x;
        }
        let term = b / fact * rising * xpow;
        tail += term;
        if tol.negligible(term, head + tail) {
            break;
        }
    }
    head + tail
}

/// `sum_{n>=1} x^n / n^k`, used for `|x| <= 1/2`.
fn power_series(k: u32, x: f64, tol: &EvalTolerance) -> Result<f64> {
    let mut sum = 0.0;
    let mut p = x;
    for n in 1..=tol.max_terms {
        let term = p / (n as f64).powi(k as i32);
        sum += term;
        if tol.negligible(term, sum) {
            return Ok(sum);
        }
        p *= x;
    }
    Err(Error::Numerical(format!(
        "Li_{k}({x}) power series did not converge in {} terms",
        tol.max_terms
    )))
}

/// `Li_s(e^mu) = sum_{j != s-1} zeta(s-j) mu^j / j! + mu^(s-1)/(s-1)! (H_{s-1} - ln(-mu))`,
/// for `mu < 0` (`0 < x < 1`). Converges for `|mu| < 2 pi`.
fn log_series(s: u32, x: f64, tol: &EvalTolerance) -> Result<f64> {
    let mu = x.ln();
    let s = s as usize;
    let harmonic: f64 = (1..s).map(|i| 1.0 / i as f64).sum();
    let mut sum = 0.0;
    let mut pow_fact = 1.0; // mu^j / j!
    let mut quiet = 0;
    for j in 0..tol.max_terms.max(s + 4) {
        if j > 0 {
            pow_fact *= mu / j as f64;
        }
        let term = if j + 1 == s {
            pow_fact * (harmonic - (-mu).ln())
        } else if j + 1 < s {
            zeta_int_positive(s - j) * pow_fact
        } else {
            zeta_nonpositive(j - s) * pow_fact
        };
        sum += term;
        if j > s {
            if tol.negligible(term, sum) {
                quiet += 1;
                if quiet >= 2 {
                    return Ok(sum);
                }
            } else {
                quiet = 0;
            }
        }
    }
    Err(Error::Numerical(format!(
        "Li_{s}({x}) logarithmic series did not converge"
    )))
}

/// Dilogarithm on the real branch `x <= 1`.
pub fn li2(x: f64) -> Result<f64> {
    li2_with(x, &EvalTolerance::default())
}

pub fn li2_with(x: f64, tol: &EvalTolerance) -> Result<f64> {
    if x.is_nan() || x > 1.0 {
        return domain("li2", format!("real branch requires x <= 1, got {x}"));
    }
    if x == 1.0 {
        return Ok(ZETA2);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.abs() <= 0.5 {
        return power_series(2, x, tol);
    }
    if x > 0.5 {
        // Euler reflection
        let y = 1.0 - x;
        return Ok(ZETA2 - x.ln() * y.ln() - power_series(2, y, tol)?);
    }
    if x >= -1.0 {
        // Landen: x/(x-1) lies in [1/3, 1/2)
        let l = (-x).ln_1p();
        return Ok(-power_series(2, x / (x - 1.0), tol)? - 0.5 * l * l);
    }
    // inversion onto (-1, 0)
    let l = (-x).ln();
    Ok(-ZETA2 - 0.5 * l * l - li2_with(1.0 / x, tol)?)
}

/// Trilogarithm on the real branch `x <= 1`.
pub fn li3(x: f64) -> Result<f64> {
    polylog(3, x)
}

/// `Li_k(x)` for integer order `k >= 1` and real `x <= 1`.
pub fn polylog(k: i64, x: f64) -> Result<f64> {
    polylog_with(k, x, &EvalTolerance::default())
}

pub fn polylog_with(k: i64, x: f64, tol: &EvalTolerance) -> Result<f64> {
    if k < 1 {
        return domain("polylog", format!("order must be >= 1, got {k}"));
    }
    if x.is_nan() || x > 1.0 {
        return domain("polylog", format!("real branch requires x <= 1, got {x}"));
    }
    if k == 1 {
        if x == 1.0 {
            return domain("polylog", "Li_1 diverges at x = 1");
        }
        return Ok(-(-x).ln_1p());
    }
    if k == 2 {
        return li2_with(x, tol);
    }
    let s = k as u32;
    if x == 1.0 {
        return riemann_zeta(k);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.abs() <= 0.5 {
        return power_series(s, x, tol);
    }
    if x > 0.5 {
        return log_series(s, x, tol);
    }
    if x >= -1.0 {
        let sq = polylog_with(k, x * x, tol)?;
        let refl = polylog_with(k, -x, tol)?;
        return Ok(sq * 2f64.powi(1 - s as i32) - refl);
    }
    // Li_s(-z) = -(-1)^s Li_s(-1/z) - L^s/s! - 2 sum_j L^(s-2j)/(s-2j)! eta(2j)
    let l = (-x).ln();
    let inner = polylog_with(k, 1.0 / x, tol)?;
    let sign = if s % 2 == 0 { -1.0 } else { 1.0 };
    let mut acc = sign * inner - l.powi(s as i32) / factorial(s as usize);
    for j in 1..=(s as usize / 2) {
        let eta = (1.0 - 2f64.powi(1 - 2 * j as i32)) * zeta_int_positive(2 * j);
        acc -= 2.0 * l.powi((s as usize - 2 * j) as i32) / factorial(s as usize - 2 * j) * eta;
    }
    Ok(acc)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Rogers dilogarithm `R(x) = Li_2(x) + (1/2) ln|x| ln(1 - x)` for `x <= 1`,
/// with the limits `R(0) = 0`, `R(1) = pi^2/6`.
pub fn rogers_dilog(x: f64) -> Result<f64> {
    if x.is_nan() || x > 1.0 {
        return domain("rogers_dilog", format!("requires x <= 1, got {x}"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(ZETA2);
    }
    Ok(li2(x)? + 0.5 * x.abs().ln() * (-x).ln_1p())
}

/// `Gamma(m / 2)` for a positive integer `m`, exactly via the half-integer recurrence.
pub fn gamma_half(m: u32) -> f64 {
    assert!(m > 0, "gamma_half requires m >= 1");
    let (mut g, mut arg) = if m % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while arg < m as f64 / 2.0 {
        g *= arg;
        arg += 1.0;
    }
    g
}

/// Surface area of the unit sphere `S^k` in `R^(k+1)`; `Vol(S^0) = 2`.
pub fn sphere_volume(k: u32) -> f64 {
    2.0 * PI.powf((k + 1) as f64 / 2.0) / gamma_half(k + 1)
}
