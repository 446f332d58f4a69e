//! Closed-form summands and constants of the orthospectrum identities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geom::{a_of_l, OrthoSpectrum};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::specfun::{gamma_half, hurwitz_zeta, li2, li3, riemann_zeta, sphere_volume, ZETA2, ZETA3};

/// Normalization of the Crofton constant `K_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CroftonConvention {
    /// The printed formula, `K_2 = 1`.
    PaperStated,
    /// Four times the printed formula, matching the measure `2 dx dy / (x - y)^2`.
    #[default]
    IntegralConsistent,
}

/// Volume of a ball of radius `r` in `H^n`.
pub fn ball_volume(n: u32, r: f64) -> Result<f64> {
    if n == 0 {
        return domain("ball_volume", "requires n >= 1");
    }
    if !(r >= 0.0) {
        return domain("ball_volume", format!("requires r >= 0, got {r}"));
    }
    match n {
        1 => Ok(2.0 * r),
        2 => {
            let s = (0.5 * r).sinh();
            Ok(4.0 * PI * s * s)
        }
        _ => Ok(sphere_volume(n - 1) * sinh_power_integral(n - 1, r)?),
    }
}

/// `int_0^r sinh^m(t) dt`: quadrature for small `r`, where the recurrence
/// cancels, and `J_m = (sinh^{m-1} r cosh r - (m-1) J_{m-2}) / m` beyond.
fn sinh_power_integral(m: u32, r: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(0.0);
    }
    if r < 1.0 {
        let spec = QuadratureSpec::new(1e-14, 1e-300, 1000)?;
        return Ok(integrate(|t| t.sinh().powi(m as i32), 0.0, r, &spec)?.value);
    }
    let (s, c) = (r.sinh(), r.cosh());
    let mut j = if m % 2 == 0 { r } else { c - 1.0 };
    let mut p = if m % 2 == 0 { 2 } else { 3 };
    while p <= m {
        j = (s.powi(p as i32 - 1) * c - (p - 1) as f64 * j) / p as f64;
        p += 2;
    }
    Ok(j)
}

/// `V_{n-1}(log coth(l/2))`, one orthogeodesic's share of `Vol(dX) / 2`.
pub fn basmajian_term(n: u32, l: f64) -> Result<f64> {
    if n < 2 {
        return domain("basmajian_term", format!("requires n >= 2, got {n}"));
    }
    if !(l > 0.0) || !l.is_finite() {
        return domain("basmajian_term", format!("requires l > 0, got {l}"));
    }
    // log coth(l/2) = -log tanh(l/2), written to stay accurate for large l
    let r = (2.0 / (l.exp() - 1.0)).ln_1p();
    ball_volume(n - 1, r)
}

pub fn crofton_constant(n: u32, convention: CroftonConvention) -> Result<f64> {
    if n < 2 {
        return domain("crofton_constant", format!("requires n >= 2, got {n}"));
    }
    let stated = PI.powf((n - 1) as f64 / 2.0) / (2f64.powi(n as i32 - 1) * gamma_half(n + 1));
    Ok(match convention {
        CroftonConvention::PaperStated => stated,
        CroftonConvention::IntegralConsistent => 4.0 * stated,
    })
}

fn check_unit(func: &'static str, a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        domain(func, format!("requires 0 < a < 1, got {a}"))
    }
}

const SERIES_CUTOFF: f64 = 1e-6;

/// Second-moment kernel `F(a) = F_2(a)` in polylogarithms. Series
/// expansions take over within `1e-6` of either endpoint.
pub fn f_closed(a: f64) -> Result<f64> {
    check_unit("F_closed", a)?;
    let pi2 = PI * PI;
    if a < SERIES_CUTOFF {
        let lg = a.ln();
        let c1 = 4.0 * lg * lg - 16.0 * lg - 2.0 * pi2 / 3.0 + 24.0;
        let c2 = 2.0 * lg * lg - 4.0 * lg - pi2 / 3.0 + 4.0;
        let c3 = 4.0 / 3.0 * lg * lg - 16.0 / 9.0 * lg - 2.0 * pi2 / 9.0 + 17.0 / 9.0;
        return Ok(a * (c1 + a * (c2 + a * c3)));
    }
    let b = 1.0 - a;
    if b < SERIES_CUTOFF {
        let lg = b.ln();
        let c1 = 2.0 * lg * lg - 8.0 * lg - 4.0 * pi2 / 3.0 + 12.0;
        let c2 = lg * lg - 2.0 * lg - 2.0 * pi2 / 3.0 + 3.5;
        let c3 = 2.0 / 3.0 * lg * lg - 8.0 / 9.0 * lg - 4.0 * pi2 / 9.0 + 22.0 / 9.0;
        return Ok(12.0 * ZETA3 + b * (c1 + b * (c2 + b * c3)));
    }
    let (la, lb) = (a.ln(), (-a).ln_1p());
    Ok(-12.0 * ZETA3 - 4.0 * pi2 / 3.0 * lb + 6.0 * lb * lb * la - 4.0 * lb * la * la
        - 8.0 * (2.0 * la - lb) * li2(a)?
        + 24.0 * li3(a)?
        + 12.0 * li3(b)?)
}

/// First piece of `F = 2 I_1 + 2 I_2`.
pub fn i1_closed(a: f64) -> Result<f64> {
    check_unit("I1_closed", a)?;
    let (la, lb) = (a.ln(), (-a).ln_1p());
    Ok(-lb * la * la + lb.powi(3) - 4.0 * (la - lb) * li2(a)? - 6.0 * li3(a / (a - 1.0))?)
}

/// Second piece of `F = 2 I_1 + 2 I_2`.
pub fn i2_closed(a: f64) -> Result<f64> {
    check_unit("I2_closed", a)?;
    let (la, lb) = (a.ln(), (-a).ln_1p());
    let m = -a / (1.0 - a);
    Ok(2.0 * ZETA3 + 4.0 * ZETA2 * lb + lb.powi(3) / 3.0 - lb * lb * la - la * la * lb - 4.0 * la * li2(a)?
        + 4.0 * li3(a)?
        - 2.0 * li3(m)?
        - 2.0 * li3(1.0 - a)?)
}

/// Contribution of one boundary cusp to `M_k`: `(k+1)! zeta(k+1) / 2^(k-2)`.
pub fn cusp_term(k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Divergent("M_0 is infinite when the surface has boundary cusps".into()));
    }
    let fact: f64 = (1..=k + 1).map(f64::from).product();
    Ok(fact * riemann_zeta(k as i64 + 1)? / 2f64.powi(k as i32 - 2))
}

/// Average time to the boundary from the (truncated) orthospectrum.
pub fn avg_hitting_time(spectrum: &OrthoSpectrum, c_s: u32, abs_chi: f64) -> Result<f64> {
    if !(abs_chi > 0.0) {
        return domain("avg_hitting_time", format!("requires |chi| > 0, got {abs_chi}"));
    }
    let mut total = 0.0;
    for &(l, m) in &spectrum.lengths {
        total += m as f64 * f_closed(a_of_l(l)?)?;
    }
    Ok((total + 6.0 * ZETA3 * c_s as f64) / (8.0 * PI * PI * abs_chi))
}

/// Right-hand side of the Rogers dilogarithm orthospectrum identity.
pub fn rogers_identity_rhs(abs_chi: f64, c_s: u32) -> Result<f64> {
    if !(abs_chi > 0.0) {
        return domain("rogers_identity_rhs", format!("requires |chi| > 0, got {abs_chi}"));
    }
    Ok(PI * PI * (6.0 * abs_chi - c_s as f64) / 12.0)
}

/// `N_k = int_0^oo x^k 12 x^2 / sinh^2 x dx = 3 (k+2)! zeta(k+2) / 2^(k-1)`.
pub fn ideal_triangle_moment(k: u32) -> Result<f64> {
    let fact: f64 = (1..=k + 2).map(f64::from).product();
    Ok(3.0 * fact * riemann_zeta(k as i64 + 2)? / 2f64.powi(k as i32 - 1))
}

/// `int_0^oo e^{tx} 12 x^2 / sinh^2 x dx = 12 (zeta(2, 1 - t/2) + (t/2) zeta(3, 1 - t/2))`.
pub fn ideal_triangle_mgf(t: f64) -> Result<f64> {
    if !(t < 2.0) {
        return domain("ideal_triangle_mgf", format!("requires t < 2, got {t}"));
    }
    let q = 1.0 - 0.5 * t;
    Ok(12.0 * (hurwitz_zeta(2.0, q)? + 0.5 * t * hurwitz_zeta(3.0, q)?))
}
