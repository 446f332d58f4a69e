use super::{integrate_nested, integrate_to_infinity, Estimate, QuadratureSpec};
use crate::error::{domain, Error, Result};
use crate::specfun::sphere_volume;

/// Hitting length of the geodesic from `x in (0, a)` to `y in (1, oo)`:
/// `(1/2) log |y (y - a)(x - 1) / (x (x - a)(y - 1))|`.
pub fn kernel_l(a: f64, x: f64, y: f64) -> Result<f64> {
    if !(0.0 < x && x < a && a < 1.0 && 1.0 < y && y.is_finite()) {
        return domain("kernel_L", format!("requires 0 < x < a < 1 < y, got a={a}, x={x}, y={y}"));
    }
    let num = y.ln() + (y - a).ln() + (1.0 - x).ln();
    let den = x.ln() + (a - x).ln() + (y - 1.0).ln();
    Ok(0.5 * (num - den))
}

/// `F_k(a) = int_0^a int_1^oo 4 L_a(x, y)^k / (y - x)^2 dy dx`.
///
/// With `x = a u` and `y = 1/(1 - v)` this becomes
/// `4a int_0^1 int_0^1 L^k / (1 - a u (1 - v))^2 dv du` on the unit square.
pub fn f_k_numeric(a: f64, k: u32, spec: &QuadratureSpec) -> Result<Estimate> {
    if k == 0 && a >= 1.0 {
        return Err(Error::Divergent("F_0 diverges as a -> 1 (M_0 is infinite with boundary cusps)".into()));
    }
    if !(a > 0.0 && a < 1.0) {
        return domain("F_k_numeric", format!("requires 0 < a < 1, got {a}"));
    }
    let inner_spec = spec.tighter(10.0);
    let la = a.ln();
    let outer = |u: f64, _u_lo: f64, u_hi: f64| -> Result<(f64, f64)> {
        let x_part = (-a * u).ln_1p() - (la + u.ln()) - (la + u_hi.ln());
        let inner = |_v: f64, v_lo: f64, v_hi: f64| -> Result<(f64, f64)> {
            let l = 0.5 * ((-a * v_hi).ln_1p() - v_lo.ln() - v_hi.ln() + x_part);
            let den = 1.0 - a * u * v_hi;
            Ok((l.powi(k as i32) / (den * den), 0.0))
        };
        let e = integrate_nested(&inner, 0.0, 1.0, &inner_spec, false)?;
        Ok((e.value, e.error))
    };
    let e = integrate_nested(&outer, 0.0, 1.0, spec, true)?;
    Ok(Estimate { value: 4.0 * a * e.value, error: 4.0 * a * e.error, evaluations: e.evaluations })
}

/// The triple-integral form of `F_{n,k}(l)` for `n >= 3`:
///
/// `Vol(S^{n-2}) Vol(S^{n-3}) / 2^(k-2)
///   int_0^1 r^{n-3} (1 - r^2)^{-(n-2)/2} dr int_{-1}^1 du int_b^oo log^k(...) / (v - u)^n dv`
///
/// with `b = sqrt((e^{2l} - r^2) / (1 - r^2))`, evaluated after `r = sin(theta)`,
/// `u = 2 zeta - 1` and `v = b / (1 - w)`.
pub fn f_nk_numeric(n: u32, k: u32, l: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    if n < 3 {
        return domain("F_nk_numeric", format!("requires n >= 3, got {n}"));
    }
    if !(l > 0.0) || !l.is_finite() {
        return domain("F_nk_numeric", format!("requires l > 0, got {l}"));
    }
    let nf = n as f64;
    let prefactor = sphere_volume(n - 2) * sphere_volume(n - 3) / 2f64.powi(k as i32 - 2);
    let e2l = (2.0 * l).exp();
    let mid_spec = spec.tighter(10.0);
    let inner_spec = spec.tighter(100.0);
    let half_pi = std::f64::consts::FRAC_PI_2;

    let outer = |theta: f64, _t_lo: f64, t_hi: f64| -> Result<(f64, f64)> {
        let s = theta.sin();
        let c = t_hi.sin(); // cos(theta), accurate near pi/2
        let b = (e2l - s * s).sqrt() / c;
        let weight = (s / c).powi(n as i32 - 3);
        let middle = |_z: f64, z_lo: f64, z_hi: f64| -> Result<(f64, f64)> {
            let u = z_lo - z_hi;
            let log_u = (b - u).ln() + (b + u).ln() - (4.0 * z_lo * z_hi).ln();
            let inner = |_w: f64, w_lo: f64, w_hi: f64| -> Result<(f64, f64)> {
                let den = b - u * w_hi;
                let base = b * w_hi.powf(nf - 2.0) / den.powf(nf);
                if k == 0 {
                    return Ok((base, 0.0));
                }
                let lg = (b - w_hi).ln() + (b + w_hi).ln() - 2.0 * b.ln() - w_lo.ln() - (1.0 + w_hi).ln() + log_u;
                Ok((base * lg.powi(k as i32), 0.0))
            };
            let e = integrate_nested(&inner, 0.0, 1.0, &inner_spec, false)?;
            Ok((2.0 * e.value, 2.0 * e.error))
        };
        let e = integrate_nested(&middle, 0.0, 1.0, &mid_spec, false)?;
        Ok((weight * e.value, weight * e.error))
    };
    let e = integrate_nested(&outer, 0.0, half_pi, spec, true)?;
    Ok(Estimate { value: prefactor * e.value, error: prefactor * e.error, evaluations: e.evaluations })
}

/// `int_0^oo x^{k+1} / sinh^2(x) dx`, closed form `(k+1)! zeta(k+1) / 2^k`.
pub fn sinh_moment(k: u32, spec: &QuadratureSpec) -> Result<Estimate> {
    if k == 0 {
        return Err(Error::Divergent("int x / sinh^2 x diverges at 0".into()));
    }
    let p = (k + 1) as i32;
    integrate_to_infinity(
        move |x| {
            if x < 20.0 {
                let s = x.sinh();
                x.powi(p) / (s * s)
            } else if x < 700.0 {
                4.0 * (p as f64 * x.ln() - 2.0 * x).exp()
            } else {
                0.0
            }
        },
        0.0,
        spec,
    )
}
