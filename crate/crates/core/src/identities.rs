//! Truncated orthospectrum identities and moment sums, with convergence traces.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{a_of_l, enumerate_orthospectrum, OrthoSpectrum, SurfaceModel};
use crate::kernels::{avg_hitting_time, basmajian_term, cusp_term, f_closed, rogers_identity_rhs};
use crate::quadrature::{f_k_numeric, QuadratureSpec};
use crate::specfun::rogers_dilog;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub l_max: f64,
    pub partial_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_name: String,
    pub l_max: f64,
    pub partial_sum: f64,
    pub predicted: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    /// Orthogeodesics summed, counted with multiplicity.
    pub terms_used: u64,
    /// Partial sums at cutoffs `l_max - 2j`, increasing.
    pub trace: Vec<TracePoint>,
    /// Heuristic tail proxy: the change between the last two trace points.
    /// Not a bound.
    pub heuristic_tail_gap: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    #[default]
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub k: u32,
    pub l_max: f64,
    pub truncated_moment: f64,
    pub cusp_contribution: f64,
    pub spectrum_contribution: f64,
    pub method: MomentMethod,
    pub terms_used: u64,
}

/// Orthospectrum up to `l_max`; empty for surfaces with no geodesic boundary.
pub fn spectrum_of(s: &SurfaceModel, l_max: f64) -> Result<OrthoSpectrum> {
    if s.hexagon.is_none() && s.boundary_length == 0.0 {
        return Ok(OrthoSpectrum::empty(l_max));
    }
    enumerate_orthospectrum(s, l_max)
}

fn trace_cutoffs(l_max: f64) -> Vec<f64> {
    let mut c: Vec<f64> = (0..).map(|j| l_max - 2.0 * j as f64).take_while(|l| *l > 0.0).collect();
    c.reverse();
    c
}

fn report(name: &str, spectrum: &OrthoSpectrum, predicted: f64, term: impl Fn(f64) -> Result<f64>) -> Result<IdentityReport> {
    let mut values = Vec::with_capacity(spectrum.lengths.len());
    for &(l, m) in &spectrum.lengths {
        values.push((l, m as f64 * term(l)?));
    }
    let trace: Vec<TracePoint> = trace_cutoffs(spectrum.l_max)
        .into_iter()
        .map(|cut| TracePoint {
            l_max: cut,
            partial_sum: values.iter().filter(|(l, _)| *l <= cut).fold(0.0, |acc, (_, v)| acc + v),
        })
        .collect();
    let partial_sum = values.iter().fold(0.0, |acc, (_, v)| acc + v);
    let abs_error = (partial_sum - predicted).abs();
    let rel_error = if predicted == 0.0 {
        if abs_error == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        abs_error / predicted.abs()
    };
    let heuristic_tail_gap = match trace.as_slice() {
        [.., p, q] => Some(q.partial_sum - p.partial_sum),
        _ => None,
    };
    Ok(IdentityReport {
        identity_name: name.to_string(),
        l_max: spectrum.l_max,
        partial_sum,
        predicted,
        abs_error,
        rel_error,
        terms_used: spectrum.count(),
        trace,
        heuristic_tail_gap,
    })
}

/// `sum 2 V_1(log coth(l/2))` against the boundary length.
pub fn verify_basmajian(s: &SurfaceModel, l_max: f64) -> Result<IdentityReport> {
    if s.cusp_count > 0 {
        return Err(Error::Divergent(
            "Basmajian's identity needs compact boundary: M_0 is infinite with boundary cusps".into(),
        ));
    }
    let spectrum = spectrum_of(s, l_max)?;
    report("basmajian", &spectrum, s.boundary_length, |l| Ok(2.0 * basmajian_term(2, l)?))
}

/// `sum R(sech^2(l/2))` against `pi^2 (6|chi| - C_S) / 12`.
pub fn verify_rogers(s: &SurfaceModel, l_max: f64) -> Result<IdentityReport> {
    let predicted = rogers_identity_rhs(s.abs_chi(), s.cusp_count)?;
    let spectrum = spectrum_of(s, l_max)?;
    report("rogers", &spectrum, predicted, |l| rogers_dilog(a_of_l(l)?))
}

/// `M_1 = sum F_1 + C_S cusp_term(1)` against `Vol(T_1 S) = 4 pi^2 |chi|`.
pub fn verify_moment1(s: &SurfaceModel, l_max: f64) -> Result<IdentityReport> {
    let spectrum = spectrum_of(s, l_max)?;
    let mut r = report("moment1", &spectrum, s.unit_tangent_volume(), |l| Ok(8.0 * rogers_dilog(a_of_l(l)?)?))?;
    let cusps = s.cusp_count as f64 * cusp_term(1)?;
    r.partial_sum += cusps;
    for p in &mut r.trace {
        p.partial_sum += cusps;
    }
    r.abs_error = (r.partial_sum - r.predicted).abs();
    r.rel_error = r.abs_error / r.predicted;
    Ok(r)
}

/// Compares the two routes to the truncated average hitting time:
/// `partial_sum` is `M_2 / (2 Vol(T_1 S))` from the moment sum, `predicted`
/// is the closed expression `(sum F + 6 zeta(3) C_S) / (8 pi^2 |chi|)`.
pub fn verify_hitting_time(s: &SurfaceModel, l_max: f64) -> Result<IdentityReport> {
    let spectrum = spectrum_of(s, l_max)?;
    let predicted = avg_hitting_time(&spectrum, s.cusp_count, s.abs_chi())?;
    let scale = 2.0 * s.unit_tangent_volume();
    let mut r = report("hitting_time", &spectrum, predicted, |l| Ok(f_closed(a_of_l(l)?)? / scale))?;
    let cusps = s.cusp_count as f64 * cusp_term(2)? / scale;
    r.partial_sum += cusps;
    for p in &mut r.trace {
        p.partial_sum += cusps;
    }
    r.abs_error = (r.partial_sum - r.predicted).abs();
    r.rel_error = if predicted == 0.0 { r.abs_error } else { r.abs_error / predicted };
    Ok(r)
}

/// Dispatches on an identity name: basmajian, rogers, moment1 or hitting_time.
pub fn verify(s: &SurfaceModel, identity: &str, l_max: f64) -> Result<IdentityReport> {
    match identity {
        "basmajian" => verify_basmajian(s, l_max),
        "rogers" => verify_rogers(s, l_max),
        "moment1" => verify_moment1(s, l_max),
        "hitting_time" => verify_hitting_time(s, l_max),
        other => Err(Error::Unsupported(format!("unknown identity '{other}'"))),
    }
}

/// Spectrum part of `M_k` for an already enumerated spectrum.
pub fn spectrum_moment(spectrum: &OrthoSpectrum, k: u32, method: MomentMethod, spec: &QuadratureSpec) -> Result<f64> {
    let term = |l: f64| -> Result<f64> {
        let a = a_of_l(l)?;
        match method {
            MomentMethod::ClosedForm => match k {
                0 => Ok(-4.0 * (-a).ln_1p()),
                1 => Ok(8.0 * rogers_dilog(a)?),
                2 => f_closed(a),
                _ => Err(Error::Unsupported(format!("no closed form for F_{k}; use quadrature"))),
            },
            MomentMethod::Quadrature => Ok(f_k_numeric(a, k, spec)?.value),
        }
    };
    let terms: Vec<f64> = spectrum
        .lengths
        .par_iter()
        .map(|&(l, m)| Ok(m as f64 * term(l)?))
        .collect::<Result<_>>()?;
    Ok(terms.iter().fold(0.0, |acc, t| acc + t))
}

/// `M_k` truncated to orthogeodesics of length at most `l_max`.
pub fn truncated_moment(s: &SurfaceModel, k: u32, l_max: f64, method: MomentMethod) -> Result<MomentReport> {
    let cusp_contribution = if s.cusp_count == 0 { 0.0 } else { s.cusp_count as f64 * cusp_term(k)? };
    let spectrum = spectrum_of(s, l_max)?;
    let spectrum_contribution = spectrum_moment(&spectrum, k, method, &QuadratureSpec::default())?;
    Ok(MomentReport {
        k,
        l_max,
        truncated_moment: spectrum_contribution + cusp_contribution,
        cusp_contribution,
        spectrum_contribution,
        method,
        terms_used: spectrum.count(),
    })
}

/// Truncated `A(S) = M_2 / (2 Vol(T_1 S))`.
pub fn average_hitting_time_report(s: &SurfaceModel, l_max: f64, method: MomentMethod) -> Result<f64> {
    let m2 = truncated_moment(s, 2, l_max, method)?;
    Ok(m2.truncated_moment / (2.0 * 4.0 * PI * PI * s.abs_chi()))
}

/// Trace as CSV with columns `l_max,partial_sum,abs_error`.
pub fn write_trace_csv<W: Write>(r: &IdentityReport, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Numerical(format!("csv output failed: {e}"));
    w.write_record(["l_max", "partial_sum", "abs_error"]).map_err(io)?;
    for p in &r.trace {
        let abs = (p.partial_sum - r.predicted).abs();
        w.serialize((p.l_max, p.partial_sum, abs)).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Numerical(format!("csv output failed: {e}")))?;
    Ok(())
}
