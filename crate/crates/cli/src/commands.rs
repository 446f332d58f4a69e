use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use orthokit::geom::{enumerate_orthospectrum, SurfaceModel};
use orthokit::identities::{verify, write_trace_csv};
use orthokit::kernels::{self, CroftonConvention};
use orthokit::mcflow::{self, FlowConfig};
use orthokit::quadrature::{self, QuadratureSpec};
use orthokit::specfun;
use serde_json::{json, Value};

use crate::manifest::{write_output, RunManifest};
use crate::{Command, Convention, Figure};

#[derive(Debug)]
pub enum CliError {
    Core(orthokit::Error),
    Usage(String),
    Io(String),
}

impl CliError {
    /// 2 domain, 3 tolerance not met, 4 divergence, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(orthokit::Error::Domain { .. }) => 2,
            CliError::Core(orthokit::Error::ToleranceNotMet { .. }) => 3,
            CliError::Core(orthokit::Error::Divergent(_)) => 4,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<orthokit::Error> for CliError {
    fn from(e: orthokit::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Eval { function, args, convention, rel_tol, abs_tol, max_subdivisions } => {
            let spec = QuadratureSpec::new(rel_tol, abs_tol, max_subdivisions)?;
            let out = eval(&function, &args, convention, &spec)?;
            println!("{}", serde_json::to_string(&out)?);
            Ok(())
        }
        Command::Verify { surface, identity, l_max, out } => cmd_verify(&surface, &identity, l_max, out.as_deref()),
        Command::Spectrum { surface, l_max, out } => cmd_spectrum(&surface, l_max, out.as_deref()),
        Command::Mc { surface, samples, seed, max_length, bins, out_prefix } => {
            cmd_mc(&surface, samples, seed, max_length, bins, out_prefix.as_deref())
        }
        Command::Figures { which, out } => cmd_figures(which, out.as_deref()),
    }
}

fn load_surface(arg: &str) -> CliResult<(SurfaceModel, Value)> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Io(format!("cannot read surface file {arg}: {e}")))?
    };
    let raw: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid surface JSON: {e}")))?;
    let model: SurfaceModel = match serde_json::from_value(raw) {
        Ok(m) => m,
        Err(e) => {
            // surface a model error with its own exit code
            let spec: Result<orthokit::geom::SurfaceSpec, _> = serde_json::from_str(&text);
            return Err(match spec {
                Ok(s) => s.build().err().map(CliError::Core).unwrap_or(CliError::Usage(e.to_string())),
                Err(_) => CliError::Usage(format!("invalid surface JSON: {e}")),
            });
        }
    };
    let canonical = serde_json::to_value(&model)?;
    Ok((model, canonical))
}

fn num<T: std::str::FromStr>(function: &str, args: &[String], i: usize, what: &str) -> CliResult<T> {
    let s = args.get(i).ok_or_else(|| CliError::Usage(format!("{function}: missing argument {what}")))?;
    s.parse::<T>().map_err(|_| CliError::Usage(format!("{function}: cannot parse {what} from '{s}'")))
}

fn expect_args(function: &str, args: &[String], names: &[&str]) -> CliResult<()> {
    if args.len() != names.len() {
        return Err(CliError::Usage(format!("{function} takes {} argument(s): {}", names.len(), names.join(" "))));
    }
    Ok(())
}

fn eval(function: &str, args: &[String], convention: Convention, spec: &QuadratureSpec) -> CliResult<Value> {
    let f = function;
    let value_only = |v: f64, a: Value| json!({ "function": f, "arguments": a, "value": v });
    let estimate = |e: quadrature::Estimate, a: Value| {
        json!({ "function": f, "arguments": a, "value": e.value, "error_estimate": e.error, "evaluations": e.evaluations })
    };
    Ok(match f {
        "li2" | "li3" | "rogers" | "F_closed" | "ideal_triangle_mgf" => {
            expect_args(f, args, &["x"])?;
            let x: f64 = num(f, args, 0, "x")?;
            let v = match f {
                "li2" => specfun::li2(x)?,
                "li3" => specfun::li3(x)?,
                "rogers" => specfun::rogers_dilog(x)?,
                "F_closed" => kernels::f_closed(x)?,
                _ => kernels::ideal_triangle_mgf(x)?,
            };
            value_only(v, json!([x]))
        }
        "polylog" => {
            expect_args(f, args, &["k", "x"])?;
            let (k, x): (i64, f64) = (num(f, args, 0, "k")?, num(f, args, 1, "x")?);
            value_only(specfun::polylog(k, x)?, json!([k, x]))
        }
        "zeta" => {
            expect_args(f, args, &["k"])?;
            let k: i64 = num(f, args, 0, "k")?;
            value_only(specfun::riemann_zeta(k)?, json!([k]))
        }
        "hurwitz" => {
            expect_args(f, args, &["s", "q"])?;
            let (s, q): (f64, f64) = (num(f, args, 0, "s")?, num(f, args, 1, "q")?);
            value_only(specfun::hurwitz_zeta(s, q)?, json!([s, q]))
        }
        "F_k_numeric" => {
            expect_args(f, args, &["a", "k"])?;
            let (a, k): (f64, u32) = (num(f, args, 0, "a")?, num(f, args, 1, "k")?);
            estimate(quadrature::f_k_numeric(a, k, spec)?, json!([a, k]))
        }
        "F_nk_numeric" => {
            expect_args(f, args, &["n", "k", "l"])?;
            let (n, k, l): (u32, u32, f64) = (num(f, args, 0, "n")?, num(f, args, 1, "k")?, num(f, args, 2, "l")?);
            estimate(quadrature::f_nk_numeric(n, k, l, spec)?, json!([n, k, l]))
        }
        "basmajian_term" | "ball_volume" => {
            expect_args(f, args, &["n", if f == "ball_volume" { "r" } else { "l" }])?;
            let (n, x): (u32, f64) = (num(f, args, 0, "n")?, num(f, args, 1, "value")?);
            let v = if f == "ball_volume" { kernels::ball_volume(n, x)? } else { kernels::basmajian_term(n, x)? };
            value_only(v, json!([n, x]))
        }
        "crofton_constant" => {
            expect_args(f, args, &["n"])?;
            let n: u32 = num(f, args, 0, "n")?;
            let (c, name) = match convention {
                Convention::Paper => (CroftonConvention::PaperStated, "paper_stated"),
                Convention::IntegralConsistent => (CroftonConvention::IntegralConsistent, "integral_consistent"),
            };
            json!({ "function": f, "arguments": [n], "convention": name, "value": kernels::crofton_constant(n, c)? })
        }
        other => return Err(CliError::Usage(format!("unknown function '{other}'"))),
    })
}

fn json_line(v: &impl serde::Serialize) -> CliResult<Vec<u8>> {
    let mut s = serde_json::to_vec(v)?;
    s.push(b'\n');
    Ok(s)
}

/// `dir/report.json` -> `dir/report.trace.csv`.
fn trace_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    out.with_file_name(format!("{stem}.trace.csv"))
}

fn cmd_verify(surface: &str, identity: &str, l_max: f64, out: Option<&Path>) -> CliResult<()> {
    let (model, canonical) = load_surface(surface)?;
    if !(l_max > 0.0) || !l_max.is_finite() {
        return Err(orthokit::Error::Domain { func: "verify", msg: format!("l_max must be positive, got {l_max}") }.into());
    }
    let report = verify(&model, identity, l_max)?;
    let body = json_line(&report)?;
    if let Some(path) = out {
        let params = BTreeMap::from([
            ("surface".to_string(), canonical),
            ("identity".to_string(), json!(identity)),
            ("l_max".to_string(), json!(l_max)),
        ]);
        let manifest = RunManifest::new("verify", params, None);
        write_output(path, &body, &manifest)?;
        let mut csv = Vec::new();
        write_trace_csv(&report, &mut csv)?;
        write_output(&trace_path(path), &csv, &manifest)?;
    }
    print!("{}", String::from_utf8_lossy(&body));
    Ok(())
}

fn cmd_spectrum(surface: &str, l_max: f64, out: Option<&Path>) -> CliResult<()> {
    let (model, canonical) = load_surface(surface)?;
    let spectrum = if model.cusp_count > 0 {
        orthokit::identities::spectrum_of(&model, l_max)?
    } else {
        enumerate_orthospectrum(&model, l_max)?
    };
    let body = json_line(&spectrum)?;
    if let Some(path) = out {
        let params = BTreeMap::from([("surface".to_string(), canonical), ("l_max".to_string(), json!(l_max))]);
        write_output(path, &body, &RunManifest::new("spectrum", params, None))?;
    }
    print!("{}", String::from_utf8_lossy(&body));
    Ok(())
}

fn cmd_mc(surface: &str, samples: u64, seed: u64, max_length: f64, bins: usize, prefix: Option<&Path>) -> CliResult<()> {
    let (model, canonical) = load_surface(surface)?;
    let mut config = FlowConfig::new(model, samples, seed)?;
    config.max_length = max_length;
    let draws = mcflow::sample_lengths(&config)?;
    let moments = mcflow::moments_from_samples(&config.surface, &draws, &[0, 1, 2])?;
    let (a, a_err) = mcflow::hitting_time_from_moments(&config.surface, &moments)?;
    let result = json!({
        "moments": moments,
        "hitting_time": { "estimate": a, "std_error": a_err },
    });
    let body = json_line(&result)?;
    if let Some(prefix) = prefix {
        let params = BTreeMap::from([
            ("surface".to_string(), canonical),
            ("samples".to_string(), json!(samples)),
            ("max_length".to_string(), json!(max_length)),
            ("bins".to_string(), json!(bins)),
        ]);
        let manifest = RunManifest::new("mc", params, Some(seed));
        let name = prefix.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        write_output(&prefix.with_file_name(format!("{name}.moments.json")), &body, &manifest)?;
        let mut csv = Vec::new();
        mcflow::write_histogram_csv(&mcflow::histogram(&draws, bins), &mut csv)?;
        write_output(&prefix.with_file_name(format!("{name}.histogram.csv")), &csv, &manifest)?;
    }
    print!("{}", String::from_utf8_lossy(&body));
    Ok(())
}

/// Rows of the requested figure.
pub fn figure_rows(which: Figure) -> CliResult<(Vec<&'static str>, Vec<Vec<f64>>)> {
    match which {
        Figure::FCurve => {
            let n = 400;
            let rows = (0..n)
                .map(|i| {
                    let a = 0.002 + 0.996 * i as f64 / (n - 1) as f64;
                    Ok(vec![a, kernels::f_closed(a)?])
                })
                .collect::<orthokit::Result<_>>()?;
            Ok((vec!["a", "F"], rows))
        }
        Figure::ClosedVsNumeric => {
            let spec = QuadratureSpec::new(1e-11, 1e-12, 1_000_000)?;
            let rows = (1..20)
                .map(|i| {
                    let a = i as f64 * 0.05;
                    let closed = kernels::f_closed(a)?;
                    let numeric = quadrature::f_k_numeric(a, 2, &spec)?.value;
                    let d = closed - numeric;
                    Ok(vec![a, closed, numeric, d, d.abs()])
                })
                .collect::<orthokit::Result<_>>()?;
            Ok((vec!["a", "F_closed", "F_numeric", "difference", "abs_difference"], rows))
        }
    }
}

fn cmd_figures(which: Figure, out: Option<&Path>) -> CliResult<()> {
    let (header, rows) = figure_rows(which)?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(&header).map_err(io)?;
    for r in &rows {
        w.serialize(r).map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(path) = out {
        let name = match which {
            Figure::FCurve => "F_curve",
            Figure::ClosedVsNumeric => "closed_vs_numeric",
        };
        let params = BTreeMap::from([("which".to_string(), json!(name))]);
        write_output(path, &body, &RunManifest::new("figures", params, None))?;
    }
    print!("{}", String::from_utf8_lossy(&body));
    Ok(())
}
