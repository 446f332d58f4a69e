//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.

use std::f64::consts::PI;
use std::process::Command;

use orthokit::geom::{build_pants, enumerate_orthospectrum, enumerate_orthospectrum_with, geodesic_distance, l_of_a, EnumerationOptions};
use orthokit::identities::{spectrum_of, verify, IdentityReport};
use orthokit::kernels::{avg_hitting_time, ball_volume, basmajian_term, f_closed, ideal_triangle_mgf, ideal_triangle_moment};
use orthokit::mcflow::{hitting_time_from_moments, moments_from_samples, sample_lengths, FlowConfig};
use orthokit::quadrature::{f_k_numeric, f_nk_numeric, integrate_to_infinity, QuadratureSpec};
use orthokit::specfun::{li3, rogers_dilog, ZETA2, ZETA3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(n: u32, pass: bool, detail: &str) {
    println!("criterion {n}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

/// Golden-section search for the maximum of a unimodal function.
fn argmax(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-12 {
        let (x1, x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if f(x1) < f(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_01_closed_form_endpoints_and_maximum() {
    let tol = 1e-6;
    let f0 = f_closed(1e-8).unwrap();
    let f1 = f_closed(1.0 - 1e-8).unwrap();
    let e0 = f0.abs();
    let e1 = (f1 - 12.0 * ZETA3).abs();
    let a_star = argmax(|a| f_closed(a).unwrap(), 0.5, 0.95);
    let f_star = f_closed(a_star).unwrap();
    let endpoints = e0 < tol && e1 < tol;
    let maximum = (a_star - 0.754493).abs() < 5e-4 && (f_star - 17.9804).abs() < 1e-3;
    verdict(
        1,
        endpoints && maximum,
        &format!(
            "|F(1e-8)| = {e0:.3e}, |F(1-1e-8) - 12 zeta(3)| = {e1:.3e} (tolerance {tol:e}); \
             argmax {a_star:.7} value {f_star:.7}; endpoints {}, maximum {}",
            if endpoints { "ok" } else { "outside tolerance" },
            if maximum { "ok" } else { "off" }
        ),
    );
}

#[test]
fn criterion_02_figure_difference() {
    let spec = QuadratureSpec::new(1e-11, 1e-12, 1_000_000).unwrap();
    let mut worst: f64 = 0.0;
    for i in 1..20 {
        let a = 0.05 * i as f64;
        let d = (f_closed(a).unwrap() - f_k_numeric(a, 2, &spec).unwrap().value).abs();
        worst = worst.max(d);
    }
    verdict(2, worst < 1e-6, &format!("max |F_closed - F_2 numeric| over a = 0.05..0.95 is {worst:.3e}"));
}

#[test]
fn criterion_03_quadrature_anchors() {
    let spec = QuadratureSpec::default();
    let (mut e0, mut e1): (f64, f64) = (0.0, 0.0);
    for a in [0.1, 0.5, 0.9] {
        e0 = e0.max((f_k_numeric(a, 0, &spec).unwrap().value + 4.0 * (-a).ln_1p()).abs());
        e1 = e1.max((f_k_numeric(a, 1, &spec).unwrap().value - 8.0 * rogers_dilog(a).unwrap()).abs());
    }
    verdict(3, e0 < 1e-9 && e1 < 1e-8, &format!("F_0 error {e0:.3e} (< 1e-9), F_1 error {e1:.3e} (< 1e-8)"));
}

#[test]
fn criterion_04_special_function_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_501);
    let r = |x: f64| rogers_dilog(x).unwrap();
    let l3 = |x: f64| li3(x).unwrap();
    let unit = |rng: &mut ChaCha8Rng| rng.gen_range(f64::EPSILON..1.0);
    let positive = |rng: &mut ChaCha8Rng| rng.gen_range(-6.0f64..6.0).exp();
    type Check<'a> = (&'a str, Box<dyn Fn(&mut ChaCha8Rng) -> f64 + 'a>);
    let checks: Vec<Check> = vec![
        ("euler reflection", Box::new(|g| {
            let x = unit(g);
            r(x) + r(1.0 - x) - ZETA2
        })),
        ("euler inversion", Box::new(|g| {
            let x = positive(g);
            r(-x) + r(-1.0 / x) + ZETA2
        })),
        ("landen", Box::new(|g| {
            let x = unit(g);
            r(-x / (1.0 - x)) + r(x)
        })),
        ("abel", Box::new(|g| {
            let (x, y) = (unit(g), unit(g));
            let d = 1.0 - x * y;
            r(x) + r(y) - r(x * y) - r(x * (1.0 - y) / d) - r(y * (1.0 - x) / d)
        })),
        ("duplication", Box::new(|g| {
            let x = unit(g);
            let li2 = |t: f64| orthokit::specfun::li2(t).unwrap();
            li2(x) + li2(-x) - 0.5 * li2(x * x)
        })),
        ("tri1", Box::new(|g| {
            let x = unit(g);
            l3(x) + l3(-x) - 0.25 * l3(x * x)
        })),
        ("tri2", Box::new(|g| {
            let z = positive(g);
            let l = z.ln();
            l3(-z) - l3(-1.0 / z) + l.powi(3) / 6.0 + ZETA2 * l
        })),
        ("tri3 (sign-corrected)", Box::new(|g| {
            let z = unit(g);
            let l = z.ln();
            let rhs = ZETA3 + l.powi(3) / 6.0 + ZETA2 * l - 0.5 * l * l * (-z).ln_1p();
            l3(z) + l3(1.0 - z) + l3(1.0 - 1.0 / z) - rhs
        })),
    ];
    let mut worst = Vec::new();
    for (name, f) in &checks {
        let m = (0..1000).map(|_| f(&mut rng).abs()).fold(0.0, f64::max);
        worst.push(format!("{name} {m:.1e}"));
        if m >= 1e-12 {
            verdict(4, false, &worst.join(", "));
        }
    }
    verdict(4, true, &format!("max residuals over 1000 points: {}", worst.join(", ")));
}

#[test]
fn criterion_05_ideal_triangle() {
    let empty = orthokit::geom::OrthoSpectrum::empty(1.0);
    let a = avg_hitting_time(&empty, 3, 0.5).unwrap();
    // exact up to rounding: the two expressions differ only in operation order
    let want = 9.0 * ZETA3 / (2.0 * PI * PI);
    let a_ok = (a - want).abs() <= 4.0 * f64::EPSILON * want;
    let spec = QuadratureSpec::new(1e-12, 1e-13, 10_000).unwrap();
    let weighted = |x: f64, w: f64| if x > 350.0 { 0.0 } else { w * 12.0 * x * x / x.sinh().powi(2) };
    let mut moment_err: f64 = 0.0;
    for k in 0..3 {
        let num = integrate_to_infinity(|x| weighted(x, x.powi(k)), 0.0, &spec).unwrap().value;
        moment_err = moment_err.max((ideal_triangle_moment(k as u32).unwrap() - num).abs());
    }
    let mut mgf_err: f64 = 0.0;
    for t in [-1.0, 0.5, 1.0] {
        let num = integrate_to_infinity(|x| weighted(x, (t * x).exp()), 0.0, &spec).unwrap().value;
        mgf_err = mgf_err.max((ideal_triangle_mgf(t).unwrap() - num).abs());
    }
    verdict(
        5,
        a_ok && moment_err < 1e-9 && mgf_err < 1e-8,
        &format!("A = {a} vs {want} (within 4 ulp: {a_ok}), moment error {moment_err:.2e}, mgf error {mgf_err:.2e}"),
    );
}

#[test]
fn criterion_06_crofton_consistency() {
    let spec = QuadratureSpec::default();
    let mut k2_err: f64 = 0.0;
    for a in [0.1, 0.5, 0.9] {
        let ratio = f_k_numeric(a, 0, &spec).unwrap().value / basmajian_term(2, l_of_a(a).unwrap()).unwrap();
        k2_err = k2_err.max((ratio - 4.0).abs());
    }
    let spec3 = QuadratureSpec::new(1e-9, 1e-10, 1_000_000).unwrap();
    let mut f3_err: f64 = 0.0;
    for l in [0.5f64, 1.0, 2.0] {
        let r = (1.0 / (0.5 * l).tanh()).ln();
        let want = PI * ball_volume(2, r).unwrap();
        f3_err = f3_err.max((f_nk_numeric(3, 0, l, &spec3).unwrap().value - want).abs());
    }
    verdict(6, k2_err < 1e-6 && f3_err < 1e-6, &format!("|F_0/term - 4| = {k2_err:.2e}, |F_30 - pi V_2| = {f3_err:.2e}"));
}

#[test]
fn criterion_07_minimal_ortholengths() {
    let mut notes = Vec::new();
    let mut pass = true;
    for cuffs in [[1.0, 1.0, 1.0], [1.0, 2.0, 3.0]] {
        let p = build_pants(cuffs[0], cuffs[1], cuffs[2]).unwrap();
        let half = cuffs.map(|l| 0.5 * l);
        // cosine rule for the seam joining cuffs i and j
        let rule = |i: usize, j: usize, k: usize| {
            ((half[k].cosh() + half[i].cosh() * half[j].cosh()) / (half[i].sinh() * half[j].sinh())).acosh()
        };
        let mut predicted = [rule(1, 2, 0), rule(2, 0, 1), rule(0, 1, 2)];
        predicted.sort_by(f64::total_cmp);
        let spectrum = enumerate_orthospectrum(&p, predicted[2] + 0.5).unwrap();
        let smallest: Vec<f64> =
            spectrum.lengths.iter().flat_map(|&(l, m)| std::iter::repeat(l).take(m as usize)).take(3).collect();
        let err = smallest.iter().zip(&predicted).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let wider = enumerate_orthospectrum_with(&p, 8.0, &EnumerationOptions { extra_radius: 2.0, ..Default::default() }).unwrap();
        let base = enumerate_orthospectrum(&p, 8.0).unwrap();
        let stable = base.lengths.len() == wider.lengths.len()
            && base.lengths.iter().zip(&wider.lengths).all(|(a, b)| a.1 == b.1 && (a.0 - b.0).abs() < 1e-10);
        let ok = err < 1e-9 && stable;
        pass &= ok;
        let h = p.hexagon.as_ref().unwrap();
        let self_ortho = 2.0 * geodesic_distance(&h.cuffs[2], &h.seams[2]).unwrap();
        notes.push(format!(
            "{cuffs:?}: smallest {smallest:.10?} vs cosine rule {predicted:.10?} (max diff {err:.1e}), stable {stable}; \
             cuff-3 self-orthogeodesic 2 d(c3, s3) = {self_ortho:.10}"
        ));
    }
    verdict(7, pass, &notes.join("; "));
}

fn convergence(r: &IdentityReport, cutoffs: &[f64]) -> (bool, bool, bool, bool, Vec<f64>) {
    let sums: Vec<f64> = cutoffs
        .iter()
        .map(|c| r.trace.iter().find(|p| (p.l_max - c).abs() < 1e-12).expect("trace point").partial_sum)
        .collect();
    let increasing = sums.windows(2).all(|w| w[0] < w[1]);
    let bounded = sums.iter().all(|s| *s <= r.predicted);
    let close = (sums.last().unwrap() - r.predicted).abs() / r.predicted < 0.02;
    let gaps: Vec<f64> = sums.windows(2).map(|w| w[1] - w[0]).collect();
    let shrinking = gaps.windows(2).all(|g| g[1] < g[0]);
    (increasing, bounded, close, shrinking, sums)
}

#[test]
fn criterion_08_identity_convergence() {
    let p = build_pants(1.0, 1.0, 1.0).unwrap();
    let cutoffs = [6.0, 8.0, 10.0, 12.0];
    let mut pass = true;
    let mut notes = Vec::new();
    for name in ["basmajian", "rogers", "moment1"] {
        let r = verify(&p, name, 12.0).unwrap();
        let (inc, bounded, close, shrinking, sums) = convergence(&r, &cutoffs);
        pass &= inc && bounded && close && shrinking;
        let rel = (sums[3] - r.predicted).abs() / r.predicted;
        notes.push(format!(
            "{name}: sums {sums:.4?} -> {:.4}, increasing {inc}, bounded {bounded}, shrinking gaps {shrinking}, rel error at 12 {:.1}%",
            r.predicted,
            100.0 * rel
        ));
    }
    verdict(8, pass, &notes.join("; "));
}

#[test]
fn criterion_09_monte_carlo() {
    let p = build_pants(1.0, 1.0, 1.0).unwrap();
    let config = FlowConfig::new(p.clone(), 100_000, 42).unwrap();
    let samples = sample_lengths(&config).unwrap();
    let m = moments_from_samples(&p, &samples, &[1, 2]).unwrap();
    let (a, a_se) = hitting_time_from_moments(&p, &m).unwrap();
    let spectrum = spectrum_of(&p, 12.0).unwrap();
    let m2_trunc = orthokit::identities::spectrum_moment(
        &spectrum,
        2,
        orthokit::identities::MomentMethod::ClosedForm,
        &QuadratureSpec::default(),
    )
    .unwrap();
    let a_closed = avg_hitting_time(&spectrum, 0, 1.0).unwrap();
    let z1 = (m.estimates[0] - 4.0 * PI * PI) / m.std_errors[0];
    let z2 = (m.estimates[1] - m2_trunc) / m.std_errors[1];
    let za = (a - a_closed) / a_se;
    let capped = m.capped_count as f64 / m.samples as f64;
    let pass = z1.abs() <= 3.0 && z2.abs() <= 3.0 && za.abs() <= 3.0 && capped < 1e-3;
    verdict(
        9,
        pass,
        &format!(
            "M1 {:.4} vs {:.4} ({z1:+.2} se); M2 {:.2} vs truncation {m2_trunc:.2} ({z2:+.1} se); \
             A {a:.4} vs {a_closed:.4} ({za:+.1} se); capped fraction {capped:e}",
            m.estimates[0],
            4.0 * PI * PI,
            m.estimates[1]
        ),
    );
}

#[test]
fn criterion_10_degenerate_guards() {
    let bin = env!("CARGO_BIN_EXE_orthokit");
    let tri = r#"{"type":"ideal_triangle"}"#;
    let bas = Command::new(bin).args(["verify", tri, "basmajian", "1"]).output().unwrap();
    let rog = Command::new(bin).args(["verify", tri, "rogers", "1"]).output().unwrap();
    let report: serde_json::Value = serde_json::from_slice(&rog.stdout).unwrap_or_default();
    let zero = report["partial_sum"].as_f64() == Some(0.0) && report["predicted"].as_f64() == Some(0.0);
    let pass = bas.status.code() == Some(4) && rog.status.success() && zero;
    verdict(
        10,
        pass,
        &format!("basmajian exit {:?}, rogers exit {:?} with {} = {}", bas.status.code(), rog.status.code(), report["partial_sum"], report["predicted"]),
    );
}
