//! Self-check suites over random (or user-supplied) currents.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use residual_trace_core::algebra::MPoly;
use residual_trace_core::current::WeightedPoints;
use residual_trace_core::prony::{reconstruct, Reconstruction};
use residual_trace_core::radon::{closedness_check, radon};
use residual_trace_core::residue::RationalForm1D;
use residual_trace_core::sample::{random_current, random_weighted_points};
use residual_trace_core::trace::{anti_hankel, hankel, recurrence_check, traces};
use residual_trace_core::algebra::vars_from;
use residual_trace_core::{Current, RatFunc, Rational, ResidualCurrent, TraceSequence};
use serde_json::{json, Value};

use crate::commands::parse_current;
use crate::{read_json, write_json, CliError};

const SUITES: [&str; 5] = ["roundtrip", "recurrence", "determinant", "closedness", "numeric_oracle"];

/// Outcome of one suite on one instance: `None` if skipped.
type Check = (&'static str, Option<Result<(), String>>);

struct InstanceOutcome {
    checks: Vec<Check>,
    max_relative_error: f64,
}

pub fn run(
    seed: u64,
    instances: usize,
    tolerance: f64,
    current: Option<&Path>,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let outcomes: Vec<InstanceOutcome> = match current {
        Some(path) => {
            let c = parse_current(&read_json(Some(path))?)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            vec![check_current(&c, &mut rng, tolerance)]
        }
        None => (0..instances)
            .into_par_iter()
            .map(|i| random_instance(seed, i as u64, tolerance))
            .collect(),
    };

    let mut suites: BTreeMap<&str, (usize, Vec<String>)> = SUITES.iter().map(|s| (*s, (0, Vec::new()))).collect();
    let mut max_err: f64 = 0.0;
    for (i, o) in outcomes.iter().enumerate() {
        max_err = max_err.max(o.max_relative_error);
        for (name, result) in &o.checks {
            let entry = suites.get_mut(name).expect("known suite");
            if let Some(r) = result {
                entry.0 += 1;
                if let Err(msg) = r {
                    entry.1.push(format!("instance {i}: {msg}"));
                }
            }
        }
    }
    let passed = suites.values().all(|(_, f)| f.is_empty());
    let suites_json: serde_json::Map<String, Value> = suites
        .iter()
        .map(|(name, (checked, failures))| {
            (
                name.to_string(),
                json!({ "checked": checked, "failures": failures, "passed": failures.is_empty() }),
            )
        })
        .collect();
    let report = json!({
        "instances": outcomes.len(),
        "numeric_max_relative_error": max_err,
        "passed": passed,
        "seed": seed,
        "suites": suites_json,
        "tolerance": tolerance,
    });
    write_json(output, &report)?;

    eprintln!("verify: seed {seed}, {} instance(s)", outcomes.len());
    for (name, (checked, failures)) in &suites {
        let status = if failures.is_empty() { "ok" } else { "FAILED" };
        eprintln!("  {name:<16} {:>4}/{checked:<4} {status}", checked - failures.len());
    }
    eprintln!("  numeric oracle max relative error {max_err:.3e} (tolerance {tolerance:.1e})");
    if passed {
        Ok(())
    } else {
        Err(CliError::Domain("verify: at least one suite failed".into()))
    }
}

fn random_instance(seed: u64, index: u64, tol: f64) -> InstanceOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let (n, d) = if index % 3 == 2 {
        (2, rng.gen_range(1..=2))
    } else {
        (1, rng.gen_range(1..=4))
    };
    let c = random_current(&mut rng, n, d, 2, 4, false);
    let mut out = check_current(&Current::Residual(c), &mut rng, tol);
    let wd = rng.gen_range(1..=4);
    let wp = random_weighted_points(&mut rng, 1, wd, 1, 3);
    let (det, err) = check_weighted_points(&wp, &mut rng, tol);
    out.checks.push(("determinant", Some(det)));
    if let Ok(e) = err {
        out.max_relative_error = out.max_relative_error.max(e);
    }
    out.checks.push(("numeric_oracle", Some(err.map(|_| ()))));
    out
}

fn check_current(c: &Current, rng: &mut ChaCha8Rng, tol: f64) -> InstanceOutcome {
    let Current::Residual(c) = c else {
        let base = c.vars()[..c.n()].to_vec();
        let zero = TraceSequence::new(vec![
            RatFunc::zero(&vars_from(&base));
            4
        ])
        .expect("nonempty");
        let ok = reconstruct(&zero, 2).map(|r| matches!(r.outcome, Reconstruction::Zero { .. }));
        return InstanceOutcome {
            checks: vec![(
                "roundtrip",
                Some(match ok {
                    Ok(true) => Ok(()),
                    _ => Err("zero traces did not map to the zero current".into()),
                }),
            )],
            max_relative_error: 0.0,
        };
    };
    let d = c.d();
    let n = c.n();
    let t = traces(c, 3 * d + 2);
    let mut checks = Vec::new();

    let head = TraceSequence::new(t.entries()[..2 * d + 2].to_vec()).expect("nonempty");
    checks.push((
        "roundtrip",
        Some(match reconstruct(&head, d + 2) {
            Ok(r) if r.outcome == Reconstruction::Current(c.clone()) => Ok(()),
            Ok(r) => Err(format!("reconstructed degree {} differs from the input current", r.degree)),
            Err(e) => Err(e.to_string()),
        }),
    ));

    checks.push((
        "recurrence",
        Some(match recurrence_check(&t, c.p()) {
            Ok(v) if v.is_empty() => Ok(()),
            Ok(v) => Err(format!("recurrence fails at k = {v:?}")),
            Err(e) => Err(e.to_string()),
        }),
    ));

    checks.push(("determinant", Some(check_resultant_identity(c, &t))));

    checks.push((
        "closedness",
        Some(match radon(c, 2 * d + n) {
            Ok(u) => {
                let bad = closedness_check(&u, n, 2 * d);
                if bad.is_empty() {
                    Ok(())
                } else {
                    Err(format!("closedness fails at (i, k) = {bad:?}"))
                }
            }
            Err(e) => Err(e.to_string()),
        }),
    ));

    let (res, err) = match trace_oracle(c, &t.entries()[..2 * d], rng, tol) {
        Ok(e) => (Ok(()), e),
        Err((msg, e)) => (Err(msg), e),
    };
    checks.push(("numeric_oracle", Some(res)));
    InstanceOutcome {
        checks,
        max_relative_error: err,
    }
}

fn sign(d: usize) -> i64 {
    if (d * (d.saturating_sub(1)) / 2) % 2 == 1 {
        -1
    } else {
        1
    }
}

/// `det(u_{i+j}) = (-1)^{d(d-1)/2} Res_y(P, r)`.
fn check_resultant_identity(c: &ResidualCurrent, t: &TraceSequence) -> Result<(), String> {
    let d = c.d();
    let det = hankel(t, d).and_then(|h| Ok(h.determinant()?)).map_err(|e| e.to_string())?;
    let expect = RatFunc::from_poly(c.numerator_resultant().scale(&Rational::from_integer(sign(d).into())));
    if det == expect {
        Ok(())
    } else {
        Err(format!("Hankel determinant {det} differs from the signed resultant {expect}"))
    }
}

fn check_weighted_points(wp: &WeightedPoints, rng: &mut ChaCha8Rng, tol: f64) -> (Result<(), String>, Result<f64, String>) {
    let c = match ResidualCurrent::from_weighted_points(wp, "y") {
        Ok(c) => c,
        Err(e) => return (Err(e.to_string()), Err(e.to_string())),
    };
    let d = c.d();
    let t = traces(&c, 2 * d);
    let expect = wp.vandermonde_weight_product();
    let det = (|| -> Result<(), String> {
        let h = hankel(&t, d).map_err(|e| e.to_string())?.determinant().map_err(|e| e.to_string())?;
        let m = anti_hankel(&t, d).map_err(|e| e.to_string())?.determinant().map_err(|e| e.to_string())?;
        if h != expect {
            return Err(format!("det H = {h}, expected {expect}"));
        }
        if m != expect.scale(&Rational::from_integer(sign(d).into())) {
            return Err(format!("anti-ordered determinant {m} has the wrong sign"));
        }
        Ok(())
    })();
    (det, pointwise_oracle(&c, wp, rng, tol))
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// Exact traces against contour integrals at 20 random points.
fn trace_oracle(
    c: &ResidualCurrent,
    u: &[RatFunc],
    rng: &mut ChaCha8Rng,
    tol: f64,
) -> Result<f64, (String, f64)> {
    let y = c.n();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x = random_point(rng, c.n());
        for (k, uk) in u.iter().enumerate() {
            let num = c.r() * &MPoly::var(c.vars(), y).pow(k as u32);
            let form = RationalForm1D::new(num, c.p().clone()).map_err(|e| (e.to_string(), worst))?;
            let spec = form.tight_contour(&x).map_err(|e| (e.to_string(), worst))?;
            let numeric = form.contour_oracle(&x, &spec).map_err(|e| (e.to_string(), worst))?;
            let exact = uk.eval_complex(&x);
            let rel = (exact - numeric).norm() / exact.norm().max(1.0);
            worst = worst.max(rel);
            if rel > tol {
                return Err((format!("u_{k} at {x:?}: exact {exact}, contour {numeric}"), worst));
            }
        }
    }
    Ok(worst)
}

/// Numeric residues at the simple poles `y_i(x)` against the weights `f_i(x)`.
fn pointwise_oracle(c: &ResidualCurrent, wp: &WeightedPoints, rng: &mut ChaCha8Rng, tol: f64) -> Result<f64, String> {
    let form = RationalForm1D::new(c.r().clone(), c.p().clone()).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x = random_point(rng, c.n());
        let roots: Vec<(Complex64, Complex64)> = wp
            .points()
            .iter()
            .map(|(yi, fi)| (yi.eval_complex(&x), fi.eval_complex(&x)))
            .collect();
        let separated = roots
            .iter()
            .enumerate()
            .all(|(i, a)| roots[i + 1..].iter().all(|b| (a.0 - b.0).norm() > 0.05));
        if !separated {
            continue;
        }
        let numeric = form.pointwise_residues(&x).map_err(|e| e.to_string())?;
        for (yi, fi) in &roots {
            let nearest = numeric
                .iter()
                .min_by(|a, b| (a.pole - yi).norm().total_cmp(&(b.pole - yi).norm()))
                .ok_or("no numeric poles")?;
            let rel = (nearest.residue - fi).norm() / fi.norm().max(1.0);
            worst = worst.max(rel);
            if rel > tol {
                return Err(format!("residue at {yi}: exact {fi}, numeric {}", nearest.residue));
            }
        }
    }
    Ok(worst)
}
