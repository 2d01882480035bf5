use std::path::Path;

use residual_trace_core::current::CurrentJsonError;
use residual_trace_core::prony::{continue_current, reconstruct_with_fiber, ReconstructionReport, SeriesSample};
use residual_trace_core::radon::{closedness_check, radon as radon_transform, LineChart};
use residual_trace_core::trace::traces;
use residual_trace_core::{Current, Error, RatFunc, SchemaError, TraceSequence};
use serde_json::{json, Value};

use crate::args::Io;
use crate::{domain, read_json, write_json, CliError};

pub fn parse_current(v: &Value) -> Result<Current, CliError> {
    Current::from_json(v).map_err(|e| match e {
        CurrentJsonError::Schema(s) => CliError::Schema(s),
        CurrentJsonError::Domain(d) => domain(d),
    })
}

fn base_vars_of(c: &Current) -> Vec<String> {
    let vars = c.vars();
    vars[..vars.len() - 1].to_vec()
}

pub fn trace(io: &Io, count: usize) -> Result<(), CliError> {
    let c = parse_current(&read_json(io.input.as_deref())?)?;
    let t = match &c {
        Current::Residual(c) => traces(c, count),
        Current::Zero { .. } => {
            let base = residual_trace_core::algebra::vars_from(&base_vars_of(&c));
            TraceSequence::new(vec![RatFunc::zero(&base); count]).map_err(domain)?
        }
    };
    write_json(io.output.as_deref(), &t.to_json())
}

fn emit_report(report: &ReconstructionReport, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => write_json(Some(p), &report.to_json()),
        None => {
            eprintln!(
                "reconstructed degree {} with {} residual violation(s)",
                report.degree, report.residual_violations
            );
            Ok(())
        }
    }
}

fn finish_reconstruction(io: &Io, report: &ReconstructionReport, report_path: Option<&Path>) -> Result<(), CliError> {
    emit_report(report, report_path)?;
    if report.residual_violations > 0 {
        return Err(CliError::Domain(format!(
            "prony-reconstruct: reconstruction reproduces the input only up to {} violation(s)",
            report.residual_violations
        )));
    }
    match report.current() {
        Some(c) => write_json(io.output.as_deref(), &c.to_json()),
        None => {
            if report_path.is_none() {
                eprintln!("{}", residual_trace_core::algebra::json::canonical_string(&report.to_json()));
            }
            Err(CliError::Domain(
                "prony-reconstruct: the recurrence has meromorphic (non-polynomial) coefficients; \
                 no polynomial current reproduces these traces"
                    .into(),
            ))
        }
    }
}

pub fn reconstruct(io: &Io, dmax: usize, fiber: &str, report_path: Option<&Path>) -> Result<(), CliError> {
    let t = TraceSequence::from_json(&read_json(io.input.as_deref())?)?;
    if t.vars().iter().any(|v| v == fiber) {
        return Err(CliError::Usage(format!(
            "fiber variable `{fiber}` is already a base variable; pick another with --fiber"
        )));
    }
    let report = reconstruct_with_fiber(&t, dmax, fiber).map_err(domain)?;
    finish_reconstruction(io, &report, report_path)
}

pub fn radon(io: &Io, kmax: usize, check_closedness: bool) -> Result<(), CliError> {
    let c = parse_current(&read_json(io.input.as_deref())?)?;
    let n = c.n();
    let chart = LineChart::new(n);
    let u = match &c {
        Current::Residual(c) => radon_transform(c, kmax).map_err(domain)?,
        Current::Zero { .. } => vec![RatFunc::zero(chart.vars()); kmax + 1],
    };
    let mut out = json!({
        "u_ab": u.iter().map(residual_trace_core::algebra::json::ratfunc_to_json).collect::<Vec<_>>(),
        "vars": chart.vars().to_vec(),
    });
    let violations = if check_closedness {
        closedness_check(&u, n, kmax)
    } else {
        Vec::new()
    };
    if check_closedness {
        out["closedness_violations"] = json!(violations.iter().map(|&(i, k)| [i, k]).collect::<Vec<_>>());
    }
    write_json(io.output.as_deref(), &out)?;
    if let Some((i, k)) = violations.first() {
        return Err(CliError::Domain(format!(
            "radon-transform: closedness fails for i = {i}, k = {k} ({} violation(s))",
            violations.len()
        )));
    }
    Ok(())
}

fn parse_series(v: &Value) -> Result<Vec<SeriesSample>, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| SchemaError::new("$", "expected an object with a \"series\" array"))?;
    if let Some(key) = obj.keys().find(|k| *k != "series") {
        return Err(SchemaError::new(key.clone(), "unknown field").into());
    }
    let items = obj
        .get("series")
        .ok_or_else(|| SchemaError::new("series", "missing field"))?
        .as_array()
        .ok_or_else(|| SchemaError::new("series", "must be an array"))?;
    Ok(items
        .iter()
        .enumerate()
        .map(|(k, s)| SeriesSample::from_json(s, &format!("series[{k}]")))
        .collect::<Result<Vec<_>, _>>()?)
}

pub fn continue_traces(
    io: &Io,
    dmax: usize,
    max_num_deg: usize,
    max_den_deg: usize,
    report_path: Option<&Path>,
) -> Result<(), CliError> {
    let series = parse_series(&read_json(io.input.as_deref())?)?;
    let report = continue_current(&series, dmax, max_num_deg, max_den_deg).map_err(|e| domain(Error::from(e)))?;
    finish_reconstruction(io, &report, report_path)
}
