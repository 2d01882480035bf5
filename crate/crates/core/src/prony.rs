//! Inverting the trace map.
//!
//! Given moments `u_0, u_1, ...` of an unknown current, the fiber polynomial
//! `P = y^d + a_1 y^{d-1} + ... + a_d` is the minimal annihilating recurrence
//! of the sequence, found from the Hankel system
//! `Σ_j a_{d-j} u_{k+j} = -u_{k+d}` (k < d); the numerator follows from
//! `r = Σ_j y^{d-1-j} (u_j + a_1 u_{j-1} + ... + a_j u_0)`.
//!
//! For traces known only through Taylor coefficients at a base point,
//! [`detect_rational`] recovers a rational function of bounded degree
//! (a Padé approximant checked against every sample) and
//! [`continue_current`] chains that with [`reconstruct`].

use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::json::ratfunc_to_json;
use crate::algebra::rational::{format_rational, parse_rational};
use crate::algebra::{vars_from, AlgebraError, MPoly, RatFunc, Rational, UniPoly, Vars};
use crate::current::{Current, CurrentError, ResidualCurrent};
use crate::error::SchemaError;
use crate::trace::{hankel, monic_moments, recurrence_violations, TraceError, TraceSequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("no degree d <= {d_max} explains the sequence (tried up to d = {tried})")]
    NoConsistentDegree { d_max: usize, tried: usize },
    #[error("need at least {needed} coefficients, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("reconstructed pair is not a valid current: {0}")]
    InvalidReconstruction(CurrentError),
    #[error("Padé system is degenerate: every candidate denominator vanishes at the base point")]
    DegeneratePade,
    #[error("trace u_{k} is not continuable within the degree bounds: {reason}")]
    NotContinuable { k: usize, reason: String },
    #[error("all series must share one base point")]
    MixedBasePoints,
    #[error("no series given")]
    NoSeries,
    #[error("series data is only supported over a single base variable")]
    NotUnivariate,
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// What the traces reconstruct to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reconstruction {
    /// Every trace vanishes.
    Zero { vars: Vars },
    /// A current with polynomial coefficients.
    Current(ResidualCurrent),
    /// The annihilating recurrence exists but some coefficient of `P` or `r`
    /// is a genuine rational function of the base variables. `a[i]` is
    /// `a_{i+1}` and `r[j]` is the coefficient of `y^j`.
    Meromorphic { a: Vec<RatFunc>, r: Vec<RatFunc> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructionReport {
    pub degree: usize,
    pub outcome: Reconstruction,
    /// Entries of the input sequence that the result fails to reproduce.
    pub residual_violations: usize,
}

impl ReconstructionReport {
    pub fn is_meromorphic(&self) -> bool {
        matches!(self.outcome, Reconstruction::Meromorphic { .. })
    }

    /// The reconstructed current, unless the coefficients are meromorphic.
    pub fn current(&self) -> Option<Current> {
        match &self.outcome {
            Reconstruction::Zero { vars } => Some(Current::Zero { vars: vars.clone() }),
            Reconstruction::Current(c) => Some(Current::Residual(c.clone())),
            Reconstruction::Meromorphic { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "degree": self.degree,
            "residual_violations": self.residual_violations,
            "meromorphic_coefficients": self.is_meromorphic(),
        });
        match &self.outcome {
            Reconstruction::Meromorphic { a, r } => {
                v["a"] = a.iter().map(ratfunc_to_json).collect();
                v["r_coeffs"] = r.iter().map(ratfunc_to_json).collect();
            }
            _ => v["current"] = self.current().expect("not meromorphic").to_json(),
        }
        v
    }
}

/// Smallest `d <= d_max` whose Hankel system is nonsingular and whose
/// recurrence annihilates every available entry; 0 for the zero sequence.
///
/// A candidate needs `2d` entries, so `d_max` is effectively capped at
/// `len(t) / 2`.
pub fn detect_degree(t: &TraceSequence, d_max: usize) -> Result<usize, ReconstructError> {
    detect(t, d_max).map(|(d, _)| d)
}

fn detect(t: &TraceSequence, d_max: usize) -> Result<(usize, Vec<RatFunc>), ReconstructError> {
    if t.is_zero() {
        return Ok((0, Vec::new()));
    }
    let limit = d_max.min(t.len() / 2);
    let probe = Probe::new(t);
    for d in 1..=limit {
        if probe.as_ref().is_some_and(|p| p.rules_out(d)) {
            continue;
        }
        let rhs: Vec<RatFunc> = t.entries()[d..2 * d].iter().map(|u| -u).collect();
        let sol = match hankel(t, d)?.solve(&rhs) {
            Ok(sol) => sol,
            Err(AlgebraError::Singular) => continue,
            Err(e) => return Err(e.into()),
        };
        // sol[j] multiplies u_{k+j}, i.e. it is a_{d-j}
        let a: Vec<RatFunc> = sol.into_iter().rev().collect();
        if recurrence_violations(t, &a)?.is_empty() {
            return Ok((d, a));
        }
    }
    Err(ReconstructError::NoConsistentDegree { d_max, tried: limit })
}

/// The sequence specialized at a rational point, used to discard wrong
/// degrees cheaply. If the specialized Hankel matrix is nonsingular, its
/// solution is the specialization of the symbolic one, so a failing
/// specialized recurrence proves the symbolic recurrence fails too.
struct Probe {
    u: Vec<Rational>,
}

impl Probe {
    fn new(t: &TraceSequence) -> Option<Self> {
        let n = t.vars().len();
        (0..4).find_map(|attempt| {
            let point: Vec<Rational> = (0..n)
                .map(|i| Rational::new((3 + 2 * i as i64 + 5 * attempt).into(), (2 + attempt).into()))
                .collect();
            t.entries()
                .iter()
                .map(|u| u.eval(&point))
                .collect::<Option<Vec<_>>>()
                .map(|u| Probe { u })
        })
    }

    fn rules_out(&self, d: usize) -> bool {
        let u = &self.u;
        let m: Vec<Vec<Rational>> = (0..d).map(|i| u[i..i + d].to_vec()).collect();
        let rhs: Vec<Rational> = u[d..2 * d].iter().map(|v| -v).collect();
        let Some(c) = solve_rational(m, rhs) else {
            return false;
        };
        (0..u.len() - d).any(|k| {
            let s = (0..d).fold(u[k + d].clone(), |acc, j| acc + &c[j] * &u[k + j]);
            !s.is_zero()
        })
    }
}

/// Gaussian elimination over Q; `None` if singular.
fn solve_rational(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(p, k);
        rhs.swap(p, k);
        let inv = m[k][k].recip();
        let pivot = m[k].clone();
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] * &inv;
            for (mij, mkj) in m[i][k..].iter_mut().zip(&pivot[k..]) {
                *mij -= &f * mkj;
            }
            let delta = &f * &rhs[k];
            rhs[i] -= delta;
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

/// Reconstructs the minimal current whose traces are `t`, naming the fiber
/// variable `y` (or `y0`, `y1`, ... if `y` is a base variable).
pub fn reconstruct(t: &TraceSequence, d_max: usize) -> Result<ReconstructionReport, ReconstructError> {
    let fiber = default_fiber_name(t.vars());
    reconstruct_with_fiber(t, d_max, &fiber)
}

pub fn reconstruct_with_fiber(
    t: &TraceSequence,
    d_max: usize,
    fiber: &str,
) -> Result<ReconstructionReport, ReconstructError> {
    let base = t.vars().clone();
    let mut names: Vec<String> = base.to_vec();
    names.push(fiber.to_string());
    let vars = vars_from(&names);
    let (d, a) = detect(t, d_max)?;
    if d == 0 {
        return Ok(ReconstructionReport {
            degree: 0,
            outcome: Reconstruction::Zero { vars },
            residual_violations: 0,
        });
    }
    let u = t.entries();
    // coefficient of y^{d-1-j} is u_j + a_1 u_{j-1} + ... + a_j u_0
    let mut r_high: Vec<RatFunc> = Vec::with_capacity(d);
    for j in 0..d {
        let s = (1..=j).fold(u[j].clone(), |acc, i| &acc + &(&a[i - 1] * &u[j - i]));
        r_high.push(s);
    }
    let r: Vec<RatFunc> = r_high.into_iter().rev().collect();
    // P = y^d + Σ a_i y^{d-i}: the coefficient of y^j is a_{d-j}
    let p_low: Vec<RatFunc> = (0..d).map(|j| a[d - 1 - j].clone()).collect();
    let replay = monic_moments(&p_low, &r, t.len());
    let residual_violations = replay.iter().zip(u).filter(|(x, y)| x != y).count();

    let polys: Option<(Vec<MPoly>, Vec<MPoly>)> = p_low
        .iter()
        .map(|c| c.as_poly().cloned())
        .collect::<Option<Vec<_>>>()
        .zip(r.iter().map(|c| c.as_poly().cloned()).collect::<Option<Vec<_>>>());
    let outcome = match polys {
        None => Reconstruction::Meromorphic { a, r },
        Some((pc, rc)) => {
            let y = vars.len() - 1;
            let lift = |c: &MPoly| c.reindex(&vars).expect("base variables embed");
            let mut pc: Vec<MPoly> = pc.iter().map(lift).collect();
            pc.push(MPoly::one(&vars));
            let rc: Vec<MPoly> = rc.iter().map(lift).collect();
            let p = MPoly::from_coeffs_in(&vars, y, &pc);
            let rp = MPoly::from_coeffs_in(&vars, y, &rc);
            let (c, notes) =
                ResidualCurrent::validate(p, rp).map_err(ReconstructError::InvalidReconstruction)?;
            if let Some(note) = notes.first() {
                return Err(ReconstructError::InvalidReconstruction(CurrentError::Algebra(
                    AlgebraError::Dimension(format!("reconstruction was not minimal: {note:?}")),
                )));
            }
            Reconstruction::Current(c)
        }
    };
    Ok(ReconstructionReport {
        degree: d,
        outcome,
        residual_violations,
    })
}

fn default_fiber_name(base: &Vars) -> String {
    std::iter::once("y".to_string())
        .chain((0..).map(|i| format!("y{i}")))
        .find(|name| !base.iter().any(|v| v == name))
        .expect("infinitely many candidates")
}

/// Taylor coefficients of a single-variable trace at a base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSample {
    pub base_point: Rational,
    pub coefficients: Vec<Rational>,
}

impl SeriesSample {
    pub fn new(base_point: Rational, coefficients: Vec<Rational>) -> Result<Self, ReconstructError> {
        if coefficients.is_empty() {
            return Err(ReconstructError::TooShort { needed: 1, got: 0 });
        }
        Ok(SeriesSample {
            base_point,
            coefficients,
        })
    }

    /// `{"x0":"1","coeffs":["1","-1/2",...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "x0": format_rational(&self.base_point),
            "coeffs": self.coefficients.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Self, SchemaError> {
        let obj = v
            .as_object()
            .ok_or_else(|| SchemaError::new(path, "series must be an object"))?;
        for key in obj.keys() {
            if key != "x0" && key != "coeffs" {
                return Err(SchemaError::new(format!("{path}.{key}"), "unknown field"));
            }
        }
        let x0 = rational_field(obj.get("x0"), &format!("{path}.x0"))?;
        let coeffs = obj
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| SchemaError::new(format!("{path}.coeffs"), "must be an array"))?
            .iter()
            .enumerate()
            .map(|(i, c)| rational_field(Some(c), &format!("{path}.coeffs[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        SeriesSample::new(x0, coeffs).map_err(|e| SchemaError::new(format!("{path}.coeffs"), e.to_string()))
    }
}

fn rational_field(v: Option<&Value>, path: &str) -> Result<Rational, SchemaError> {
    match v {
        Some(Value::String(s)) => parse_rational(s).map_err(|e| SchemaError::new(path, e)),
        Some(Value::Number(n)) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        Some(_) => Err(SchemaError::new(path, "must be an integer or a \"p/q\" string")),
        None => Err(SchemaError::new(path, "missing field")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RationalVerdict {
    /// The unique bounded-degree rational function matching every coefficient.
    Rational(RatFunc),
    /// No such function; the Padé candidate (if any) first disagrees at `index`.
    NotRational { index: Option<usize> },
}

/// Recovers `p/q` with `deg p <= max_num_deg`, `deg q <= max_den_deg` and
/// `q(x0) != 0` from Taylor coefficients at `x0`, in the variable `x`.
pub fn detect_rational(
    s: &SeriesSample,
    max_num_deg: usize,
    max_den_deg: usize,
) -> Result<RationalVerdict, ReconstructError> {
    let needed = max_num_deg + max_den_deg + 2;
    let got = s.coefficients.len();
    if got < needed {
        return Err(ReconstructError::TooShort { needed, got });
    }
    let order = max_num_deg + max_den_deg + 1;
    let series = UniPoly::new(s.coefficients[..order].to_vec());
    let (p, q) = pade(&series, order, max_num_deg);
    if q.coeff(0).is_zero() {
        return Err(ReconstructError::DegeneratePade);
    }
    let expansion = p.series_div(&q, got).expect("q(0) != 0");
    if let Some(index) = expansion.iter().zip(&s.coefficients).position(|(a, b)| a != b) {
        return Ok(RationalVerdict::NotRational { index: Some(index) });
    }
    let x = vars_from(&["x"]);
    let shift = -&s.base_point;
    let to_x = |f: &UniPoly| {
        let g = f.shift(&shift);
        MPoly::from_terms(&x, g.coeffs().iter().enumerate().map(|(k, c)| (vec![k as u32], c.clone())))
            .expect("univariate exponents")
    };
    Ok(RationalVerdict::Rational(RatFunc::new(to_x(&p), to_x(&q))?))
}

/// Padé approximant of type `(m, order - 1 - m)` by the extended Euclidean
/// algorithm on `(t^order, series)`, with common powers of `t` cancelled.
fn pade(series: &UniPoly, order: usize, m: usize) -> (UniPoly, UniPoly) {
    let mut r0 = UniPoly::power(order);
    let mut r1 = series.clone();
    let mut v0 = UniPoly::zero();
    let mut v1 = UniPoly::one();
    while !r1.is_zero() && r1.degree().unwrap_or(0) > m {
        let (q, r) = r0.divrem(&r1);
        let v = &v0 - &(&q * &v1);
        r0 = std::mem::replace(&mut r1, r);
        v0 = std::mem::replace(&mut v1, v);
    }
    let (mut p, mut q) = (r1, v1);
    while !q.is_zero() && q.coeff(0).is_zero() && p.coeff(0).is_zero() {
        p = UniPoly::new(p.coeffs().get(1..).unwrap_or(&[]).to_vec());
        q = UniPoly::new(q.coeffs()[1..].to_vec());
    }
    let q0 = q.coeff(0);
    if !q0.is_zero() {
        let inv = q0.recip();
        p = p.scale(&inv);
        q = q.scale(&inv);
    }
    (p, q)
}

/// First `count` Taylor coefficients at `x0` of a rational function of one
/// variable; `None` if `x0` is a pole.
pub fn taylor_coefficients(f: &RatFunc, x0: &Rational, count: usize) -> Result<Option<Vec<Rational>>, ReconstructError> {
    if f.vars().len() != 1 {
        return Err(ReconstructError::NotUnivariate);
    }
    let uni = |p: &MPoly| {
        UniPoly::new(
            p.coeffs_in(0)
                .iter()
                .map(|c| c.constant_value().expect("univariate"))
                .collect(),
        )
        .shift(x0)
    };
    Ok(uni(f.num()).series_div(&uni(f.den()), count))
}

/// Detects each trace as a rational function of bounded degree, then
/// reconstructs the current from the recovered traces.
pub fn continue_current(
    series: &[SeriesSample],
    d_max: usize,
    max_num_deg: usize,
    max_den_deg: usize,
) -> Result<ReconstructionReport, ReconstructError> {
    let first = series.first().ok_or(ReconstructError::NoSeries)?;
    if series.iter().any(|s| s.base_point != first.base_point) {
        return Err(ReconstructError::MixedBasePoints);
    }
    let traces = series
        .iter()
        .enumerate()
        .map(|(k, s)| match detect_rational(s, max_num_deg, max_den_deg) {
            Ok(RationalVerdict::Rational(f)) => Ok(f),
            Ok(RationalVerdict::NotRational { index }) => Err(ReconstructError::NotContinuable {
                k,
                reason: match index {
                    Some(i) => format!("best candidate disagrees with coefficient {i}"),
                    None => "no candidate".into(),
                },
            }),
            Err(e) => Err(ReconstructError::NotContinuable { k, reason: e.to_string() }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    reconstruct(&TraceSequence::new(traces)?, d_max)
}
