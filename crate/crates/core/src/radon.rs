//! Abel-Radon transform along lines `x_i = a_i y + b_i`.
//!
//! Restricting `r/P` to such a line gives a rational function of `y` whose
//! residue sums `u_k(a, b) = Σ Res r(ay+b, y) y^k / P(ay+b, y)` assemble into
//! the n-form `R(α) = Σ_I u_{|I|} da^I ∧ db^{I^c}`. Wedges are written with
//! the `da` factors first, then the `db` factors, each in increasing index
//! order, so every component carries the plain `u_{|I|}` with no sign.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::json::ratfunc_to_json;
use crate::algebra::{vars_from, AlgebraError, MPoly, RatFunc, Rational, Vars};
use crate::current::{Current, ResidualCurrent};
use crate::residue::{fiber_moments, ResidueError};
use crate::trace::TraceSequence;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadonError {
    #[error("P(ay+b, y) has no positive degree in y: the line family is degenerate")]
    DegenerateFamily,
    #[error("need at least {needed} transform entries, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("apex lies on the support: P(apex) = 0")]
    ApexOnSupport,
    #[error("apex needs {expected} coordinates, got {got}")]
    ApexDimension { expected: usize, got: usize },
    #[error("pencil traces disagree with the restricted transform at k = {k}")]
    PencilMismatch { k: usize },
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Coordinates `(a, b)` on the lines `x_i = a_i y + b_i` of `C^{n+1}`.
///
/// Vertical lines (constant `y`) are not in the chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineChart {
    n: usize,
    vars: Vars,
}

impl LineChart {
    /// Variables are `a, b` for `n = 1` and `a1..an, b1..bn` otherwise.
    pub fn new(n: usize) -> Self {
        let names: Vec<String> = if n == 1 {
            vec!["a".into(), "b".into()]
        } else {
            (1..=n)
                .map(|i| format!("a{i}"))
                .chain((1..=n).map(|i| format!("b{i}")))
                .collect()
        };
        LineChart {
            n,
            vars: vars_from(&names),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Index of `a_i` (1-based `i`).
    pub fn a_index(&self, i: usize) -> usize {
        i - 1
    }

    /// Index of `b_i` (1-based `i`).
    pub fn b_index(&self, i: usize) -> usize {
        self.n + i - 1
    }

    /// Chart variables followed by the line parameter `y`.
    fn with_fiber(&self) -> Vars {
        let mut names = self.vars.to_vec();
        names.push("y".into());
        vars_from(&names)
    }
}

/// `u_0(a,b), ..., u_{k_max}(a,b)`.
pub fn radon(c: &ResidualCurrent, k_max: usize) -> Result<Vec<RatFunc>, RadonError> {
    let chart = LineChart::new(c.n());
    let target = chart.with_fiber();
    let y = MPoly::var(&target, 2 * c.n());
    let images: Vec<MPoly> = (1..=c.n())
        .map(|i| &(&MPoly::var(&target, chart.a_index(i)) * &y) + &MPoly::var(&target, chart.b_index(i)))
        .chain(std::iter::once(y.clone()))
        .collect();
    line_moments(c, &target, &images, k_max + 1)
}

fn line_moments(
    c: &ResidualCurrent,
    target: &Vars,
    images: &[MPoly],
    count: usize,
) -> Result<Vec<RatFunc>, RadonError> {
    let p = c.p().compose(target, images);
    let r = c.r().compose(target, images);
    if p.degree_in(target.len() - 1) == 0 {
        return Err(RadonError::DegenerateFamily);
    }
    Ok(fiber_moments(&r, &p, count)?)
}

/// The n-form `Σ_I u_{|I|} da^I ∧ db^{I^c}`, keyed by the subset `I`
/// (1-based indices, increasing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadonForm {
    n: usize,
    components: BTreeMap<Vec<usize>, RatFunc>,
}

impl RadonForm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn component(&self, subset: &[usize]) -> Option<&RatFunc> {
        self.components.get(subset)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &RatFunc)> {
        self.components.iter()
    }

    /// `[{"da":[..],"db":[..],"coeff":<ratfunc>}, ...]`.
    pub fn to_json(&self) -> Value {
        let items: Vec<Value> = self
            .components
            .iter()
            .map(|(set, f)| {
                let rest: Vec<usize> = (1..=self.n).filter(|i| !set.contains(i)).collect();
                json!({ "da": set, "db": rest, "coeff": ratfunc_to_json(f) })
            })
            .collect();
        Value::Array(items)
    }
}

pub fn assemble_radon_form(u: &[RatFunc], n: usize) -> Result<RadonForm, RadonError> {
    if u.len() < n + 1 {
        return Err(RadonError::TooShort {
            needed: n + 1,
            got: u.len(),
        });
    }
    let components = (0u32..1 << n)
        .map(|mask| {
            let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
            let f = u[set.len()].clone();
            (set, f)
        })
        .collect();
    Ok(RadonForm { n, components })
}

/// Pairs `(i, k)` for which `∂u_{k+n}/∂b_i ≠ ∂u_{k+n-1}/∂a_i`, over every
/// `k <= k_max` whose entries are available.
pub fn closedness_check(u: &[RatFunc], n: usize, k_max: usize) -> Vec<(usize, usize)> {
    let chart = LineChart::new(n);
    let mut bad = Vec::new();
    for k in 0..=k_max {
        if k + n >= u.len() || n == 0 {
            break;
        }
        for i in 1..=n {
            let lhs = u[k + n].diff(chart.b_index(i));
            let rhs = u[k + n - 1].diff(chart.a_index(i));
            if lhs != rhs {
                bad.push((i, k));
            }
        }
    }
    bad
}

/// Traces of `c` along the lines through `apex = (x⁰, y⁰)`, parametrized by
/// their slopes `a`: each `u_k` of the transform restricted to
/// `b = x⁰ - a y⁰`. Computed both directly and by restriction; the two
/// must agree exactly.
pub fn pencil_projection(c: &ResidualCurrent, apex: &[Rational], count: usize) -> Result<TraceSequence, RadonError> {
    let direct = pencil_traces(c, apex, count)?;
    let restricted = restrict_to_pencil(&radon(c, count.max(1) - 1)?, c.n(), apex)?;
    if let Some(k) = (0..count).find(|&k| direct[k] != restricted[k]) {
        return Err(RadonError::PencilMismatch { k });
    }
    Ok(TraceSequence::new(direct).expect("nonempty with shared vars"))
}

fn check_apex(c: &ResidualCurrent, apex: &[Rational]) -> Result<(), RadonError> {
    if apex.len() != c.n() + 1 {
        return Err(RadonError::ApexDimension {
            expected: c.n() + 1,
            got: apex.len(),
        });
    }
    if c.p().eval(apex) == Rational::from_integer(0.into()) {
        return Err(RadonError::ApexOnSupport);
    }
    Ok(())
}

fn slope_vars(n: usize) -> Vars {
    let chart = LineChart::new(n);
    vars_from(&chart.vars()[..n])
}

/// Moments of `c` on the lines `x_i = a_i (y - y⁰) + x⁰_i`, over the slopes.
pub fn pencil_traces(c: &ResidualCurrent, apex: &[Rational], count: usize) -> Result<Vec<RatFunc>, RadonError> {
    check_apex(c, apex)?;
    let n = c.n();
    let mut names = slope_vars(n).to_vec();
    names.push("y".into());
    let target = vars_from(&names);
    let y = MPoly::var(&target, n);
    let shifted = &y - &MPoly::constant(&target, apex[n].clone());
    let images: Vec<MPoly> = (0..n)
        .map(|i| &(&MPoly::var(&target, i) * &shifted) + &MPoly::constant(&target, apex[i].clone()))
        .chain(std::iter::once(y.clone()))
        .collect();
    line_moments(c, &target, &images, count)
}

/// Substitutes `b_i = x⁰_i - a_i y⁰` into transform entries.
pub fn restrict_to_pencil(u: &[RatFunc], n: usize, apex: &[Rational]) -> Result<Vec<RatFunc>, RadonError> {
    if apex.len() != n + 1 {
        return Err(RadonError::ApexDimension {
            expected: n + 1,
            got: apex.len(),
        });
    }
    let target = slope_vars(n);
    let a: Vec<MPoly> = (0..n).map(|i| MPoly::var(&target, i)).collect();
    let images: Vec<MPoly> = a
        .iter()
        .cloned()
        .chain((0..n).map(|i| &MPoly::constant(&target, apex[i].clone()) - &a[i].scale(&apex[n])))
        .collect();
    Ok(u.iter().map(|f| f.compose(&target, &images)).collect::<Result<_, _>>()?)
}

/// True iff `u_0, ..., u_{k_probe + n}` all vanish identically.
pub fn is_radon_zero(c: &Current, k_probe: usize) -> Result<bool, RadonError> {
    match c {
        Current::Zero { .. } => Ok(true),
        Current::Residual(c) => Ok(radon(c, k_probe + c.n())?.iter().all(RatFunc::is_zero)),
    }
}

/// For `n = 1` and polynomial `u_0, u_1`: a polynomial `F(a, b)` with
/// `dF = u_1 da + u_0 db`, or `None` if the entries are not polynomial or
/// the form is not closed.
pub fn radon_potential(u0: &RatFunc, u1: &RatFunc) -> Option<MPoly> {
    let (u0, u1) = (u0.as_poly()?, u1.as_poly()?);
    let f0 = antiderivative(u0, 1);
    let g = u1 - &f0.derivative(0);
    if g.depends_on(1) {
        return None;
    }
    let f = &f0 + &antiderivative(&g, 0);
    (&f.derivative(0) == u1 && &f.derivative(1) == u0).then_some(f)
}

fn antiderivative(p: &MPoly, i: usize) -> MPoly {
    let terms: Vec<(Vec<u32>, Rational)> = p
        .terms()
        .map(|(m, c)| {
            let mut e = m.exps().to_vec();
            e[i] += 1;
            (e.clone(), c / Rational::from_integer(e[i].into()))
        })
        .collect();
    MPoly::from_terms(p.vars(), terms).expect("same shape")
}
