//! Trace (moment) sequences `u_k(x) = φ_*(α y^k)`.
//!
//! For `α = ∂̄[r dx∧dy/P]` the trace `u_k` is the sum of the residues of
//! `r y^k / P` over the fiber, i.e. the coefficient of `y^{d−1}` in
//! `r y^k mod P`. Everything stays symbolic in the base variables.

use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::json::{poly_from_json, ratfunc_from_json, ratfunc_to_json};
use crate::algebra::{fiber_index, AlgebraError, FracMatrix, MPoly, RatFunc, Vars};
use crate::current::ResidualCurrent;
use crate::error::SchemaError;
use crate::residue::param_vars;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("need at least {needed} trace entries, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("trace sequence must not be empty")]
    Empty,
    #[error("P is not monic in its last variable")]
    NotMonic,
    #[error("P must have positive degree in its last variable")]
    ConstantP,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSequence {
    entries: Vec<RatFunc>,
    source_degree: Option<usize>,
}

impl TraceSequence {
    pub fn new(entries: Vec<RatFunc>) -> Result<Self, TraceError> {
        let first = entries.first().ok_or(TraceError::Empty)?;
        let vars = first.vars();
        if let Some(bad) = entries.iter().find(|e| e.vars() != vars) {
            return Err(AlgebraError::VarMismatch {
                left: vars.to_vec(),
                right: bad.vars().to_vec(),
            }
            .into());
        }
        Ok(TraceSequence {
            entries,
            source_degree: None,
        })
    }

    pub fn with_source_degree(mut self, d: usize) -> Self {
        self.source_degree = Some(d);
        self
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> Option<&RatFunc> {
        self.entries.get(k)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source_degree(&self) -> Option<usize> {
        self.source_degree
    }

    pub fn vars(&self) -> &Vars {
        self.entries[0].vars()
    }

    /// True when every entry vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RatFunc::is_zero)
    }

    /// `{"u":[<ratfunc>,...]}`.
    pub fn to_json(&self) -> Value {
        json!({ "u": self.entries.iter().map(ratfunc_to_json).collect::<Vec<_>>() })
    }

    /// Accepts entries as `{"num":..,"den":..}` objects or as bare polynomials.
    pub fn from_json(v: &Value) -> Result<Self, SchemaError> {
        let u = v
            .get("u")
            .ok_or_else(|| SchemaError::new("u", "missing field"))?
            .as_array()
            .ok_or_else(|| SchemaError::new("u", "must be an array"))?;
        let entries = u
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let path = format!("u[{k}]");
                if e.get("terms").is_some() {
                    poly_from_json(e, &path).map(RatFunc::from_poly)
                } else {
                    ratfunc_from_json(e, &path)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        TraceSequence::new(entries).map_err(|e| SchemaError::new("u", e.to_string()))
    }
}

/// `u_0, ..., u_{count−1}` for the current `c`.
pub fn traces(c: &ResidualCurrent, count: usize) -> TraceSequence {
    let base = c.base_vars();
    let (p_low, r) = fiber_coefficients(c.p(), c.r(), &base);
    let u = monic_moments(&p_low, &r, count);
    TraceSequence {
        entries: u.into_iter().map(RatFunc::from_poly).collect(),
        source_degree: Some(c.d()),
    }
}

/// Lower coefficients `c_0..c_{d−1}` of a monic `P` and the coefficients of
/// `r` padded to length `d`, all over the base variables.
fn fiber_coefficients(p: &MPoly, r: &MPoly, base: &Vars) -> (Vec<MPoly>, Vec<MPoly>) {
    let y = p.nvars() - 1;
    let d = p.degree_in(y) as usize;
    let lift = |q: MPoly| q.reindex(base).expect("coefficients avoid the fiber variable");
    let p_low: Vec<MPoly> = p.coeffs_in(y).into_iter().take(d).map(lift).collect();
    let mut rc: Vec<MPoly> = r.coeffs_in(y).into_iter().map(lift).collect();
    rc.resize(d, MPoly::zero(base));
    (p_low, rc)
}

/// Moments of `r/P` for monic `P = y^d + Σ_{j<d} p_low[j] y^j` and
/// `deg r < d`: iterates `R ← y·R mod P` and reads off the top coefficient.
pub(crate) fn monic_moments<T>(p_low: &[T], r: &[T], count: usize) -> Vec<T>
where
    T: Clone,
    for<'a> &'a T: Add<&'a T, Output = T>
        + Sub<&'a T, Output = T>
        + Mul<&'a T, Output = T>
        + Neg<Output = T>,
{
    let d = p_low.len();
    let mut s: Vec<T> = r.to_vec();
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        out.push(s[d - 1].clone());
        if k + 1 == count {
            break;
        }
        let top = s[d - 1].clone();
        let mut next = Vec::with_capacity(d);
        for j in 0..d {
            let reduced = &top * &p_low[j];
            next.push(if j == 0 {
                -&reduced
            } else {
                &s[j - 1] - &reduced
            });
        }
        s = next;
    }
    out
}

/// Checks `u_{k+d} + a_1 u_{k+d−1} + ... + a_d u_k = 0` for every `k` with
/// `k + d < len(t)`, where `P = y^d + a_1 y^{d−1} + ... + a_d`. Returns the
/// indices `k` where the identity fails.
pub fn recurrence_check(t: &TraceSequence, p: &MPoly) -> Result<Vec<usize>, TraceError> {
    let y = fiber_index(p)?;
    if p.degree_in(y) == 0 {
        return Err(TraceError::ConstantP);
    }
    if !p.is_monic_in(y) {
        return Err(TraceError::NotMonic);
    }
    let base = param_vars(p.vars());
    if &base != t.vars() {
        return Err(AlgebraError::VarMismatch {
            left: t.vars().to_vec(),
            right: base.to_vec(),
        }
        .into());
    }
    let c = p.coeffs_in(y);
    let d = c.len() - 1;
    let a: Vec<RatFunc> = (1..=d)
        .map(|i| RatFunc::from_poly(c[d - i].reindex(&base).expect("coefficients avoid y")))
        .collect();
    recurrence_violations(t, &a)
}

/// Same check with arbitrary rational-function coefficients `a_1..a_d`.
pub fn recurrence_violations(t: &TraceSequence, a: &[RatFunc]) -> Result<Vec<usize>, TraceError> {
    let d = a.len();
    if t.len() < d + 1 {
        return Err(TraceError::TooShort {
            needed: d + 1,
            got: t.len(),
        });
    }
    let u = t.entries();
    Ok((0..t.len() - d)
        .filter(|&k| {
            let s = a
                .iter()
                .enumerate()
                .fold(u[k + d].clone(), |acc, (i, ai)| &acc + &(ai * &u[k + d - 1 - i]));
            !s.is_zero()
        })
        .collect())
}

/// Symmetric Hankel matrix `H_d = (u_{i+j})_{0 ≤ i,j < d}`.
pub fn hankel(t: &TraceSequence, d: usize) -> Result<FracMatrix, TraceError> {
    let needed = (2 * d).saturating_sub(1).max(1);
    if d == 0 || t.len() < needed {
        return Err(TraceError::TooShort { needed, got: t.len() });
    }
    Ok(FracMatrix::from_fn(d, d, |i, j| t.entries[i + j].clone())?)
}

/// The anti-ordered moment matrix `M = (u_{d+i−j−1})_{1 ≤ i,j ≤ d}`, i.e.
/// `H_d` with its columns reversed, so `det M = (−1)^{d(d−1)/2} det H_d`.
pub fn anti_hankel(t: &TraceSequence, d: usize) -> Result<FracMatrix, TraceError> {
    let h = hankel(t, d)?;
    Ok(FracMatrix::from_fn(d, d, |i, j| h.get(i, d - 1 - j).clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::algebra::vars_from;

    fn xy() -> Vars {
        vars_from(&["x", "y"])
    }

    fn p(terms: &[(i64, u32, u32)]) -> MPoly {
        MPoly::from_terms(&xy(), terms.iter().map(|&(c, a, b)| (vec![a, b], rat(c)))).unwrap()
    }

    fn ux(c: &[i64]) -> RatFunc {
        let v = vars_from(&["x"]);
        RatFunc::from_poly(
            MPoly::from_terms(&v, c.iter().enumerate().map(|(k, &a)| (vec![k as u32], rat(a)))).unwrap(),
        )
    }

    fn current(pp: MPoly, r: MPoly) -> ResidualCurrent {
        ResidualCurrent::validate(pp, r).unwrap().0
    }

    #[test]
    fn trace_examples() {
        let c = current(p(&[(1, 0, 2), (-1, 1, 0)]), p(&[(1, 0, 0)]));
        let t = traces(&c, 4);
        assert_eq!(t.entries(), &[ux(&[0]), ux(&[1]), ux(&[0]), ux(&[0, 1])]);
        assert_eq!(t.source_degree(), Some(2));

        let c = current(p(&[(1, 0, 1), (-3, 0, 0)]), p(&[(5, 0, 0)]));
        let t = traces(&c, 5);
        for (k, u) in t.entries().iter().enumerate() {
            assert_eq!(u, &ux(&[5 * 3i64.pow(k as u32)]));
        }

        let c = current(p(&[(1, 0, 2), (-1, 0, 1)]), p(&[(2, 0, 1), (-1, 0, 0)]));
        assert_eq!(traces(&c, 5).entries(), &[ux(&[2]), ux(&[1]), ux(&[1]), ux(&[1]), ux(&[1])]);
    }

    #[test]
    fn recurrence_examples() {
        let c = current(p(&[(1, 0, 2), (-1, 1, 0)]), p(&[(1, 0, 0)]));
        assert!(recurrence_check(&traces(&c, 4), c.p()).unwrap().is_empty());

        let t = TraceSequence::new(vec![ux(&[2]), ux(&[1]), ux(&[1]), ux(&[1])]).unwrap();
        assert!(recurrence_check(&t, &p(&[(1, 0, 2), (-1, 0, 1)])).unwrap().is_empty());

        let t = TraceSequence::new(vec![ux(&[1]), ux(&[1])]).unwrap();
        assert_eq!(recurrence_check(&t, &p(&[(1, 0, 1), (-2, 0, 0)])).unwrap(), vec![0]);

        let t = TraceSequence::new(vec![ux(&[1])]).unwrap();
        assert!(matches!(
            recurrence_check(&t, &p(&[(1, 0, 1), (-2, 0, 0)])),
            Err(TraceError::TooShort { .. })
        ));
    }

    #[test]
    fn hankel_examples() {
        let t = TraceSequence::new(vec![ux(&[0]), ux(&[1]), ux(&[0])]).unwrap();
        let h = hankel(&t, 2).unwrap();
        assert_eq!(h.row(0), &[ux(&[0]), ux(&[1])]);
        assert_eq!(h.determinant().unwrap(), ux(&[-1]));

        let t = TraceSequence::new(vec![ux(&[2]), ux(&[1]), ux(&[1])]).unwrap();
        assert_eq!(hankel(&t, 2).unwrap().determinant().unwrap(), ux(&[1]));

        let t = TraceSequence::new(vec![ux(&[7])]).unwrap();
        assert_eq!(hankel(&t, 1).unwrap().get(0, 0), &ux(&[7]));
        assert!(matches!(hankel(&t, 2), Err(TraceError::TooShort { needed: 3, got: 1 })));
    }

    #[test]
    fn anti_hankel_sign() {
        let t = TraceSequence::new(vec![ux(&[2]), ux(&[1]), ux(&[1])]).unwrap();
        assert_eq!(anti_hankel(&t, 2).unwrap().determinant().unwrap(), ux(&[-1]));
    }

    #[test]
    fn json_roundtrip() {
        let t = TraceSequence::new(vec![ux(&[0]), ux(&[0, 1])]).unwrap();
        assert_eq!(TraceSequence::from_json(&t.to_json()).unwrap(), t);
        let e = TraceSequence::from_json(&json!({"v": []})).unwrap_err();
        assert_eq!(e.field, "u");
    }
}
