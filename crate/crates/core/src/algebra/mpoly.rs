//! Sparse multivariate polynomials over Q.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order, so iteration from the back yields the leading term.
//! Zero coefficients are never stored, which makes structural equality the
//! same as mathematical equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use super::rational::{format_rational, to_f64};
use super::{AlgebraError, Rational};

/// Exponent vector, ordered graded-lexicographically (first variable most significant).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u32; 6]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }

    fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut m = self.clone();
        m.0[i] = e;
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shared, ordered list of variable names.
pub type Vars = Arc<[String]>;

pub fn vars_from<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero(vars: &Vars) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    /// The variable with index `i`.
    pub fn var(vars: &Vars, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i, 1), Rational::one())
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.exps().len(), vars.len());
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from possibly repeated terms; duplicates are summed.
    pub fn from_terms<I>(vars: &Vars, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(AlgebraError::Dimension(format!(
                    "exponent vector of length {} for {} variables",
                    exps.len(),
                    vars.len()
                )));
            }
            p.add_term(Monomial::from_exps(&exps), c);
        }
        Ok(p)
    }

    fn from_map(vars: &Vars, terms: BTreeMap<Monomial, Rational>) -> Self {
        MPoly {
            vars: vars.clone(),
            terms,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn same_vars(&self, other: &MPoly) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    pub fn check_same_vars(&self, other: &MPoly) -> Result<(), AlgebraError> {
        if self.same_vars(other) {
            Ok(())
        } else {
            Err(AlgebraError::VarMismatch {
                left: self.vars.to_vec(),
                right: other.vars.to_vec(),
            })
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// True for zero and for nonzero constants.
    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().is_one(),
            _ => false,
        }
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial::from_exps(exps))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degree in variable `i`; zero for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.nvars()];
        for m in self.terms.keys() {
            for (di, e) in d.iter_mut().zip(&m.0) {
                *di = (*di).max(*e);
            }
        }
        d
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        Self::from_map(&self.vars, terms)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> MPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.mul(m), v * c))
            .collect();
        Self::from_map(&self.vars, terms)
    }

    /// Divides by the leading coefficient so the leading graded-lex term has coefficient 1.
    pub fn monic(&self) -> MPoly {
        match self.leading_coeff() {
            Some(c) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / b`, or `None` if `b` does not divide `self`.
    pub fn div_exact(&self, b: &MPoly) -> Option<MPoly> {
        let (lb_m, lb_c) = b.leading_term()?;
        if self.is_zero() {
            return Some(Self::zero(&self.vars));
        }
        if b.is_constant() {
            return Some(self.scale(&lb_c.recip()));
        }
        let da = self.degrees();
        let db = b.degrees();
        if da.iter().zip(&db).any(|(x, y)| x < y) {
            return None;
        }
        let lb_inv = lb_c.recip();
        let mut rem = self.terms.clone();
        let mut q = BTreeMap::new();
        while let Some((m, c)) = rem.iter().next_back() {
            let qm = m.div(lb_m)?;
            let qc = c * &lb_inv;
            for (bm, bc) in &b.terms {
                let key = bm.mul(&qm);
                let delta = &qc * bc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(-delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() -= delta;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            q.insert(qm, qc);
        }
        Some(Self::from_map(&self.vars, q))
    }

    /// Coefficients of `self` viewed as a polynomial in variable `i`, lowest
    /// power first. Each coefficient lives in the same ring with `x_i` absent.
    pub fn coeffs_in(&self, i: usize) -> Vec<MPoly> {
        let deg = self.degree_in(i) as usize;
        let mut maps: Vec<BTreeMap<Monomial, Rational>> = vec![BTreeMap::new(); deg + 1];
        if self.is_zero() {
            return vec![Self::zero(&self.vars)];
        }
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            maps[e].insert(m.with_exp(i, 0), c.clone());
        }
        maps.into_iter()
            .map(|t| Self::from_map(&self.vars, t))
            .collect()
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(vars: &Vars, i: usize, coeffs: &[MPoly]) -> MPoly {
        let mut terms = BTreeMap::new();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                debug_assert_eq!(m.0[i], 0);
                terms.insert(m.with_exp(i, e as u32), v.clone());
            }
        }
        Self::from_map(vars, terms)
    }

    /// Leading coefficient with respect to variable `i`.
    pub fn lc_in(&self, i: usize) -> MPoly {
        let d = self.degree_in(i);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] == d)
            .map(|(m, c)| (m.with_exp(i, 0), c.clone()))
            .collect();
        Self::from_map(&self.vars, terms)
    }

    pub fn is_monic_in(&self, i: usize) -> bool {
        self.lc_in(i).is_one()
    }

    /// Division by a divisor that is monic in variable `i`.
    pub fn divmod_monic_in(&self, b: &MPoly, i: usize) -> Result<(MPoly, MPoly), AlgebraError> {
        self.check_same_vars(b)?;
        let name = self.vars[i].clone();
        if b.degree_in(i) == 0 {
            return Err(AlgebraError::ConstantDivisor { var: name });
        }
        if !b.is_monic_in(i) {
            return Err(AlgebraError::NotMonic { var: name });
        }
        let bc = b.coeffs_in(i);
        let db = bc.len() - 1;
        let mut rem = self.coeffs_in(i);
        if rem.len() <= db {
            return Ok((Self::zero(&self.vars), self.clone()));
        }
        let mut q = vec![Self::zero(&self.vars); rem.len() - db];
        for k in (db..rem.len()).rev() {
            let t = std::mem::replace(&mut rem[k], Self::zero(&self.vars));
            if t.is_zero() {
                continue;
            }
            for j in 0..db {
                rem[k - db + j] = &rem[k - db + j] - &(&t * &bc[j]);
            }
            q[k - db] = t;
        }
        rem.truncate(db);
        Ok((
            Self::from_coeffs_in(&self.vars, i, &q),
            Self::from_coeffs_in(&self.vars, i, &rem),
        ))
    }

    /// Pseudo-division in variable `i`: returns `(q, r, e)` with
    /// `lc_i(b)^e * self = q * b + r` and `deg_i r < deg_i b`.
    pub fn pseudo_divmod_in(&self, b: &MPoly, i: usize) -> (MPoly, MPoly, u32) {
        let bc = b.coeffs_in(i);
        let db = bc.len() - 1;
        let lc = bc[db].clone();
        let mut rem = self.coeffs_in(i);
        let zero = Self::zero(&self.vars);
        if self.is_zero() || rem.len() <= db {
            return (zero, self.clone(), 0);
        }
        let e = (rem.len() - db) as u32;
        let mut q = vec![zero.clone(); rem.len() - db];
        let mut steps = 0u32;
        for k in (db..rem.len()).rev() {
            let t = std::mem::replace(&mut rem[k], zero.clone());
            for c in rem[..k].iter_mut() {
                *c = &*c * &lc;
            }
            for c in q.iter_mut() {
                *c = &*c * &lc;
            }
            steps += 1;
            if t.is_zero() {
                continue;
            }
            for j in 0..db {
                rem[k - db + j] = &rem[k - db + j] - &(&t * &bc[j]);
            }
            q[k - db] = t;
        }
        debug_assert_eq!(steps, e);
        rem.truncate(db.max(1));
        if db == 0 {
            rem = vec![zero.clone()];
        }
        (
            Self::from_coeffs_in(&self.vars, i, &q),
            Self::from_coeffs_in(&self.vars, i, &rem),
            e,
        )
    }

    pub fn derivative(&self, i: usize) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] > 0)
            .map(|(m, c)| (m.with_exp(i, m.0[i] - 1), c * Rational::from_integer(m.0[i].into())))
            .collect();
        Self::from_map(&self.vars, terms)
    }

    /// Substitutes `x_i = value`, keeping the variable list.
    pub fn substitute(&self, i: usize, value: &Rational) -> MPoly {
        let mut out = Self::zero(&self.vars);
        let mut powers: Vec<Rational> = vec![Rational::one()];
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            out.add_term(m.with_exp(i, 0), c * &powers[e]);
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars(), "evaluation point has wrong dimension");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars(), "evaluation point has wrong dimension");
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(to_f64(c), 0.0);
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= x.powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluates every variable except `keep` and returns the coefficients
    /// of the resulting univariate polynomial, lowest power first.
    pub fn specialize_complex(&self, keep: usize, point: &[Complex64]) -> Vec<Complex64> {
        let deg = self.degree_in(keep) as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (m, c) in &self.terms {
            let mut t = Complex64::new(to_f64(c), 0.0);
            for (j, (x, &e)) in point.iter().zip(&m.0).enumerate() {
                if j != keep && e > 0 {
                    t *= x.powu(e);
                }
            }
            out[m.0[keep] as usize] += t;
        }
        out
    }

    /// Exact counterpart of [`specialize_complex`](Self::specialize_complex).
    pub fn specialize(&self, keep: usize, point: &[Rational]) -> Vec<Rational> {
        let deg = self.degree_in(keep) as usize;
        let mut out = vec![Rational::zero(); deg + 1];
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (j, (x, &e)) in point.iter().zip(&m.0).enumerate() {
                if j != keep && e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            out[m.0[keep] as usize] += t;
        }
        out
    }

    /// Substitutes `x_i = images[i]`, where all images share the variable list `target`.
    pub fn compose(&self, target: &Vars, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars(), "one image per variable required");
        let mut powers: Vec<Vec<MPoly>> = images
            .iter()
            .map(|img| {
                debug_assert!(img.vars == *target);
                vec![Self::one(target), img.clone()]
            })
            .collect();
        let degs = self.degrees();
        for (i, p) in powers.iter_mut().enumerate() {
            for _ in 2..=degs[i] {
                let next = &p[p.len() - 1] * &p[1];
                p.push(next);
            }
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Re-expresses the polynomial over `target`, mapping variables by name.
    /// Variables of `self` missing from `target` must not occur.
    pub fn reindex(&self, target: &Vars) -> Result<MPoly, AlgebraError> {
        let mut map = Vec::with_capacity(self.nvars());
        for (i, v) in self.vars.iter().enumerate() {
            match target.iter().position(|t| t == v) {
                Some(j) => map.push(Some(j)),
                None if !self.depends_on(i) => map.push(None),
                None => return Err(AlgebraError::UnknownVariable(v.clone())),
            }
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = Monomial::one(target.len());
            for (i, slot) in map.iter().enumerate() {
                if let Some(j) = slot {
                    e.0[*j] = m.0[i];
                }
            }
            terms.insert(e, c.clone());
        }
        Ok(Self::from_map(target, terms))
    }

    /// Checked `a op b` over a shared variable list.
    pub fn arith(a: &MPoly, b: &MPoly, op: PolyOp) -> Result<MPoly, AlgebraError> {
        a.check_same_vars(b)?;
        Ok(match op {
            PolyOp::Add => a + b,
            PolyOp::Sub => a - b,
            PolyOp::Mul => a * b,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

fn assert_same(a: &MPoly, b: &MPoly) {
    if !a.same_vars(b) {
        panic!(
            "polynomial variable lists differ: {:?} vs {:?}",
            a.vars, b.vars
        );
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_same(self, rhs);
        merge_terms(self, rhs, false)
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_same(self, rhs);
        merge_terms(self, rhs, true)
    }
}

/// `a + b` or `a - b` by merging the two sorted term lists.
fn merge_terms(a: &MPoly, b: &MPoly, negate: bool) -> MPoly {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate { -b } else { b.clone() };
    }
    let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(a.terms.len() + b.terms.len());
    let mut ia = a.terms.iter().peekable();
    let mut ib = b.terms.iter().peekable();
    let sign = |c: &Rational| if negate { -c } else { c.clone() };
    loop {
        match (ia.peek(), ib.peek()) {
            (Some((ma, ca)), Some((mb, cb))) => match ma.cmp(mb) {
                Ordering::Less => {
                    out.push(((*ma).clone(), (*ca).clone()));
                    ia.next();
                }
                Ordering::Greater => {
                    out.push(((*mb).clone(), sign(cb)));
                    ib.next();
                }
                Ordering::Equal => {
                    let c = if negate { *ca - *cb } else { *ca + *cb };
                    if !c.is_zero() {
                        out.push(((*ma).clone(), c));
                    }
                    ia.next();
                    ib.next();
                }
            },
            (Some((ma, ca)), None) => {
                out.push(((*ma).clone(), (*ca).clone()));
                ia.next();
            }
            (None, Some((mb, cb))) => {
                out.push(((*mb).clone(), sign(cb)));
                ib.next();
            }
            (None, None) => break,
        }
    }
    MPoly::from_map(&a.vars, out.into_iter().collect())
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_same(self, rhs);
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero(&self.vars);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        let (na, la) = integer_coeffs(self);
        let (nb, lb) = integer_coeffs(rhs);
        let den = &la * &lb;
        let products = small_products(self, &na, rhs, &nb).unwrap_or_else(|| {
            let mut v: Vec<(Monomial, BigInt)> = Vec::with_capacity(na.len() * nb.len());
            for ((m1, _), c1) in self.terms.iter().zip(&na) {
                for ((m2, _), c2) in rhs.terms.iter().zip(&nb) {
                    v.push((m1.mul(m2), c1 * c2));
                }
            }
            merge_sorted(v)
        });
        let terms = products
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| {
                let q = if den.is_one() {
                    Rational::from_integer(c)
                } else {
                    Rational::new(c, den.clone())
                };
                (m, q)
            })
            .collect();
        MPoly::from_map(&self.vars, terms)
    }
}

/// Coefficients scaled by the lcm of their denominators, in term order.
fn integer_coeffs(p: &MPoly) -> (Vec<BigInt>, BigInt) {
    let l = p
        .terms
        .values()
        .fold(BigInt::one(), |acc, c| if c.denom().is_one() { acc } else { acc.lcm(c.denom()) });
    let v = p
        .terms
        .values()
        .map(|c| {
            if l.is_one() {
                c.numer().clone()
            } else {
                c.numer() * (&l / c.denom())
            }
        })
        .collect();
    (v, l)
}

/// Sorts by monomial and sums equal monomials.
fn merge_sorted<C: std::ops::AddAssign>(mut v: Vec<(Monomial, C)>) -> Vec<(Monomial, C)> {
    v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Monomial, C)> = Vec::with_capacity(v.len());
    for (m, c) in v {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += c,
            _ => out.push((m, c)),
        }
    }
    out
}

/// Product with machine-integer coefficients, or `None` on overflow.
fn small_products(a: &MPoly, na: &[BigInt], b: &MPoly, nb: &[BigInt]) -> Option<Vec<(Monomial, BigInt)>> {
    let sa: Vec<i64> = na.iter().map(|c| c.to_i64()).collect::<Option<_>>()?;
    let sb: Vec<i64> = nb.iter().map(|c| c.to_i64()).collect::<Option<_>>()?;
    let mut v: Vec<(Monomial, i128)> = Vec::with_capacity(sa.len() * sb.len());
    for (m1, c1) in a.terms.keys().zip(&sa) {
        for (m2, c2) in b.terms.keys().zip(&sb) {
            v.push((m1.mul(m2), *c1 as i128 * *c2 as i128));
        }
    }
    // each product is below 2^126 in absolute value; summing more than two
    // of them could overflow, so accumulate with checks
    v.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    let mut out: Vec<(Monomial, i128)> = Vec::with_capacity(v.len());
    for (m, c) in v {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc = lc.checked_add(c)?,
            _ => out.push((m, c)),
        }
    }
    Some(out.into_iter().map(|(m, c)| (m, BigInt::from(c))).collect())
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        MPoly::from_map(&self.vars, terms)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(format_rational(&a));
            }
            for (v, &e) in self.vars.iter().zip(m.exps()) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({})", self.vars.join(","), self)
    }
}
