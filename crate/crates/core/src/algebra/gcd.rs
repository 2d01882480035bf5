//! Multivariate gcd over Q.
//!
//! Recursive content / primitive-part scheme with a primitive PRS in one
//! main variable. Two shortcuts cover almost every call made by the rest of
//! the crate: exact divisibility, and a coprimality certificate obtained by
//! specializing all other variables to integers (if the specialized
//! univariate gcd is trivial and the leading coefficients survive, the true
//! gcd has degree 0 in the main variable).

use num_traits::Zero;

use super::mpoly::MPoly;
use super::unipoly::UniPoly;
use super::{AlgebraError, Rational};

/// Greatest common divisor, normalized so the leading graded-lex coefficient is 1.
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    assert!(a.same_vars(b), "gcd of polynomials over different variables");
    gcd_rec(a, b).monic()
}

/// gcd of `a` and `b` viewed as univariate polynomials in variable `y`
/// over the field of rational functions in the remaining variables.
///
/// The result is the primitive part (with respect to `y`) of the
/// multivariate gcd, divided by its leading `y`-coefficient when that
/// coefficient is a constant and by its leading graded-lex coefficient
/// otherwise. It is `1` exactly when the inputs are coprime in `y`.
pub fn gcd_in(a: &MPoly, b: &MPoly, y: usize) -> Result<MPoly, AlgebraError> {
    a.check_same_vars(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(AlgebraError::ZeroGcd);
    }
    let g = if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else {
        gcd_rec(a, b)
    };
    let pp = primitive_part_in(&g, y);
    let lc = pp.lc_in(y);
    Ok(match lc.constant_value() {
        Some(c) => pp.scale(&c.recip()),
        None => pp.monic(),
    })
}

/// Least common multiple, normalized like [`gcd`].
pub fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero(a.vars());
    }
    let g = gcd(a, b);
    (&a.div_exact(&g).expect("gcd divides") * b).monic()
}

/// gcd of the coefficients of `p` viewed as a polynomial in variable `i`.
pub fn content_in(p: &MPoly, i: usize) -> MPoly {
    let mut coeffs: Vec<MPoly> = p.coeffs_in(i).into_iter().filter(|c| !c.is_zero()).collect();
    if coeffs.is_empty() {
        return MPoly::zero(p.vars());
    }
    coeffs.sort_by_key(|c| c.num_terms());
    let mut g = coeffs[0].clone();
    for c in &coeffs[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd_rec(&g, c);
    }
    if g.is_constant() {
        MPoly::one(p.vars())
    } else {
        g.monic()
    }
}

pub fn primitive_part_in(p: &MPoly, i: usize) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    if p.degree_in(i) == 0 {
        return MPoly::one(p.vars());
    }
    let c = content_in(p, i);
    p.div_exact(&c).expect("content divides")
}

fn gcd_rec(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(a.vars());
    }
    let (small, big) = if a.num_terms() <= b.num_terms() {
        (a, b)
    } else {
        (b, a)
    };
    if big.div_exact(small).is_some() {
        return small.clone();
    }
    if small.num_terms() == big.num_terms() && small.div_exact(big).is_some() {
        return big.clone();
    }
    let n = a.nvars();
    let da = a.degrees();
    let db = b.degrees();
    // a variable present in only one argument: the gcd divides every
    // coefficient with respect to it
    for i in 0..n {
        if da[i] > 0 && db[i] == 0 {
            return gcd_with_coeffs(b, &[a], i);
        }
        if db[i] > 0 && da[i] == 0 {
            return gcd_with_coeffs(a, &[b], i);
        }
    }
    // main variable: smallest maximal degree among shared variables
    let v = (0..n)
        .filter(|&i| da[i] > 0)
        .min_by_key(|&i| (da[i].max(db[i]), std::cmp::Reverse(i)))
        .expect("non-constant polynomials share a variable");
    if coprime_by_specialization(a, b, v) {
        let (start, rest) = smallest_coeff(&[a, b], v);
        return gcd_with_coeffs(&start, &rest, v);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd_rec(&ca, &cb);
    let g = primitive_prs(pa, pb, v);
    &c * &g
}

/// gcd of `start` with every coefficient (in variable `i`) of each of `polys`,
/// stopping as soon as it becomes constant.
fn gcd_with_coeffs(start: &MPoly, polys: &[&MPoly], i: usize) -> MPoly {
    let mut coeffs: Vec<MPoly> = polys
        .iter()
        .flat_map(|p| p.coeffs_in(i))
        .filter(|c| !c.is_zero())
        .collect();
    coeffs.sort_by_key(|c| c.num_terms());
    let mut g = start.clone();
    for c in &coeffs {
        if g.is_constant() {
            break;
        }
        g = gcd_rec(&g, c);
    }
    if g.is_constant() {
        MPoly::one(start.vars())
    } else {
        g
    }
}

/// The coefficient (in variable `i`) with the fewest terms among `polys`,
/// together with the polynomials themselves.
fn smallest_coeff<'a>(polys: &[&'a MPoly], i: usize) -> (MPoly, Vec<&'a MPoly>) {
    let start = polys
        .iter()
        .flat_map(|p| p.coeffs_in(i))
        .filter(|c| !c.is_zero())
        .min_by_key(|c| c.num_terms())
        .expect("nonzero polynomials");
    (start, polys.to_vec())
}

/// gcd of two polynomials that are primitive in variable `v` and both of positive degree in it.
fn primitive_prs(pa: MPoly, pb: MPoly, v: usize) -> MPoly {
    if coprime_by_specialization(&pa, &pb, v) {
        return MPoly::one(pa.vars());
    }
    let (mut f, mut g) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let (_, r, _) = f.pseudo_divmod_in(&g, v);
        if r.is_zero() {
            return g.monic();
        }
        if r.degree_in(v) == 0 {
            return MPoly::one(f.vars());
        }
        f = g;
        g = primitive_part_in(&r, v).monic();
    }
}

const SPECIALIZATION_VALUES: [i64; 12] = [3, -2, 5, 7, -4, 11, 2, -9, 13, 6, -5, 17];

/// Certifies `deg_v gcd(pa, pb) = 0` by specializing every other variable.
/// Returns `false` when inconclusive.
fn coprime_by_specialization(pa: &MPoly, pb: &MPoly, v: usize) -> bool {
    let n = pa.nvars();
    let lca = pa.lc_in(v);
    let lcb = pb.lc_in(v);
    for attempt in 0..3 {
        let point: Vec<Rational> = (0..n)
            .map(|j| {
                let k = (j * 5 + attempt * 7) % SPECIALIZATION_VALUES.len();
                Rational::from_integer(SPECIALIZATION_VALUES[k].into())
            })
            .collect();
        if lca.eval(&point).is_zero() || lcb.eval(&point).is_zero() {
            continue;
        }
        let ua = UniPoly::new(pa.specialize(v, &point));
        let ub = UniPoly::new(pb.specialize(v, &point));
        return UniPoly::gcd(&ua, &ub).degree() == Some(0);
    }
    false
}
