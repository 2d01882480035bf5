//! Random instances for tests and the `verify` command.
//!
//! All generators take an explicit RNG so callers control seeding.

use rand::Rng;

use crate::algebra::{vars_from, MPoly, RatFunc, Rational, Vars};
use crate::current::{ResidualCurrent, WeightedPoints};

/// `x` for one base variable, `x1..xn` otherwise.
pub fn base_vars(n: usize) -> Vars {
    if n == 1 {
        vars_from(&["x"])
    } else {
        vars_from(&(1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>())
    }
}

/// Base variables followed by the fiber variable `y`.
pub fn current_vars(n: usize) -> Vars {
    let mut names = base_vars(n).to_vec();
    names.push("y".into());
    vars_from(&names)
}

/// All exponent vectors of total degree `<= max_degree` in `nvars` variables.
fn exponents(nvars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..nvars {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                let used: u32 = e.iter().sum();
                (0..=max_degree - used).map(move |k| {
                    let mut f = e.clone();
                    f.push(k);
                    f
                })
            })
            .collect();
    }
    out
}

/// A polynomial over `vars` in which each monomial of degree `<= max_degree`
/// appears with probability one half, with a nonzero integer coefficient in
/// `[-bound, bound]`.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, vars: &Vars, max_degree: u32, bound: i64) -> MPoly {
    let mut terms = Vec::new();
    for e in exponents(vars.len(), max_degree) {
        if rng.gen_bool(0.5) {
            terms.push((e, nonzero(rng, bound)));
        }
    }
    MPoly::from_terms(vars, terms).expect("exponents match vars")
}

fn nonzero<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    let v = rng.gen_range(1..=bound.max(1));
    Rational::from_integer(if rng.gen_bool(0.5) { v } else { -v }.into())
}

/// A random current with `n` base variables and fiber degree `d`. The
/// coefficients `a_i` of `P` and `r_j` of `r` have degree `<= coeff_degree`
/// in the base variables; when `graded` is set, `deg a_i <= min(i, coeff_degree)`,
/// so `P` has total degree `d`.
pub fn random_current<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    d: usize,
    coeff_degree: u32,
    bound: i64,
    graded: bool,
) -> ResidualCurrent {
    let base = base_vars(n);
    let vars = current_vars(n);
    let y = n;
    loop {
        let lift = |p: MPoly| p.reindex(&vars).expect("base embeds");
        let mut pc: Vec<MPoly> = (0..d)
            .map(|j| {
                let deg = if graded { coeff_degree.min((d - j) as u32) } else { coeff_degree };
                lift(random_poly(rng, &base, deg, bound))
            })
            .collect();
        pc.push(MPoly::one(&vars));
        let rc: Vec<MPoly> = (0..d)
            .map(|_| lift(random_poly(rng, &base, coeff_degree, bound)))
            .collect();
        let p = MPoly::from_coeffs_in(&vars, y, &pc);
        let r = MPoly::from_coeffs_in(&vars, y, &rc);
        if r.is_zero() {
            continue;
        }
        if let Ok((c, notes)) = ResidualCurrent::validate(p, r) {
            if notes.is_empty() {
                return c;
            }
        }
    }
}

/// `d` distinct polynomial roots with nonzero polynomial weights.
pub fn random_weighted_points<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    d: usize,
    degree: u32,
    bound: i64,
) -> WeightedPoints {
    let base = base_vars(n);
    let mut points: Vec<(RatFunc, RatFunc)> = Vec::with_capacity(d);
    while points.len() < d {
        let root = RatFunc::from_poly(random_poly(rng, &base, degree, bound));
        let weight = RatFunc::from_poly(random_poly(rng, &base, degree, bound));
        if weight.is_zero() || points.iter().any(|(y, _)| y == &root) {
            continue;
        }
        points.push((root, weight));
    }
    WeightedPoints::new(points).expect("nonempty, shared vars")
}
