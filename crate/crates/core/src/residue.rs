//! One-variable residue calculus in the fiber variable.
//!
//! The exact path never looks for poles: the sum of all finite residues of
//! `num/den dy` equals minus the residue at infinity, i.e. the coefficient of
//! `y^(d-1)` in `num mod den` divided by the leading coefficient of `den`.
//! This stays exact, keeps the base parameters symbolic, and is valid for
//! denominators with repeated roots.
//!
//! The floating-point path (companion-matrix roots, trapezoidal contour
//! integration) exists only to cross-check the exact one.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{fiber_index, gcd, vars_from, AlgebraError, MPoly, RatFunc, Vars};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResidueError {
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("repeated root near {re}+{im}i: the specialized denominator is not square-free")]
    RepeatedRoot { re: f64, im: f64 },
    #[error("a pole lies within 1e-6 of the contour")]
    PoleOnContour,
    #[error("a pole at distance {distance} from the center lies outside the contour of radius {radius}")]
    PoleOutsideContour { distance: f64, radius: f64 },
    #[error("non-finite value encountered in the quadrature")]
    NonFinite,
    #[error("invalid contour: {0}")]
    BadContour(String),
    #[error("root finding failed for the specialized denominator")]
    RootFinding,
    #[error("expected {expected} parameter values, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The 1-form `(num/den) dy` on the fiber line; `y` is the last variable and
/// the remaining variables are parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalForm1D {
    num: MPoly,
    den: MPoly,
}

/// A simple pole of a specialized form together with its residue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointResidue {
    pub pole: Complex64,
    pub residue: Complex64,
}

/// Circle `|y - center| = radius` sampled at `points` equispaced nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec {
    center: Complex64,
    radius: f64,
    points: usize,
}

impl ContourSpec {
    pub fn new(center: Complex64, radius: f64, points: usize) -> Result<Self, ResidueError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(ResidueError::BadContour(format!("radius {radius} must be positive")));
        }
        if points < 16 {
            return Err(ResidueError::BadContour(format!("{points} quadrature points, need at least 16")));
        }
        Ok(ContourSpec { center, radius, points })
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn with_points(self, points: usize) -> Result<Self, ResidueError> {
        Self::new(self.center, self.radius, points)
    }
}

/// One row of the oracle report consumed by `verify`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleRecord {
    pub x: Vec<[f64; 2]>,
    pub exact: [f64; 2],
    pub numeric: [f64; 2],
    pub abs_error: f64,
}

impl RationalForm1D {
    /// Builds the form, cancelling any common factor of `num` and `den`.
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, ResidueError> {
        num.check_same_vars(&den)?;
        fiber_index(&den)?;
        if den.is_zero() {
            return Err(ResidueError::ZeroDenominator);
        }
        if num.is_zero() {
            let one = MPoly::one(den.vars());
            return Ok(RationalForm1D { num, den: one });
        }
        let g = gcd(&num, &den);
        if g.is_constant() {
            return Ok(RationalForm1D { num, den });
        }
        Ok(RationalForm1D {
            num: num.div_exact(&g).expect("gcd divides"),
            den: den.div_exact(&g).expect("gcd divides"),
        })
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn param_vars(&self) -> Vars {
        param_vars(self.den.vars())
    }

    /// Sum of the residues at all finite poles, as a rational function of the parameters.
    pub fn residue_sum(&self) -> Result<RatFunc, ResidueError> {
        residue_sum(&self.num, &self.den)
    }

    fn specialized(&self, params: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>), ResidueError> {
        let y = self.den.nvars() - 1;
        if params.len() != y {
            return Err(ResidueError::ParameterCount {
                expected: y,
                got: params.len(),
            });
        }
        let mut point = params.to_vec();
        point.push(Complex64::new(0.0, 0.0));
        let num = self.num.specialize_complex(y, &point);
        let mut den = self.den.specialize_complex(y, &point);
        while den.len() > 1 && den.last().is_some_and(|c| c.norm() == 0.0) {
            den.pop();
        }
        if den.iter().all(|c| c.norm() == 0.0) {
            return Err(ResidueError::ZeroDenominator);
        }
        Ok((num, den))
    }

    /// Numeric poles and residues after specializing the parameters.
    pub fn pointwise_residues(&self, params: &[Complex64]) -> Result<Vec<PointResidue>, ResidueError> {
        let (num, den) = self.specialized(params)?;
        let roots = polynomial_roots(&den)?;
        let dden = derivative(&den);
        roots
            .into_iter()
            .map(|z| {
                let dp = horner(&dden, z);
                let scale: f64 = dden
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c.norm() * z.norm().powi(j as i32))
                    .sum::<f64>()
                    .max(f64::MIN_POSITIVE);
                if dp.norm() < 1e-9 * scale {
                    return Err(ResidueError::RepeatedRoot { re: z.re, im: z.im });
                }
                Ok(PointResidue {
                    pole: z,
                    residue: horner(&num, z) / dp,
                })
            })
            .collect()
    }

    /// Default contour: centered at 0 with radius `2 (1 + max |c_j|)` for the
    /// specialized monic denominator, 256 nodes.
    pub fn default_contour(&self, params: &[Complex64]) -> Result<ContourSpec, ResidueError> {
        let (_, den) = self.specialized(params)?;
        let lc = *den.last().unwrap();
        let bound = den[..den.len() - 1]
            .iter()
            .map(|c| (c / lc).norm())
            .fold(0.0, f64::max);
        ContourSpec::new(Complex64::new(0.0, 0.0), 2.0 * (1.0 + bound), 256)
    }

    /// Like [`default_contour`](Self::default_contour) but with twice the
    /// smaller of the Cauchy bound `1 + max |c_j|` and the Fujiwara bound
    /// `2 max |c_{d-i}|^{1/i}` as radius. The trapezoidal sum cancels terms
    /// of size `R^{deg num - deg den + 1}`, so a tight radius keeps the
    /// roundoff of high moments near machine precision.
    pub fn tight_contour(&self, params: &[Complex64]) -> Result<ContourSpec, ResidueError> {
        let (_, den) = self.specialized(params)?;
        let d = den.len() - 1;
        let lc = den[d];
        let ratio = |j: usize| (den[j] / lc).norm();
        let cauchy = 1.0 + (0..d).map(ratio).fold(0.0, f64::max);
        let fujiwara = (1..=d)
            .map(|i| {
                let c = if i == d { ratio(0) / 2.0 } else { ratio(d - i) };
                c.powf(1.0 / i as f64)
            })
            .fold(0.0, f64::max)
            * 2.0;
        let bound = if fujiwara > 0.0 { cauchy.min(fujiwara) } else { 1.0 };
        ContourSpec::new(Complex64::new(0.0, 0.0), 2.0 * bound, 256)
    }

    /// `1/(2πi) ∮ num/den dy` by the trapezoidal rule.
    pub fn contour_oracle(&self, params: &[Complex64], spec: &ContourSpec) -> Result<Complex64, ResidueError> {
        let (num, den) = self.specialized(params)?;
        for z in polynomial_roots(&den)? {
            let distance = (z - spec.center).norm();
            if (distance - spec.radius).abs() < 1e-6 {
                return Err(ResidueError::PoleOnContour);
            }
            if distance > spec.radius {
                return Err(ResidueError::PoleOutsideContour {
                    distance,
                    radius: spec.radius,
                });
            }
        }
        let n = spec.points;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (n as f64);
            let w = Complex64::from_polar(spec.radius, theta);
            let y = spec.center + w;
            acc += horner(&num, y) / horner(&den, y) * w;
        }
        let value = acc / (n as f64);
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(ResidueError::NonFinite);
        }
        Ok(value)
    }

    /// Compares an exact value (a rational function of the parameters) with the contour integral.
    pub fn oracle_record(
        &self,
        exact: &RatFunc,
        params: &[Complex64],
        spec: &ContourSpec,
    ) -> Result<OracleRecord, ResidueError> {
        let numeric = self.contour_oracle(params, spec)?;
        let e = exact.eval_complex(params);
        Ok(OracleRecord {
            x: params.iter().map(|c| [c.re, c.im]).collect(),
            exact: [e.re, e.im],
            numeric: [numeric.re, numeric.im],
            abs_error: (e - numeric).norm(),
        })
    }
}

pub(crate) fn param_vars(vars: &Vars) -> Vars {
    vars_from(&vars[..vars.len() - 1])
}

/// Sum of finite residues of `num/den dy` (fiber variable last); no reduction needed.
pub fn residue_sum(num: &MPoly, den: &MPoly) -> Result<RatFunc, ResidueError> {
    Ok(fiber_moments(num, den, 1)?.pop().expect("one moment requested"))
}

/// Residue sums of `num · y^k / den` for `k = 0..count`.
///
/// Works over the polynomial ring: with `c` the leading fiber coefficient of
/// `den`, the scaled remainders `S_k = c^{e_k} (num·y^k mod den)` satisfy
/// `S_{k+1} = c·y·S_k − top(S_k)·den`, and the k-th moment is
/// `[y^{d-1}] S_k / c^{e_k + 1}`.
pub fn fiber_moments(num: &MPoly, den: &MPoly, count: usize) -> Result<Vec<RatFunc>, ResidueError> {
    num.check_same_vars(den)?;
    let y = fiber_index(den)?;
    if den.is_zero() {
        return Err(ResidueError::ZeroDenominator);
    }
    let base = param_vars(den.vars());
    let d = den.degree_in(y) as usize;
    if d == 0 {
        return Ok(vec![RatFunc::zero(&base); count]);
    }
    let dc = den.coeffs_in(y);
    let c = dc[d].clone();
    let c_base = c.reindex(&base)?;
    let (_, s0, e0) = num.pseudo_divmod_in(den, y);
    let mut s = s0.coeffs_in(y);
    s.resize(d, MPoly::zero(den.vars()));
    let mut out = Vec::with_capacity(count);
    for (k, e) in (0..count).zip(e0..) {
        let top = s[d - 1].reindex(&base)?;
        out.push(RatFunc::new(top, c_base.pow(e + 1))?);
        if k + 1 == count {
            break;
        }
        let top = s[d - 1].clone();
        let mut next = Vec::with_capacity(d);
        for j in 0..d {
            let shifted = if j == 0 {
                MPoly::zero(den.vars())
            } else {
                &c * &s[j - 1]
            };
            next.push(&shifted - &(&top * &dc[j]));
        }
        s = next;
    }
    Ok(out)
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * j as f64)
        .collect()
}

const SCHUR_MAX_ITERATIONS: usize = 10_000;

/// Roots of a complex polynomial (coefficients lowest power first) as the
/// eigenvalues of its companion matrix, refined by a few Newton steps.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, ResidueError> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Ok(Vec::new());
    }
    // Exact zero roots are split off: the companion matrix of y^m is
    // nilpotent, on which the QR iteration makes no progress.
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count().min(d);
    if zeros > 0 {
        let mut roots = polynomial_roots(&coeffs[zeros..])?;
        roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
        return Ok(roots);
    }
    let lc = coeffs[d];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lc).collect();
    let companion = DMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -monic[i]
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let eig = companion
        .try_schur(f64::EPSILON, SCHUR_MAX_ITERATIONS)
        .and_then(|s| s.eigenvalues())
        .ok_or(ResidueError::RootFinding)?;
    let dm = derivative(&monic);
    Ok(eig
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..3 {
                let dp = horner(&dm, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = horner(&monic, z) / dp;
                if !(step.re.is_finite() && step.im.is_finite()) {
                    break;
                }
                z -= step;
            }
            if z.re.is_finite() && z.im.is_finite() {
                z
            } else {
                z0
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn vars() -> Vars {
        vars_from(&["x", "y"])
    }

    fn p(terms: &[(i64, u32, u32)]) -> MPoly {
        MPoly::from_terms(&vars(), terms.iter().map(|&(c, a, b)| (vec![a, b], rat(c)))).unwrap()
    }

    fn form(num: MPoly, den: MPoly) -> RationalForm1D {
        RationalForm1D::new(num, den).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn residue_sum_examples() {
        let base = vars_from(&["x"]);
        assert_eq!(form(p(&[(1, 0, 0)]), p(&[(1, 0, 1)])).residue_sum().unwrap(), RatFunc::one(&base));
        let den = p(&[(1, 0, 2), (-1, 1, 0)]);
        assert_eq!(form(p(&[(1, 0, 1)]), den.clone()).residue_sum().unwrap(), RatFunc::one(&base));
        assert!(form(p(&[(1, 0, 2)]), den).residue_sum().unwrap().is_zero());
    }

    #[test]
    fn constant_denominator_has_no_residues() {
        let f = form(p(&[(1, 0, 3)]), p(&[(1, 1, 0)]));
        assert!(f.residue_sum().unwrap().is_zero());
        assert!(RationalForm1D::new(p(&[(1, 0, 0)]), MPoly::zero(&vars())).is_err());
    }

    #[test]
    fn non_monic_denominator_is_normalized() {
        // 1/(x y - 1) has one pole y = 1/x with residue 1/x
        let f = form(p(&[(1, 0, 0)]), p(&[(1, 1, 1), (-1, 0, 0)]));
        let base = vars_from(&["x"]);
        let expect = RatFunc::new(MPoly::one(&base), MPoly::var(&base, 0)).unwrap();
        assert_eq!(f.residue_sum().unwrap(), expect);
    }

    #[test]
    fn pointwise_examples() {
        let f = form(p(&[(1, 0, 0)]), p(&[(1, 0, 2), (-1, 0, 0)]));
        let mut r = f.pointwise_residues(&[c(0.3)]).unwrap();
        r.sort_by(|a, b| a.pole.re.partial_cmp(&b.pole.re).unwrap());
        assert!((r[0].pole - c(-1.0)).norm() < 1e-12 && (r[0].residue - c(-0.5)).norm() < 1e-12);
        assert!((r[1].pole - c(1.0)).norm() < 1e-12 && (r[1].residue - c(0.5)).norm() < 1e-12);

        let f = form(p(&[(1, 0, 0)]), p(&[(1, 0, 1)]));
        let r = f.pointwise_residues(&[c(2.0)]).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].pole.norm() < 1e-12 && (r[0].residue - c(1.0)).norm() < 1e-12);

        let f = form(p(&[(2, 0, 1), (-1, 0, 0)]), p(&[(1, 0, 2), (-1, 0, 1)]));
        for pr in f.pointwise_residues(&[c(0.0)]).unwrap() {
            assert!((pr.residue - c(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn repeated_root_is_reported() {
        // y^2 - x at x = 0
        let f = form(p(&[(1, 0, 0)]), p(&[(1, 0, 2), (-1, 1, 0)]));
        assert!(matches!(
            f.pointwise_residues(&[c(0.0)]),
            Err(ResidueError::RepeatedRoot { .. })
        ));
    }

    #[test]
    fn contour_examples() {
        let f = form(p(&[(1, 0, 0)]), p(&[(1, 0, 1)]));
        let spec = ContourSpec::new(c(0.0), 2.0, 256).unwrap();
        assert!((f.contour_oracle(&[c(0.0)], &spec).unwrap() - c(1.0)).norm() < 1e-10);

        let f = form(p(&[(1, 0, 1)]), p(&[(1, 0, 2), (-1, 1, 0)]));
        let spec = ContourSpec::new(c(0.0), 4.0, 256).unwrap();
        assert!((f.contour_oracle(&[c(1.0)], &spec).unwrap() - c(1.0)).norm() < 1e-8);

        let f = form(p(&[(1, 0, 0)]), p(&[(1, 0, 2), (1, 0, 0)]));
        let spec = ContourSpec::new(c(0.0), 0.5, 256).unwrap();
        assert!(matches!(
            f.contour_oracle(&[c(0.0)], &spec),
            Err(ResidueError::PoleOutsideContour { .. })
        ));
        let spec = ContourSpec::new(c(0.0), 1.0, 64).unwrap();
        assert_eq!(f.contour_oracle(&[c(0.0)], &spec), Err(ResidueError::PoleOnContour));
    }

    #[test]
    fn contour_spec_validation() {
        assert!(ContourSpec::new(c(0.0), 0.0, 64).is_err());
        assert!(ContourSpec::new(c(0.0), 1.0, 8).is_err());
    }

    #[test]
    fn default_contour_encloses_poles() {
        let f = form(p(&[(1, 0, 1)]), p(&[(1, 0, 2), (-1, 1, 0)]));
        let spec = f.default_contour(&[c(3.0)]).unwrap();
        assert_eq!(spec.radius(), 8.0);
        assert!((f.contour_oracle(&[c(3.0)], &spec).unwrap() - c(1.0)).norm() < 1e-10);
    }

    #[test]
    fn moments_match_individual_sums() {
        let num = p(&[(2, 1, 1), (1, 0, 0)]);
        let den = p(&[(3, 1, 2), (1, 0, 1), (-1, 2, 0)]);
        let m = fiber_moments(&num, &den, 5).unwrap();
        let y = MPoly::var(&vars(), 1);
        for (k, mk) in m.iter().enumerate() {
            let direct = residue_sum(&(&num * &y.pow(k as u32)), &den).unwrap();
            assert_eq!(&direct, mk, "k = {k}");
        }
    }

    #[test]
    fn roots_at_the_origin() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let roots = polynomial_roots(&[c(0.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        assert_eq!(roots, vec![c(0.0); 3]);
        let mut roots = polynomial_roots(&[c(0.0), c(0.0), c(-1.0), c(1.0)]).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!(roots[0].norm() == 0.0 && roots[1].norm() == 0.0 && (roots[2] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn tight_contour_encloses_the_poles() {
        // y^2 - 100: Cauchy radius 101, Fujiwara 2 sqrt(50)
        let f = form(p(&[(1, 0, 0)]), p(&[(1, 0, 2), (-100, 0, 0)]));
        let x = [Complex64::new(0.0, 0.0)];
        let spec = f.tight_contour(&x).unwrap();
        assert!((spec.radius() - 4.0 * 50f64.sqrt()).abs() < 1e-12);
        assert!(f.contour_oracle(&x, &spec).unwrap().norm() < 1e-12);
        // y^3: all poles at the origin
        let f = form(p(&[(1, 0, 2)]), p(&[(1, 0, 3)]));
        let spec = f.tight_contour(&x).unwrap();
        assert_eq!(spec.radius(), 2.0);
        assert!((f.contour_oracle(&x, &spec).unwrap() - 1.0).norm() < 1e-12);
    }
}
