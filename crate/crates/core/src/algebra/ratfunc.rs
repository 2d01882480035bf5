//! Elements of the fraction field Q(x_1, ..., x_n).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use super::gcd::gcd;
use super::mpoly::{MPoly, Vars};
use super::{AlgebraError, Rational};

/// Reduced fraction `num / den`.
///
/// Canonical form: `gcd(num, den) = 1` and the leading graded-lex
/// coefficient of `den` is 1 (so a polynomial has `den = 1`). Two equal
/// rational functions are therefore structurally equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, AlgebraError> {
        num.check_same_vars(&den)?;
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(p: MPoly) -> Self {
        let den = MPoly::one(p.vars());
        RatFunc { num: p, den }
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_poly(MPoly::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(MPoly::one(vars))
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::from_poly(MPoly::constant(vars, c))
    }

    fn reduce(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        if let Some(c) = den.constant_value() {
            let inv = c.recip();
            let den = MPoly::one(num.vars());
            return RatFunc {
                num: num.scale(&inv),
                den,
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::normalized(num, den)
    }

    /// Rescales an already coprime pair so the denominator is monic.
    fn normalized(num: MPoly, den: MPoly) -> Self {
        let lc = den.leading_coeff().expect("nonzero denominator").clone();
        if lc == Rational::from_integer(1.into()) {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&MPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self, AlgebraError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Partial derivative with respect to variable `i` (quotient rule, reduced).
    pub fn diff(&self, i: usize) -> Self {
        let dn = self.num.derivative(i);
        if self.is_polynomial() {
            return Self::from_poly(dn);
        }
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        // (n' d - n d') / d^2, with the common factor gcd(d, d') removed first
        let g = gcd(&self.den, &dd);
        let d_red = self.den.div_exact(&g).expect("gcd divides");
        let dd_red = dd.div_exact(&g).expect("gcd divides");
        let num = &(&dn * &d_red) - &(&self.num * &dd_red);
        Self::reduce(num, &self.den * &d_red)
    }

    /// Partial derivative with respect to the named variable.
    pub fn diff_var(&self, name: &str) -> Result<Self, AlgebraError> {
        let i = self
            .num
            .var_index(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(self.diff(i))
    }

    /// Exact value at a point, or `None` at a pole.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        self.num.eval_complex(point) / self.den.eval_complex(point)
    }

    /// Substitutes polynomial images (over `target`) for the variables.
    pub fn compose(&self, target: &Vars, images: &[MPoly]) -> Result<Self, AlgebraError> {
        let num = self.num.compose(target, images);
        let den = self.den.compose(target, images);
        Self::new(num, den)
    }

    pub fn reindex(&self, target: &Vars) -> Result<Self, AlgebraError> {
        Ok(RatFunc {
            num: self.num.reindex(target)?,
            den: self.den.reindex(target)?,
        })
    }
}

fn assert_same(a: &RatFunc, b: &RatFunc) {
    if !a.num.same_vars(&b.num) {
        panic!(
            "rational functions over different variables: {:?} vs {:?}",
            a.vars(),
            b.vars()
        );
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        assert_same(self, rhs);
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.is_polynomial() {
                return RatFunc::from_poly(&self.num + &rhs.num);
            }
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        if self.is_polynomial() {
            return RatFunc::normalized(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        if rhs.is_polynomial() {
            return RatFunc::normalized(&self.num + &(&rhs.num * &self.den), self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        let den = &(&d1 * &d2) * &g;
        if g.is_constant() {
            RatFunc::normalized(num, den)
        } else {
            RatFunc::reduce(num, den)
        }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        assert_same(self, rhs);
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.vars());
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel so the product is already reduced
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RatFunc::normalized(&n1 * &n2, &d1 * &d2)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: RatFunc) -> RatFunc {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<MPoly> for RatFunc {
    fn from(p: MPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[{}]({})", self.vars().join(","), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mpoly::vars_from;
    use crate::algebra::rational::{rat, ratio};

    fn xv() -> Vars {
        vars_from(&["x"])
    }

    fn px(c: &[i64]) -> MPoly {
        MPoly::from_terms(&xv(), c.iter().enumerate().map(|(k, &v)| (vec![k as u32], rat(v)))).unwrap()
    }

    #[test]
    fn reduces_to_canonical_form() {
        // (x^2 - 1) / (2x + 2) = (x - 1)/2
        let f = RatFunc::new(px(&[-1, 0, 1]), px(&[2, 2])).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.num(), &px(&[-1, 1]).scale(&ratio(1, 2)));
        // 1 / (-x) has monic denominator x
        let g = RatFunc::new(px(&[1]), px(&[0, -1])).unwrap();
        assert_eq!(g.den(), &px(&[0, 1]));
        assert_eq!(g.num(), &px(&[-1]));
    }

    #[test]
    fn derivative_examples() {
        let x2 = RatFunc::from_poly(px(&[0, 0, 1]));
        assert_eq!(x2.diff_var("x").unwrap(), RatFunc::from_poly(px(&[0, 2])));
        let inv = RatFunc::new(px(&[1]), px(&[0, 1])).unwrap();
        assert_eq!(
            inv.diff_var("x").unwrap(),
            RatFunc::new(px(&[-1]), px(&[0, 0, 1])).unwrap()
        );
        // d/da (a^2/2 + b) = a
        let ab = vars_from(&["a", "b"]);
        let f = MPoly::from_terms(&ab, vec![(vec![2, 0], ratio(1, 2)), (vec![0, 1], rat(1))]).unwrap();
        assert_eq!(
            RatFunc::from_poly(f).diff_var("a").unwrap(),
            RatFunc::from_poly(MPoly::var(&ab, 0))
        );
        assert!(matches!(
            x2.diff_var("z"),
            Err(AlgebraError::UnknownVariable(_))
        ));
    }

    #[test]
    fn field_operations() {
        let a = RatFunc::new(px(&[1]), px(&[-1, 1])).unwrap();
        let b = RatFunc::new(px(&[1]), px(&[1, 1])).unwrap();
        // 1/(x-1) + 1/(x+1) = 2x/(x^2-1)
        assert_eq!(&a + &b, RatFunc::new(px(&[0, 2]), px(&[-1, 0, 1])).unwrap());
        assert_eq!(&(&a * &b).inv().unwrap(), &RatFunc::from_poly(px(&[-1, 0, 1])));
        assert!((&a - &a).is_zero());
        assert_eq!(a.checked_div(&a).unwrap(), RatFunc::one(&xv()));
        assert!(RatFunc::new(px(&[1]), MPoly::zero(&xv())).is_err());
    }
}
