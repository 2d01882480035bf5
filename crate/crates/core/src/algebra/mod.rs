//! Exact arithmetic over Q: polynomials, rational functions, and linear
//! algebra over the fraction field.

use thiserror::Error;

mod gcd;
pub mod json;
mod matrix;
mod mpoly;
pub mod rational;
mod ratfunc;
mod unipoly;

pub use gcd::{content_in, gcd, gcd_in, lcm, primitive_part_in};
pub use matrix::FracMatrix;
pub use mpoly::{vars_from, MPoly, Monomial, PolyOp, Vars};
pub use ratfunc::RatFunc;
pub use unipoly::UniPoly;

/// Arbitrary-precision fraction, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VarMismatch { left: Vec<String>, right: Vec<String> },
    #[error("divisor is not monic in `{var}`")]
    NotMonic { var: String },
    #[error("divisor has degree 0 in `{var}`")]
    ConstantDivisor { var: String },
    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,
    #[error("matrix is singular (determinant vanishes identically)")]
    Singular,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// `gcd_y` for the fiber variable, which is always the last variable.
pub fn gcd_y(a: &MPoly, b: &MPoly) -> Result<MPoly, AlgebraError> {
    let y = fiber_index(a)?;
    gcd_in(a, b, y)
}

/// Quotient and remainder of division by `b`, monic in the fiber variable.
pub fn divmod_y(a: &MPoly, b: &MPoly) -> Result<(MPoly, MPoly), AlgebraError> {
    let y = fiber_index(a)?;
    a.divmod_monic_in(b, y)
}

pub(crate) fn fiber_index(p: &MPoly) -> Result<usize, AlgebraError> {
    p.nvars()
        .checked_sub(1)
        .ok_or_else(|| AlgebraError::Dimension("polynomial has no fiber variable".into()))
}
