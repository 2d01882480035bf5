//! Residual currents `α = ∂̄[r(x,y) dx∧dy / P(x,y)]` in rational normal form.
//!
//! The base variables `x_1..x_n` come first and the fiber variable `y` is
//! last. `P` is monic in `y`, so supports never contain vertical components;
//! `r` is reduced modulo `P` and coprime to it, so `P` is the minimal
//! annihilator of the current.

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::json::{poly_from_json, poly_to_json};
use crate::algebra::{
    divmod_y, fiber_index, gcd_y, AlgebraError, FracMatrix, MPoly, RatFunc, Vars,
};
use crate::error::SchemaError;
use crate::residue::param_vars;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurrentError {
    #[error("P is not monic in the fiber variable `{0}`")]
    NotMonic(String),
    #[error("P has degree 0 in the fiber variable `{0}`")]
    ConstantP(String),
    #[error("r is zero: the zero current is degenerate and has no (P, r) form")]
    ZeroCurrent,
    #[error("roots {0} and {1} coincide")]
    CoincidentRoots(usize, usize),
    #[error("weight {0} is zero")]
    ZeroWeight(usize),
    #[error("root {0} is not a polynomial in the base variables")]
    NonPolynomialRoot(usize),
    #[error("weight {0} is not a polynomial in the base variables")]
    NonPolynomialWeight(usize),
    #[error("no weighted points given")]
    NoPoints,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A validated current. Fields are private so the invariants always hold.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidualCurrent {
    p: MPoly,
    r: MPoly,
}

/// Normalizations performed by [`ResidualCurrent::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Adjustment {
    /// `r` had fiber degree `>= d` and was replaced by `r mod P`.
    ReducedModP,
    /// `P` and `r` shared the factor `g`, which was cancelled.
    CancelledCommonFactor(MPoly),
}

impl ResidualCurrent {
    /// Validates `(P, r)`, normalizing `r mod P` and cancelling `gcd_y(P, r)`.
    pub fn validate(p: MPoly, r: MPoly) -> Result<(Self, Vec<Adjustment>), CurrentError> {
        p.check_same_vars(&r)?;
        let y = fiber_index(&p)?;
        let yname = p.vars()[y].clone();
        if p.degree_in(y) == 0 {
            return Err(CurrentError::ConstantP(yname));
        }
        if !p.is_monic_in(y) {
            return Err(CurrentError::NotMonic(yname));
        }
        if r.is_zero() {
            return Err(CurrentError::ZeroCurrent);
        }
        let mut notes = Vec::new();
        let mut r = r;
        if r.degree_in(y) >= p.degree_in(y) {
            r = divmod_y(&r, &p)?.1;
            notes.push(Adjustment::ReducedModP);
            if r.is_zero() {
                return Err(CurrentError::ZeroCurrent);
            }
        }
        let g = gcd_y(&p, &r)?;
        let (p, r) = if g.is_one() {
            (p, r)
        } else {
            let p2 = p.div_exact(&g).expect("gcd divides P");
            let r2 = r.div_exact(&g).expect("gcd divides r");
            notes.push(Adjustment::CancelledCommonFactor(g));
            (p2, r2)
        };
        Ok((ResidualCurrent { p, r }, notes))
    }

    /// The current whose fiber over `x` consists of the points `y_i(x)`
    /// carrying pointwise residues `f_i(x)`.
    ///
    /// `P = Π (y − y_i)` and `r = Σ_i f_i Π_{j≠i} (y − y_j)`, which is the
    /// Lagrange interpolant of `f_i P'(y_i)` at the nodes `y_i`.
    pub fn from_weighted_points(points: &WeightedPoints, fiber: &str) -> Result<Self, CurrentError> {
        let pts = points.points();
        if pts.is_empty() {
            return Err(CurrentError::NoPoints);
        }
        let base = pts[0].0.vars().clone();
        for (i, (root, weight)) in pts.iter().enumerate() {
            if !root.is_polynomial() {
                return Err(CurrentError::NonPolynomialRoot(i));
            }
            if !weight.is_polynomial() {
                return Err(CurrentError::NonPolynomialWeight(i));
            }
            if weight.is_zero() {
                return Err(CurrentError::ZeroWeight(i));
            }
            for (j, (other, _)) in pts.iter().enumerate().take(i) {
                if other == root {
                    return Err(CurrentError::CoincidentRoots(j, i));
                }
            }
        }
        let mut names: Vec<String> = base.to_vec();
        names.push(fiber.to_string());
        let full: Vars = crate::algebra::vars_from(&names);
        let y = MPoly::var(&full, base.len());
        let lift = |f: &RatFunc| f.num().reindex(&full).expect("base variables embed");
        let factors: Vec<MPoly> = pts.iter().map(|(root, _)| &y - &lift(root)).collect();
        let p = factors.iter().fold(MPoly::one(&full), |acc, f| &acc * f);
        let mut r = MPoly::zero(&full);
        for (i, (_, weight)) in pts.iter().enumerate() {
            let others = factors
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(MPoly::one(&full), |acc, (_, f)| &acc * f);
            r = &r + &(&lift(weight) * &others);
        }
        Ok(Self::validate(p, r)?.0)
    }

    pub fn p(&self) -> &MPoly {
        &self.p
    }

    pub fn r(&self) -> &MPoly {
        &self.r
    }

    /// Number of base variables.
    pub fn n(&self) -> usize {
        self.p.nvars() - 1
    }

    /// Fiber degree of `P`.
    pub fn d(&self) -> usize {
        self.p.degree_in(self.n()) as usize
    }

    pub fn vars(&self) -> &Vars {
        self.p.vars()
    }

    pub fn base_vars(&self) -> Vars {
        param_vars(self.p.vars())
    }

    pub fn fiber_var(&self) -> &str {
        &self.p.vars()[self.n()]
    }

    /// Coefficients `a_1..a_d` of `P = y^d + a_1 y^{d-1} + ... + a_d`, over the base variables.
    pub fn coefficients(&self) -> Vec<MPoly> {
        let base = self.base_vars();
        let c = self.p.coeffs_in(self.n());
        (1..=self.d())
            .map(|i| c[self.d() - i].reindex(&base).expect("coefficients avoid y"))
            .collect()
    }

    /// Discriminant of `P` in `y`: `(−1)^{d(d−1)/2} Res_y(P, ∂P/∂y)`, which
    /// for monic `P` equals `Π_{i<j} (y_i − y_j)^2`. Vanishes exactly over
    /// base points with a multiple fiber point.
    pub fn support_discriminant(&self) -> MPoly {
        let base = self.base_vars();
        let y = self.n();
        let d = self.d();
        let dp = self.p.derivative(y);
        let res = resultant_in(&self.p, &dp, y).reindex(&base).expect("resultant avoids y");
        if (d * (d - 1) / 2) % 2 == 1 {
            -res
        } else {
            res
        }
    }

    /// `Res_y(P, r)`, which equals `Π r(y_i)` over the roots `y_i` of `P`.
    ///
    /// Since `det (u_{i+j}) = Π_{i<j} (y_i - y_j)^2 Π r(y_i)/P'(y_i)` and
    /// `Π P'(y_i) = (-1)^{d(d-1)/2} Π_{i<j} (y_i - y_j)^2`, the Hankel
    /// determinant of the traces is `(-1)^{d(d-1)/2}` times this resultant.
    pub fn numerator_resultant(&self) -> MPoly {
        let y = self.n();
        resultant_in(&self.p, &self.r, y)
            .reindex(&self.base_vars())
            .expect("resultant avoids y")
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n(), "P": poly_to_json(&self.p), "r": poly_to_json(&self.r) })
    }

    /// Parses and validates a nonzero current.
    pub fn from_json(v: &Value) -> Result<Self, CurrentJsonError> {
        match Current::from_json(v)? {
            Current::Residual(c) => Ok(c),
            Current::Zero { .. } => Err(CurrentJsonError::Domain(CurrentError::ZeroCurrent)),
        }
    }
}

/// Sylvester-matrix resultant in variable `i`.
pub(crate) fn resultant_in(a: &MPoly, b: &MPoly, i: usize) -> MPoly {
    let ac = a.coeffs_in(i);
    let bc = b.coeffs_in(i);
    let (m, n) = (ac.len() - 1, bc.len() - 1);
    if m == 0 && n == 0 {
        return MPoly::one(a.vars());
    }
    let size = m + n;
    let vars = a.vars();
    let entry = |row: usize, col: usize| -> RatFunc {
        let poly = if row < n {
            // shifted copies of a, highest power first
            col.checked_sub(row).and_then(|k| ac.get(m.checked_sub(k)?)).cloned()
        } else {
            let r = row - n;
            col.checked_sub(r).and_then(|k| bc.get(n.checked_sub(k)?)).cloned()
        };
        RatFunc::from_poly(poly.unwrap_or_else(|| MPoly::zero(vars)))
    };
    let det = FracMatrix::from_fn(size, size, entry)
        .expect("Sylvester matrix shape")
        .determinant()
        .expect("square");
    det.as_poly().expect("polynomial determinant").clone()
}

/// A validated current or the zero current.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Current {
    /// The zero current over the given variables (base variables then fiber).
    Zero { vars: Vars },
    Residual(ResidualCurrent),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurrentJsonError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Domain(#[from] CurrentError),
}

impl Current {
    pub fn is_zero(&self) -> bool {
        matches!(self, Current::Zero { .. })
    }

    pub fn vars(&self) -> &Vars {
        match self {
            Current::Zero { vars } => vars,
            Current::Residual(c) => c.vars(),
        }
    }

    pub fn n(&self) -> usize {
        self.vars().len() - 1
    }

    pub fn as_residual(&self) -> Option<&ResidualCurrent> {
        match self {
            Current::Residual(c) => Some(c),
            Current::Zero { .. } => None,
        }
    }

    /// `{"n":..,"P":..,"r":..}` or, for the zero current, `{"n":..,"vars":[..],"zero":true}`.
    pub fn to_json(&self) -> Value {
        match self {
            Current::Residual(c) => c.to_json(),
            Current::Zero { vars } => json!({ "n": vars.len() - 1, "vars": vars.to_vec(), "zero": true }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, CurrentJsonError> {
        let obj = v
            .as_object()
            .ok_or_else(|| SchemaError::new("$", "current must be a JSON object"))?;
        let n = obj
            .get("n")
            .ok_or_else(|| SchemaError::new("n", "missing field"))?
            .as_u64()
            .ok_or_else(|| SchemaError::new("n", "must be a non-negative integer"))? as usize;
        if obj.get("zero").is_some() {
            if obj.get("zero") != Some(&Value::Bool(true)) {
                return Err(SchemaError::new("zero", "must be true when present").into());
            }
            let vars: Vec<String> = obj
                .get("vars")
                .and_then(|v| serde_json::from_value(v.clone()).ok())
                .ok_or_else(|| SchemaError::new("vars", "zero current needs a list of variable names"))?;
            if vars.len() != n + 1 {
                return Err(SchemaError::new("vars", format!("expected n+1 = {} variables", n + 1)).into());
            }
            return Ok(Current::Zero {
                vars: crate::algebra::vars_from(&vars),
            });
        }
        for key in obj.keys() {
            if !matches!(key.as_str(), "n" | "P" | "r") {
                return Err(SchemaError::new(key.clone(), "unknown field").into());
            }
        }
        let p = poly_from_json(obj.get("P").ok_or_else(|| SchemaError::new("P", "missing field"))?, "P")?;
        let r = poly_from_json(obj.get("r").ok_or_else(|| SchemaError::new("r", "missing field"))?, "r")?;
        if p.nvars() != n + 1 {
            return Err(SchemaError::new(
                "P.vars",
                format!("n = {n} requires n+1 = {} variables (fiber last)", n + 1),
            )
            .into());
        }
        if p.vars() != r.vars() {
            return Err(SchemaError::new("r.vars", "P and r must use the same vars").into());
        }
        Ok(Current::Residual(ResidualCurrent::validate(p, r)?.0))
    }
}

impl From<ResidualCurrent> for Current {
    fn from(c: ResidualCurrent) -> Self {
        Current::Residual(c)
    }
}

/// Fiber points `y_i(x)` with weights `f_i(x)` (the reduced case).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPoints {
    points: Vec<(RatFunc, RatFunc)>,
}

impl WeightedPoints {
    pub fn new(points: Vec<(RatFunc, RatFunc)>) -> Result<Self, CurrentError> {
        if points.is_empty() {
            return Err(CurrentError::NoPoints);
        }
        let vars = points[0].0.vars().clone();
        for (root, w) in &points {
            if root.vars() != &vars || w.vars() != &vars {
                return Err(CurrentError::Algebra(AlgebraError::VarMismatch {
                    left: vars.to_vec(),
                    right: root.vars().to_vec(),
                }));
            }
        }
        Ok(WeightedPoints { points })
    }

    pub fn points(&self) -> &[(RatFunc, RatFunc)] {
        &self.points
    }

    /// `Π_{i<j} (y_i − y_j)^2 · Π f_i`.
    pub fn vandermonde_weight_product(&self) -> RatFunc {
        let vars = self.points[0].0.vars();
        let mut acc = RatFunc::one(vars);
        for (i, (yi, fi)) in self.points.iter().enumerate() {
            acc = &acc * fi;
            for (yj, _) in &self.points[i + 1..] {
                let diff = yi - yj;
                acc = &acc * &(&diff * &diff);
            }
        }
        acc
    }
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

    fn x() -> Vars {
        vars_from(&["x"])
    }

    fn px(c: &[i64]) -> RatFunc {
        RatFunc::from_poly(
            MPoly::from_terms(&x(), c.iter().enumerate().map(|(k, &v)| (vec![k as u32], rat(v)))).unwrap(),
        )
    }

    #[test]
    fn validate_examples() {
        let (c, notes) = ResidualCurrent::validate(p(&[(1, 0, 2), (-1, 1, 0)]), p(&[(1, 0, 0)])).unwrap();
        assert_eq!(c.d(), 2);
        assert!(notes.is_empty());

        let (c, notes) =
            ResidualCurrent::validate(p(&[(1, 0, 2), (-1, 2, 0)]), p(&[(1, 0, 1), (-1, 1, 0)])).unwrap();
        assert_eq!(c.p(), &p(&[(1, 0, 1), (1, 1, 0)]));
        assert_eq!(c.r(), &p(&[(1, 0, 0)]));
        assert_eq!(notes, vec![Adjustment::CancelledCommonFactor(p(&[(1, 0, 1), (-1, 1, 0)]))]);

        assert!(matches!(
            ResidualCurrent::validate(p(&[(2, 0, 1), (-1, 0, 0)]), p(&[(1, 0, 0)])),
            Err(CurrentError::NotMonic(_))
        ));
    }

    #[test]
    fn validate_error_paths() {
        assert!(matches!(
            ResidualCurrent::validate(p(&[(1, 1, 0)]), p(&[(1, 0, 0)])),
            Err(CurrentError::ConstantP(_))
        ));
        assert_eq!(
            ResidualCurrent::validate(p(&[(1, 0, 1)]), MPoly::zero(&xy())),
            Err(CurrentError::ZeroCurrent)
        );
        // r = y*P reduces to zero
        assert_eq!(
            ResidualCurrent::validate(p(&[(1, 0, 1)]), p(&[(1, 0, 2)])),
            Err(CurrentError::ZeroCurrent)
        );
    }

    #[test]
    fn validate_reduces_high_degree_numerator() {
        let (c, notes) = ResidualCurrent::validate(p(&[(1, 0, 2), (-1, 1, 0)]), p(&[(1, 0, 3)])).unwrap();
        assert_eq!(c.r(), &p(&[(1, 1, 1)]));
        assert_eq!(notes, vec![Adjustment::ReducedModP]);
    }

    #[test]
    fn validate_is_idempotent() {
        let (c, _) =
            ResidualCurrent::validate(p(&[(1, 0, 2), (-1, 2, 0)]), p(&[(1, 0, 2), (-1, 1, 1)])).unwrap();
        let (again, notes) = ResidualCurrent::validate(c.p().clone(), c.r().clone()).unwrap();
        assert_eq!(again, c);
        assert!(notes.is_empty());
    }

    #[test]
    fn weighted_points_examples() {
        let pts = WeightedPoints::new(vec![(px(&[0]), px(&[1])), (px(&[1]), px(&[1]))]).unwrap();
        let c = ResidualCurrent::from_weighted_points(&pts, "y").unwrap();
        assert_eq!(c.p(), &p(&[(1, 0, 2), (-1, 0, 1)]));
        assert_eq!(c.r(), &p(&[(2, 0, 1), (-1, 0, 0)]));

        let pts = WeightedPoints::new(vec![(px(&[3]), px(&[5]))]).unwrap();
        let c = ResidualCurrent::from_weighted_points(&pts, "y").unwrap();
        assert_eq!(c.p(), &p(&[(1, 0, 1), (-3, 0, 0)]));
        assert_eq!(c.r(), &p(&[(5, 0, 0)]));

        // {(x,1), (-x,1)} -> P = y^2 - x^2, r = 2y
        let pts = WeightedPoints::new(vec![(px(&[0, 1]), px(&[1])), (px(&[0, -1]), px(&[1]))]).unwrap();
        let c = ResidualCurrent::from_weighted_points(&pts, "y").unwrap();
        assert_eq!(c.p(), &p(&[(1, 0, 2), (-1, 2, 0)]));
        assert_eq!(c.r(), &p(&[(2, 0, 1)]));
    }

    #[test]
    fn weighted_points_errors() {
        let pts = WeightedPoints::new(vec![(px(&[0, 1]), px(&[1])), (px(&[0, 1]), px(&[2]))]).unwrap();
        assert_eq!(
            ResidualCurrent::from_weighted_points(&pts, "y"),
            Err(CurrentError::CoincidentRoots(0, 1))
        );
        let pts = WeightedPoints::new(vec![(px(&[0, 1]), px(&[0]))]).unwrap();
        assert_eq!(ResidualCurrent::from_weighted_points(&pts, "y"), Err(CurrentError::ZeroWeight(0)));
    }

    #[test]
    fn discriminant_examples() {
        let disc = |pp: MPoly| ResidualCurrent::validate(pp, p(&[(1, 0, 0)])).unwrap().0.support_discriminant();
        assert_eq!(disc(p(&[(1, 0, 2), (-1, 1, 0)])), px(&[0, 4]).num().clone());
        assert!(disc(p(&[(1, 0, 1), (-7, 0, 0)])).is_one());
        assert!(disc(p(&[(1, 0, 2)])).is_zero());
        // cubic y^3 - x: discriminant -27 x^2
        assert_eq!(disc(p(&[(1, 0, 3), (-1, 1, 0)])), px(&[0, 0, -27]).num().clone());
    }

    #[test]
    fn numerator_resultant_is_product_over_roots() {
        // P = (y-1)(y-2), r = y + x: r(1) r(2) = (1+x)(2+x)
        let c = ResidualCurrent::validate(p(&[(1, 0, 2), (-3, 0, 1), (2, 0, 0)]), p(&[(1, 0, 1), (1, 1, 0)]))
            .unwrap()
            .0;
        assert_eq!(c.numerator_resultant(), px(&[2, 3, 1]).num().clone());
        // constant numerator: r^d
        let c = ResidualCurrent::validate(p(&[(1, 0, 3), (-1, 1, 0)]), p(&[(2, 0, 0)])).unwrap().0;
        assert_eq!(c.numerator_resultant(), px(&[8]).num().clone());
    }

    #[test]
    fn json_roundtrip_and_schema_errors() {
        let (c, _) = ResidualCurrent::validate(p(&[(1, 0, 2), (-1, 1, 0)]), p(&[(1, 0, 0)])).unwrap();
        let v = c.to_json();
        assert_eq!(ResidualCurrent::from_json(&v).unwrap(), c);
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.starts_with(r#"{"P":"#), "{s}");

        let bad = json!({"n": 2, "P": poly_to_json(c.p()), "r": poly_to_json(c.r())});
        let e = ResidualCurrent::from_json(&bad).unwrap_err();
        assert!(e.to_string().contains("P.vars"), "{e}");

        let not_monic = json!({"n": 1, "P": poly_to_json(&p(&[(2, 0, 1)])), "r": poly_to_json(c.r())});
        assert!(matches!(
            ResidualCurrent::from_json(&not_monic),
            Err(CurrentJsonError::Domain(CurrentError::NotMonic(_)))
        ));

        let z = Current::Zero { vars: xy() };
        assert_eq!(Current::from_json(&z.to_json()).unwrap(), z);
    }
}
