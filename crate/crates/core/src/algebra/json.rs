//! JSON encoding of polynomials and rational functions.
//!
//! `{"terms":[{"coeff":"-3/2","exps":[1,2]}],"vars":["x","y"]}` with terms in
//! descending graded-lex order and coefficients as decimal fraction strings.
//! Keys are emitted in sorted order, so the compact rendering is canonical.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::mpoly::{vars_from, MPoly, Vars};
use super::ratfunc::RatFunc;
use super::rational::{format_rational, parse_rational};
use crate::error::SchemaError;

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
    pub vars: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: String,
    pub exps: Vec<u32>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct RatFuncJson {
    pub den: PolyJson,
    pub num: PolyJson,
}

impl From<&MPoly> for PolyJson {
    fn from(p: &MPoly) -> Self {
        PolyJson {
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    coeff: format_rational(c),
                    exps: m.exps().to_vec(),
                })
                .collect(),
            vars: p.vars().to_vec(),
        }
    }
}

impl PolyJson {
    /// Validates and converts; `path` prefixes error locations.
    pub fn to_poly(&self, path: &str) -> Result<MPoly, SchemaError> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.vars {
            if v.is_empty() {
                return Err(SchemaError::new(format!("{path}.vars"), "empty variable name"));
            }
            if !seen.insert(v) {
                return Err(SchemaError::new(
                    format!("{path}.vars"),
                    format!("duplicate variable `{v}`"),
                ));
            }
        }
        let vars: Vars = vars_from(&self.vars);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, t) in self.terms.iter().enumerate() {
            if t.exps.len() != vars.len() {
                return Err(SchemaError::new(
                    format!("{path}.terms[{k}].exps"),
                    format!(
                        "exponent vector has length {} but there are {} vars",
                        t.exps.len(),
                        vars.len()
                    ),
                ));
            }
            let c = parse_rational(&t.coeff)
                .map_err(|e| SchemaError::new(format!("{path}.terms[{k}].coeff"), e))?;
            terms.push((t.exps.clone(), c));
        }
        MPoly::from_terms(&vars, terms)
            .map_err(|e| SchemaError::new(format!("{path}.terms"), e.to_string()))
    }
}

pub fn poly_to_json(p: &MPoly) -> Value {
    serde_json::to_value(PolyJson::from(p)).expect("polynomial serializes")
}

pub fn poly_from_json(v: &Value, path: &str) -> Result<MPoly, SchemaError> {
    let pj: PolyJson = serde_json::from_value(v.clone())
        .map_err(|e| SchemaError::new(path.to_string(), e.to_string()))?;
    pj.to_poly(path)
}

pub fn ratfunc_to_json(f: &RatFunc) -> Value {
    serde_json::to_value(RatFuncJson {
        den: PolyJson::from(f.den()),
        num: PolyJson::from(f.num()),
    })
    .expect("rational function serializes")
}

pub fn ratfunc_from_json(v: &Value, path: &str) -> Result<RatFunc, SchemaError> {
    let rj: RatFuncJson = serde_json::from_value(v.clone())
        .map_err(|e| SchemaError::new(path.to_string(), e.to_string()))?;
    let num = rj.num.to_poly(&format!("{path}.num"))?;
    let den = rj.den.to_poly(&format!("{path}.den"))?;
    if num.vars() != den.vars() {
        return Err(SchemaError::new(
            format!("{path}.den.vars"),
            "numerator and denominator must share vars",
        ));
    }
    RatFunc::new(num, den).map_err(|e| SchemaError::new(format!("{path}.den"), e.to_string()))
}

/// Compact canonical rendering (keys sorted, no whitespace).
pub fn canonical_string(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON value serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_roundtrip_is_bit_exact() {
        let s = r#"{"terms":[{"coeff":"1","exps":[0,2]},{"coeff":"-3/2","exps":[1,0]}],"vars":["x","y"]}"#;
        let v: Value = serde_json::from_str(s).unwrap();
        let p = poly_from_json(&v, "P").unwrap();
        assert_eq!(canonical_string(&poly_to_json(&p)), s);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let v: Value = serde_json::from_str(r#"{"vars":["x"]}"#).unwrap();
        let e = poly_from_json(&v, "P").unwrap_err();
        assert!(e.to_string().contains("terms"), "{e}");
        let v: Value =
            serde_json::from_str(r#"{"terms":[{"coeff":"1","exps":[1,1]}],"vars":["x"]}"#).unwrap();
        let e = poly_from_json(&v, "P").unwrap_err();
        assert!(e.to_string().contains("P.terms[0].exps"), "{e}");
        let v: Value =
            serde_json::from_str(r#"{"terms":[{"coeff":"1/0","exps":[1]}],"vars":["x"]}"#).unwrap();
        assert!(poly_from_json(&v, "P").unwrap_err().to_string().contains("coeff"));
    }

    #[test]
    fn non_canonical_input_is_normalized() {
        let v: Value = serde_json::from_str(
            r#"{"terms":[{"coeff":"2/4","exps":[0]},{"coeff":"1","exps":[1]},{"coeff":"1/2","exps":[0]},{"coeff":"0","exps":[3]}],"vars":["x"]}"#,
        )
        .unwrap();
        let p = poly_from_json(&v, "P").unwrap();
        assert_eq!(
            canonical_string(&poly_to_json(&p)),
            r#"{"terms":[{"coeff":"1","exps":[1]},{"coeff":"1","exps":[0]}],"vars":["x"]}"#
        );
    }
}
