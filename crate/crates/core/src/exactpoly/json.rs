use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::naming::VariableNaming;
use super::polynomial::Polynomial;
use super::{PolyError, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub num: String,
    pub den: String,
    pub exps: Vec<u32>,
}

/// Wire form of a polynomial. Terms are listed in descending graded-lex
/// order; coefficients are decimal strings of the reduced fraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub nvars: usize,
    pub names: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        PolynomialJson {
            nvars: p.nvars(),
            names: VariableNaming::interleaved(p.nvars()).names().to_vec(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                    exps: m.exponents().to_vec(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolynomialJson> for Polynomial {
    type Error = PolyError;

    fn try_from(js: PolynomialJson) -> Result<Self, PolyError> {
        if js.names.len() != js.nvars {
            return Err(PolyError::Json(format!(
                "{} names for {} variables",
                js.names.len(),
                js.nvars
            )));
        }
        if VariableNaming::custom(js.names.clone()).is_none() {
            return Err(PolyError::Json("duplicate variable names".into()));
        }
        let mut terms = Vec::with_capacity(js.terms.len());
        for t in js.terms {
            let num: BigInt = t
                .num
                .parse()
                .map_err(|_| PolyError::Json(format!("bad numerator {:?}", t.num)))?;
            let den: BigInt = t
                .den
                .parse()
                .map_err(|_| PolyError::Json(format!("bad denominator {:?}", t.den)))?;
            if den == BigInt::from(0) {
                return Err(PolyError::Json("zero denominator".into()));
            }
            terms.push((t.exps, Rational::new(num, den)));
        }
        Polynomial::from_terms(js.nvars, terms)
    }
}

impl Polynomial {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PolynomialJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Polynomial, PolyError> {
        let js: PolynomialJson =
            serde_json::from_str(s).map_err(|e| PolyError::Json(e.to_string()))?;
        Polynomial::try_from(js)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format_is_exact() {
        let p = Polynomial::var(2, 0) * Polynomial::var(2, 1)
            - Polynomial::constant(2, Rational::new(1.into(), 3.into()));
        let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "nvars": 2,
                "names": ["x1", "y1"],
                "terms": [
                    {"num": "1", "den": "1", "exps": [1, 1]},
                    {"num": "-1", "den": "3", "exps": [0, 0]}
                ]
            })
        );
        assert_eq!(Polynomial::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn rejects_malformed_input() {
        let bad_len = r#"{"nvars":2,"names":["x1","y1"],"terms":[{"num":"1","den":"1","exps":[1]}]}"#;
        assert!(Polynomial::from_json(bad_len).is_err());
        let zero_den = r#"{"nvars":1,"names":["z"],"terms":[{"num":"1","den":"0","exps":[1]}]}"#;
        assert!(Polynomial::from_json(zero_den).is_err());
        let bad_num = r#"{"nvars":1,"names":["z"],"terms":[{"num":"1.5","den":"1","exps":[1]}]}"#;
        assert!(Polynomial::from_json(bad_num).is_err());
    }

    #[test]
    fn non_canonical_input_is_canonicalized() {
        let s = r#"{"nvars":1,"names":["z"],"terms":[
            {"num":"2","den":"4","exps":[1]},
            {"num":"-1","den":"2","exps":[1]},
            {"num":"3","den":"-6","exps":[0]}]}"#;
        let p = Polynomial::from_json(s).unwrap();
        assert_eq!(p, Polynomial::constant(1, Rational::new((-1).into(), 2.into())));
    }
}
