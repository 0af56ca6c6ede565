//! JSON wire format for exact polynomials and maps.
//!
//! ```json
//! {"terms":[{"i":1,"j":0,"re":["3","2"],"im":["0","1"]}]}
//! ```
//!
//! Integers inside coefficients are decimal strings so that arbitrary
//! precision survives any JSON reader. Terms appear in canonical order and
//! zero coefficients are rejected on input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{BivariatePolynomial, GaussianRational, Monomial, PlanarPolyMap, PolyError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson(pub String, pub String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub re: RationalJson,
    pub im: RationalJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub i: u32,
    pub j: u32,
    pub re: RationalJson,
    pub im: RationalJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub first: PolyJson,
    pub second: PolyJson,
}

fn rational_to_json(r: &BigRational) -> RationalJson {
    RationalJson(r.numer().to_string(), r.denom().to_string())
}

fn rational_from_json(r: &RationalJson, field: &str) -> Result<BigRational, PolyError> {
    let num: BigInt = r
        .0
        .parse()
        .map_err(|_| PolyError::Schema(format!("{field}: numerator {:?} is not an integer", r.0)))?;
    let den: BigInt = r
        .1
        .parse()
        .map_err(|_| PolyError::Schema(format!("{field}: denominator {:?} is not an integer", r.1)))?;
    if !den.is_positive() {
        return Err(PolyError::Schema(format!("{field}: denominator must be positive")));
    }
    Ok(BigRational::new(num, den))
}

pub fn coeff_to_json(c: &GaussianRational) -> CoeffJson {
    CoeffJson {
        re: rational_to_json(c.re()),
        im: rational_to_json(c.im()),
    }
}

pub fn coeff_from_json(c: &CoeffJson, field: &str) -> Result<GaussianRational, PolyError> {
    Ok(GaussianRational::new(
        rational_from_json(&c.re, &format!("{field}.re"))?,
        rational_from_json(&c.im, &format!("{field}.im"))?,
    ))
}

impl From<&BivariatePolynomial> for PolyJson {
    fn from(p: &BivariatePolynomial) -> Self {
        PolyJson {
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    i: m.i,
                    j: m.j,
                    re: rational_to_json(c.re()),
                    im: rational_to_json(c.im()),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for BivariatePolynomial {
    type Error = PolyError;

    fn try_from(p: &PolyJson) -> Result<Self, PolyError> {
        let mut prev: Option<Monomial> = None;
        let mut terms = Vec::with_capacity(p.terms.len());
        for (k, t) in p.terms.iter().enumerate() {
            let field = format!("terms[{k}]");
            let m = Monomial::new(t.i, t.j);
            if let Some(prev) = prev {
                if m <= prev {
                    return Err(PolyError::Schema(format!(
                        "{field}: terms must be strictly increasing in canonical order"
                    )));
                }
            }
            prev = Some(m);
            let c = GaussianRational::new(
                rational_from_json(&t.re, &format!("{field}.re"))?,
                rational_from_json(&t.im, &format!("{field}.im"))?,
            );
            if c.is_zero() {
                return Err(PolyError::Schema(format!("{field}: zero coefficient")));
            }
            terms.push((t.i, t.j, c));
        }
        Ok(BivariatePolynomial::from_terms(terms))
    }
}

impl From<&PlanarPolyMap> for MapJson {
    fn from(f: &PlanarPolyMap) -> Self {
        MapJson {
            first: f.first().into(),
            second: f.second().into(),
        }
    }
}

impl TryFrom<&MapJson> for PlanarPolyMap {
    type Error = PolyError;

    fn try_from(m: &MapJson) -> Result<Self, PolyError> {
        Ok(PlanarPolyMap::new((&m.first).try_into()?, (&m.second).try_into()?))
    }
}

pub fn poly_to_json(p: &BivariatePolynomial) -> String {
    serde_json::to_string(&PolyJson::from(p)).expect("serializable")
}

pub fn poly_from_json(s: &str) -> Result<BivariatePolynomial, PolyError> {
    let pj: PolyJson = serde_json::from_str(s).map_err(|e| PolyError::Schema(e.to_string()))?;
    (&pj).try_into()
}

pub fn map_to_json(f: &PlanarPolyMap) -> String {
    serde_json::to_string(&MapJson::from(f)).expect("serializable")
}

pub fn map_from_json(s: &str) -> Result<PlanarPolyMap, PolyError> {
    let mj: MapJson = serde_json::from_str(s).map_err(|e| PolyError::Schema(e.to_string()))?;
    (&mj).try_into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format_shape() {
        let p = BivariatePolynomial::monomial(1, 0, GaussianRational::from_fraction_parts(3, 2, -1, 3));
        assert_eq!(
            poly_to_json(&p),
            r#"{"terms":[{"i":1,"j":0,"re":["3","2"],"im":["-1","3"]}]}"#
        );
    }

    #[test]
    fn rejects_zero_and_unsorted_terms() {
        let zero = r#"{"terms":[{"i":1,"j":0,"re":["0","1"],"im":["0","1"]}]}"#;
        assert!(matches!(poly_from_json(zero), Err(PolyError::Schema(_))));
        let unsorted = r#"{"terms":[{"i":2,"j":0,"re":["1","1"],"im":["0","1"]},{"i":1,"j":0,"re":["1","1"],"im":["0","1"]}]}"#;
        assert!(matches!(poly_from_json(unsorted), Err(PolyError::Schema(_))));
        let bad_den = r#"{"terms":[{"i":1,"j":0,"re":["1","0"],"im":["0","1"]}]}"#;
        assert!(matches!(poly_from_json(bad_den), Err(PolyError::Schema(_))));
    }

    #[test]
    fn big_integers_survive() {
        let big: BigInt = "123456789012345678901234567890123456789".parse().unwrap();
        let c = GaussianRational::new(BigRational::from_integer(big), BigRational::zero());
        let p = BivariatePolynomial::monomial(0, 3, c);
        assert_eq!(poly_from_json(&poly_to_json(&p)).unwrap(), p);
    }
}
