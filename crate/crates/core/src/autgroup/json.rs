//! `{"factors":[{"kind":"affine","a":…,…,"f":…} | {"kind":"elementary","axis":"x"|"y","poly":[…]}]}`

use serde::{Deserialize, Serialize};

use super::word::{AffineFactor, Axis, ElementaryFactor, Factor, TameWord};
use super::AutError;
use crate::polycore::json::{coeff_from_json, coeff_to_json, CoeffJson};
use crate::polycore::UniPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisJson {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FactorJson {
    Affine {
        a: CoeffJson,
        b: CoeffJson,
        c: CoeffJson,
        d: CoeffJson,
        e: CoeffJson,
        f: CoeffJson,
    },
    Elementary {
        axis: AxisJson,
        poly: Vec<CoeffJson>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordJson {
    pub factors: Vec<FactorJson>,
}

impl From<&TameWord> for WordJson {
    fn from(w: &TameWord) -> Self {
        WordJson {
            factors: w
                .factors
                .iter()
                .map(|f| match f {
                    Factor::Affine(a) => {
                        let [aa, b, c, d, e, ff] = a.coefficients().map(coeff_to_json);
                        FactorJson::Affine { a: aa, b, c, d, e, f: ff }
                    }
                    Factor::Elementary(e) => FactorJson::Elementary {
                        axis: match e.axis {
                            Axis::AddToX => AxisJson::X,
                            Axis::AddToY => AxisJson::Y,
                        },
                        poly: e.poly.coeffs().iter().map(coeff_to_json).collect(),
                    },
                })
                .collect(),
        }
    }
}

impl TryFrom<&WordJson> for TameWord {
    type Error = AutError;

    fn try_from(w: &WordJson) -> Result<Self, AutError> {
        let conv = |c: &CoeffJson, field: String| {
            coeff_from_json(c, &field).map_err(|e| AutError::Schema(e.to_string()))
        };
        let mut factors = Vec::with_capacity(w.factors.len());
        for (k, f) in w.factors.iter().enumerate() {
            factors.push(match f {
                FactorJson::Affine { a, b, c, d, e, f } => {
                    let p = |name: &str, v: &CoeffJson| conv(v, format!("factors[{k}].{name}"));
                    Factor::Affine(AffineFactor::new(
                        p("a", a)?,
                        p("b", b)?,
                        p("c", c)?,
                        p("d", d)?,
                        p("e", e)?,
                        p("f", f)?,
                    )?)
                }
                FactorJson::Elementary { axis, poly } => {
                    let coeffs = poly
                        .iter()
                        .enumerate()
                        .map(|(i, c)| conv(c, format!("factors[{k}].poly[{i}]")))
                        .collect::<Result<Vec<_>, _>>()?;
                    let axis = match axis {
                        AxisJson::X => Axis::AddToX,
                        AxisJson::Y => Axis::AddToY,
                    };
                    Factor::Elementary(ElementaryFactor::new(axis, UniPoly::new(coeffs)))
                }
            });
        }
        Ok(TameWord::new(factors))
    }
}

pub fn word_to_json(w: &TameWord) -> String {
    serde_json::to_string(&WordJson::from(w)).expect("serializable")
}

pub fn word_from_json(s: &str) -> Result<TameWord, AutError> {
    let wj: WordJson = serde_json::from_str(s).map_err(|e| AutError::Schema(e.to_string()))?;
    (&wj).try_into()
}
