//! JSON forms. Sparse polynomials use
//! `{"n": int, "terms": [{"vars": [int...], "coef": "p/q"}]}` with 1-based
//! variables; structured polynomials serialize their constructor tree under a
//! `form` tag.

use serde::{Deserialize, Serialize};

use super::{parse_rational, Coef, Monomial, Rational, SparsePolynomial, StructuredPolynomial, UniPoly};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct TermJson {
    vars: Vec<usize>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct SparseJson {
    n: usize,
    terms: Vec<TermJson>,
}

impl SparseJson {
    fn from_poly<C: Coef>(p: &SparsePolynomial<C>) -> Self {
        SparseJson {
            n: p.dim(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson { vars: m.vars().map(|j| j + 1).collect(), coef: c.to_text() })
                .collect(),
        }
    }

    fn into_poly<C: Coef>(self) -> Result<SparsePolynomial<C>> {
        let terms = self
            .terms
            .into_iter()
            .map(|t| {
                if t.vars.contains(&0) {
                    return Err(Error::input("polynomial variables are 1-based"));
                }
                let vars: Vec<usize> = t.vars.iter().map(|v| v - 1).collect();
                Ok((Monomial::from_vars(&vars)?, C::parse_text(&t.coef)?))
            })
            .collect::<Result<Vec<_>>>()?;
        SparsePolynomial::from_terms(self.n, terms)
    }
}

impl<C: Coef> Serialize for SparsePolynomial<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SparseJson::from_poly(self).serialize(s)
    }
}

impl<'de, C: Coef> Deserialize<'de> for SparsePolynomial<C> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SparseJson::deserialize(d)?
            .into_poly()
            .map_err(serde::de::Error::custom)
    }
}

/// Coefficient list of a univariate polynomial as rational strings.
#[derive(Serialize, Deserialize)]
#[serde(transparent)]
pub struct UniPolyJson(pub Vec<String>);

impl From<&UniPoly> for UniPolyJson {
    fn from(p: &UniPoly) -> Self {
        UniPolyJson(p.coeffs().iter().map(|c| c.to_string()).collect())
    }
}

impl TryFrom<UniPolyJson> for UniPoly {
    type Error = Error;
    fn try_from(j: UniPolyJson) -> Result<Self> {
        Ok(UniPoly::new(j.0.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?))
    }
}

impl Serialize for UniPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        UniPolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        UniPoly::try_from(UniPolyJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
enum StructuredJson {
    Sparse {
        n: usize,
        terms: Vec<TermJson>,
    },
    Affine {
        outer: UniPoly,
        w0: i64,
        w: Vec<i64>,
    },
    Composed {
        outer: UniPoly,
        inner: SparsePolynomial<Rational>,
    },
    Sum {
        constant: String,
        parts: Vec<StructuredPolynomial>,
    },
}

impl Serialize for StructuredPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let j = match self {
            StructuredPolynomial::Sparse(p) => {
                let sj = SparseJson::from_poly(p);
                StructuredJson::Sparse { n: sj.n, terms: sj.terms }
            }
            StructuredPolynomial::AffineComposed { outer, w0, w } => {
                StructuredJson::Affine { outer: outer.clone(), w0: *w0, w: w.clone() }
            }
            StructuredPolynomial::Composed { outer, inner } => {
                StructuredJson::Composed { outer: outer.clone(), inner: inner.clone() }
            }
            StructuredPolynomial::Sum { parts, constant } => {
                StructuredJson::Sum { constant: constant.to_string(), parts: parts.clone() }
            }
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StructuredPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        Ok(match StructuredJson::deserialize(d)? {
            StructuredJson::Sparse { n, terms } => {
                StructuredPolynomial::Sparse(SparseJson { n, terms }.into_poly().map_err(D::Error::custom)?)
            }
            StructuredJson::Affine { outer, w0, w } => StructuredPolynomial::AffineComposed { outer, w0, w },
            StructuredJson::Composed { outer, inner } => StructuredPolynomial::Composed { outer, inner },
            StructuredJson::Sum { constant, parts } => StructuredPolynomial::Sum {
                constant: parse_rational(&constant).map_err(D::Error::custom)?,
                parts,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{chebyshev, int, rational};

    #[test]
    fn sparse_schema() {
        let p = SparsePolynomial::from_terms(3, [(Monomial(0b101), rational(-1, 2)), (Monomial::ONE, int(2))]).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"n": 3, "terms": [{"vars": [], "coef": "2"}, {"vars": [1, 3], "coef": "-1/2"}]})
        );
        let back: SparsePolynomial<Rational> = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
        let bad = serde_json::json!({"n": 2, "terms": [{"vars": [0], "coef": "1"}]});
        assert!(serde_json::from_value::<SparsePolynomial<Rational>>(bad).is_err());
    }

    #[test]
    fn structured_tree_round_trips() {
        let p = StructuredPolynomial::Sum {
            parts: vec![
                StructuredPolynomial::AffineComposed { outer: chebyshev(3), w0: 1, w: vec![1, -1] },
                StructuredPolynomial::Composed {
                    outer: chebyshev(2).scale(&rational(1, 3)),
                    inner: SparsePolynomial::variable(2, 1),
                },
                StructuredPolynomial::constant(2, rational(5, 7)),
            ],
            constant: int(1),
        };
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"form\":\"sum\""));
        let back: StructuredPolynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}
