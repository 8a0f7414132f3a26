//! Polynomial representations: exact univariate polynomials, sparse
//! multilinear polynomials over the cube, and structured (unexpanded)
//! compositions used to carry the constructed approximants.

mod json;
mod sparse;
mod structured;
mod uni;

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

pub use json::UniPolyJson;
pub use sparse::{monomials_up_to, num_monomials_up_to, Monomial, SparsePolynomial};
pub use structured::{ExpansionCap, StructuredPolynomial, WeightDegree};
pub use uni::{chebyshev, UniPoly};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    match ToPrimitive::to_f64(q) {
        Some(v) if v.is_finite() => v,
        _ => {
            let mag = uni::log_abs(q).exp();
            if q.is_negative() {
                -mag
            } else {
                mag
            }
        }
    }
}

/// Exact rational value of a finite float.
pub fn f64_to_rational(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::input(format!("non-finite value {v}")))
}

/// Parses `p/q`, an integer, or a decimal/float literal (converted exactly).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.contains('/') {
        return Rational::from_str(s).map_err(|_| Error::input(format!("bad rational {s:?}")));
    }
    if let Ok(i) = BigInt::from_str(s) {
        return Ok(Rational::from_integer(i));
    }
    let v: f64 = s
        .parse()
        .map_err(|_| Error::input(format!("bad number {s:?}")))?;
    f64_to_rational(v)
}

/// Coefficient types a [`SparsePolynomial`] may carry.
pub trait Coef: Clone + Debug + PartialEq + Signed + Send + Sync + 'static {
    fn to_f64(&self) -> f64;
    fn from_i64(v: i64) -> Self;
    fn to_text(&self) -> String;
    fn parse_text(s: &str) -> Result<Self>;
}

impl Coef for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_text(&self) -> String {
        // Shortest representation that parses back to the same float.
        format!("{self:?}")
    }
    fn parse_text(s: &str) -> Result<Self> {
        if s.contains('/') {
            return Ok(rational_to_f64(&parse_rational(s)?));
        }
        s.trim()
            .parse()
            .map_err(|_| Error::input(format!("bad coefficient {s:?}")))
    }
}

impl Coef for Rational {
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn from_i64(v: i64) -> Self {
        int(v)
    }
    fn to_text(&self) -> String {
        self.to_string()
    }
    fn parse_text(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

pub(crate) fn is_zero_coef<C: Coef>(c: &C) -> bool {
    c.is_zero()
}
