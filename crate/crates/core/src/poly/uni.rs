use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{rational_to_f64, Rational};

/// A univariate polynomial with exact rational coefficients; `coeffs[i]` is
/// the coefficient of `t^i`. Trailing zeros are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
    // coeffs[i] == numer[i] / denom
    numer: Vec<BigInt>,
    denom: BigInt,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let denom = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numer = coeffs
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        UniPoly { coeffs, numer, denom }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly::new(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn t() -> Self {
        UniPoly::from_ints(&[0, 1])
    }

    /// `t - r`.
    pub fn linear_root(r: i64) -> Self {
        UniPoly::from_ints(&[-r, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        if t.is_integer() {
            return self.eval_int(t.numer());
        }
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Exact value at an integer; the Horner loop runs on the
    /// common-denominator numerators.
    pub fn eval_int(&self, t: &BigInt) -> Rational {
        let mut acc = BigInt::zero();
        for c in self.numer.iter().rev() {
            acc = acc * t + c;
        }
        Rational::new(acc, self.denom.clone())
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + rational_to_f64(c))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        UniPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &UniPoly) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        UniPoly::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    pub fn add_constant(&self, c: &Rational) -> Self {
        self.add(&UniPoly::constant(c.clone()))
    }

    pub fn mul(&self, other: &UniPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = UniPoly::constant(Rational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `t -> self(scale * t + shift)`.
    pub fn compose_affine(&self, scale: &Rational, shift: &Rational) -> Self {
        let inner = UniPoly::new(vec![shift.clone(), scale.clone()]);
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner).add_constant(c);
        }
        acc
    }

    /// `t -> self(-t)`.
    pub fn reflect(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// `sum_i |c_i| * base^i`, an upper bound on `|self(t)|` for `|t| <= base`.
    pub fn abs_bound(&self, base: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * base + rational_to_f64(&c.abs()))
    }

    /// Largest `log(|c|) / log(base)` over the nonzero coefficients.
    pub fn log_coeff_exponent(&self, base: f64) -> f64 {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| log_abs(c) / base.ln())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Natural log of `|q|` for rationals beyond `f64` range.
pub(crate) fn log_abs(q: &Rational) -> f64 {
    fn log_int(v: &BigInt) -> f64 {
        let bits = v.bits();
        if bits < 1000 {
            return v.abs().to_f64().unwrap_or(f64::INFINITY).ln();
        }
        let shift = bits - 53;
        let top = (v.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
    log_int(q.numer()) - log_int(q.denom())
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "t")?,
                1 => write!(f, "{a}t")?,
                _ if a.is_one() => write!(f, "t^{i}")?,
                _ => write!(f, "{a}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Chebyshev polynomial of the first kind, from `T_0 = 1`, `T_1 = t`,
/// `T_{k+1} = 2t T_k - T_{k-1}`.
pub fn chebyshev(d: usize) -> UniPoly {
    let two_t = UniPoly::from_ints(&[0, 2]);
    let mut prev = UniPoly::from_ints(&[1]);
    if d == 0 {
        return prev;
    }
    let mut cur = UniPoly::t();
    for _ in 1..d {
        let next = two_t.mul(&cur).add(&prev.neg());
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}
