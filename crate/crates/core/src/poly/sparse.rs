use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{is_zero_coef, Coef, Rational};
use crate::cube::{CubePoint, MAX_DIM};
use crate::error::{Error, Result};

/// A multilinear monomial `prod_{j in S} x_j`, stored as the bit set `S`
/// (bit `j` is variable `j`, 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_vars(vars: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &v in vars {
            if v >= MAX_DIM {
                return Err(Error::input(format!("variable index {} too large", v + 1)));
            }
            if mask >> v & 1 == 1 {
                return Err(Error::input(format!("variable {} repeated in a monomial", v + 1)));
            }
            mask |= 1 << v;
        }
        Ok(Monomial(mask))
    }

    pub fn var(j: usize) -> Self {
        Monomial(1 << j)
    }

    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..64).filter(move |j| mask >> j & 1 == 1)
    }

    /// Product on the cube, where `x_j^2 = 1`.
    pub fn times(self, other: Monomial) -> Monomial {
        Monomial(self.0 ^ other.0)
    }
}

// Degree first, then variable sets in lexicographic order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.reverse_bits().cmp(&other.0.reverse_bits()).reverse())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.vars().map(|j| format!("x{}", j + 1)).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// `sum_{j <= d} C(n, j)`.
pub fn num_monomials_up_to(n: usize, d: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for j in 0..=d.min(n) {
        total += binom;
        binom = binom * (n - j) as u128 / (j + 1) as u128;
    }
    total
}

/// All monomials over `n` variables of degree at most `d`, in [`Monomial`]
/// order.
pub fn monomials_up_to(n: usize, d: usize) -> Vec<Monomial> {
    fn rec(start: usize, n: usize, left: usize, mask: u64, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial(mask));
            return;
        }
        for j in start..n {
            rec(j + 1, n, left - 1, mask | 1 << j, out);
        }
    }
    let mut out = Vec::new();
    for deg in 0..=d.min(n) {
        rec(0, n, deg, 0, &mut out);
    }
    out
}

/// A multilinear polynomial over `{-1,+1}^n` with no zero coefficients stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePolynomial<C: Coef> {
    n: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coef> SparsePolynomial<C> {
    pub fn zero(n: usize) -> Self {
        SparsePolynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: C) -> Self {
        let mut p = SparsePolynomial::zero(n);
        p.add_term(Monomial::ONE, c);
        p
    }

    /// `x_j` (0-based).
    pub fn variable(n: usize, j: usize) -> Self {
        let mut p = SparsePolynomial::zero(n);
        p.add_term(Monomial::var(j), C::one());
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::input(format!("dimension {n} exceeds {MAX_DIM}")));
        }
        let mut p = SparsePolynomial::zero(n);
        for (m, c) in terms {
            if m.0 >> n != 0 && n < 64 {
                return Err(Error::input(format!("monomial {m} out of range for n = {n}")));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial) -> C {
        self.terms.get(&m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if is_zero_coef(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e = e.clone() + c;
                if is_zero_coef(e) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn eval(&self, x: &CubePoint) -> Result<C> {
        if x.dim() != self.n {
            return Err(Error::input(format!(
                "point has dimension {} but polynomial has dimension {}",
                x.dim(),
                self.n
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &CubePoint) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            if x.monomial(m.0) == 1 {
                acc = acc + c.clone();
            } else {
                acc = acc - c.clone();
            }
        }
        acc
    }

    pub fn eval_f64(&self, x: &CubePoint) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| f64::from(x.monomial(m.0)) * c.to_f64())
            .sum()
    }

    /// Sum of absolute values of the coefficients.
    pub fn weight(&self) -> C {
        self.terms.values().fold(C::zero(), |acc, c| acc + c.abs())
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = SparsePolynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone() * s.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.n = self.n.max(other.n);
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// Product with multilinear reduction.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = SparsePolynomial::zero(self.n.max(other.n));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.times(*mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// `x -> p(x')` where `x'` flips the variables in `mask`.
    pub fn reflect(&self, mask: u64) -> Self {
        self.map_terms(|m, c| {
            if (m.0 & mask).count_ones() % 2 == 1 {
                -c.clone()
            } else {
                c.clone()
            }
        })
    }

    /// `x -> -p(-x)`.
    pub fn negate_reflect(&self) -> Self {
        self.map_terms(|m, c| {
            if m.degree() % 2 == 0 {
                -c.clone()
            } else {
                c.clone()
            }
        })
    }

    /// Re-indexes variable `j` as `map[j]` in an `n`-dimensional cube.
    pub fn embed(&self, n: usize, map: &[usize]) -> Result<Self> {
        let mut out = SparsePolynomial::zero(n);
        for (m, c) in &self.terms {
            let vars: Vec<usize> = m.vars().map(|j| map[j]).collect();
            if vars.iter().any(|&v| v >= n) {
                return Err(Error::input("embedding maps a variable out of range"));
            }
            out.add_term(Monomial::from_vars(&vars)?, c.clone());
        }
        Ok(out)
    }

    fn map(&self, f: impl Fn(&C) -> C) -> Self {
        self.map_terms(|_, c| f(c))
    }

    fn map_terms(&self, f: impl Fn(&Monomial, &C) -> C) -> Self {
        let mut out = SparsePolynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(*m, f(m, c));
        }
        out
    }

    pub fn to_f64(&self) -> SparsePolynomial<f64> {
        let mut out = SparsePolynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(*m, c.to_f64());
        }
        out
    }
}

impl SparsePolynomial<f64> {
    /// Exact rational image of every coefficient.
    pub fn to_rational(&self) -> Result<SparsePolynomial<Rational>> {
        let mut out = SparsePolynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(*m, super::f64_to_rational(*c)?);
        }
        Ok(out)
    }

    /// Drops coefficients with magnitude at most `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        let mut out = SparsePolynomial::zero(self.n);
        for (m, c) in &self.terms {
            if c.abs() > tol {
                out.add_term(*m, *c);
            }
        }
        out
    }
}

impl SparsePolynomial<Rational> {
    /// The unique multilinear polynomial taking `values[i]` at
    /// `CubePoint::from_index(n, i)`, via the Walsh-Hadamard transform.
    pub fn interpolate(n: usize, values: &[Rational]) -> Result<Self> {
        if values.len() != 1usize << n {
            return Err(Error::input(format!(
                "interpolation needs 2^{n} values, got {}",
                values.len()
            )));
        }
        let denom = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let mut a: Vec<BigInt> = values
            .iter()
            .map(|v| v.numer() * (&denom / v.denom()))
            .collect();
        walsh_hadamard(&mut a);
        let scale = denom << n;
        let mut out = SparsePolynomial::zero(n);
        for (i, c) in a.into_iter().enumerate() {
            if !c.is_zero() {
                out.add_term(Monomial(i as u64), Rational::new(c, scale.clone()));
            }
        }
        Ok(out)
    }

    /// Values at every cube point in enumeration order.
    pub fn tabulate(&self) -> Vec<Rational> {
        let n = self.n;
        let size = 1usize << n;
        // Direct evaluation is cheaper than a full transform for few terms.
        if self.terms.len() <= 2 * n.max(1) {
            return (0..size as u64)
                .map(|i| self.eval_unchecked(&CubePoint::from_index(n, i)))
                .collect();
        }
        let denom = self.terms.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let mut a = vec![BigInt::zero(); size];
        for (m, c) in &self.terms {
            a[m.0 as usize] = c.numer() * (&denom / c.denom());
        }
        walsh_hadamard(&mut a);
        a.into_iter().map(|v| Rational::new(v, denom.clone())).collect()
    }

    pub fn weight_f64(&self) -> f64 {
        super::rational_to_f64(&self.weight())
    }
}

/// In-place unnormalized Walsh-Hadamard transform:
/// `a'[s] = sum_i (-1)^{|s & i|} a[i]`.
fn walsh_hadamard(a: &mut [BigInt]) {
    let len = a.len();
    let mut h = 1;
    while h < len {
        for start in (0..len).step_by(2 * h) {
            for i in start..start + h {
                let (lo, hi) = a.split_at_mut(i + h);
                let x = std::mem::take(&mut lo[i]);
                let y = std::mem::take(&mut hi[0]);
                lo[i] = &x + &y;
                hi[0] = x - y;
            }
        }
        h *= 2;
    }
}

impl<C: Coef> fmt::Display for SparsePolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.0 == 0 {
                    c.to_text()
                } else {
                    format!("{}*{m}", c.to_text())
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{cube_points, BooleanFunction, Concept};
    use crate::poly::{int, rational};

    /// `(x1 + x2 + x3 - x1 x2 x3) / 2`, the exact sign representation of MAJ_3.
    pub(crate) fn maj3() -> SparsePolynomial<Rational> {
        let h = rational(1, 2);
        SparsePolynomial::from_terms(
            3,
            [
                (Monomial::var(0), h.clone()),
                (Monomial::var(1), h.clone()),
                (Monomial::var(2), h.clone()),
                (Monomial(0b111), -h),
            ],
        )
        .unwrap()
    }

    #[test]
    fn maj3_form_matches_majority_everywhere() {
        let p = maj3();
        let maj = Concept::full_majority(3);
        for x in cube_points(3) {
            assert_eq!(p.eval(&x).unwrap(), int(maj.value(&x).as_i8().into()));
        }
        assert_eq!(p.weight(), int(2));
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn weight_and_degree_of_small_polynomial() {
        let p = SparsePolynomial::from_terms(2, [(Monomial::ONE, -1.0), (Monomial::var(0), 2.0)])
            .unwrap();
        assert_eq!(p.weight(), 3.0);
        assert_eq!(p.degree(), 1);
        assert_eq!(p.to_string(), "-1.0 + 2.0*x1");
    }

    #[test]
    fn multiplication_reduces_squares() {
        let x1 = SparsePolynomial::<Rational>::variable(2, 0);
        let x2 = SparsePolynomial::<Rational>::variable(2, 1);
        let l = x1.add(&x2);
        let sq = l.mul(&l);
        assert_eq!(sq.coeff(Monomial::ONE), int(2));
        assert_eq!(sq.coeff(Monomial(0b11)), int(2));
        assert_eq!(sq.len(), 2);
    }

    #[test]
    fn interpolation_inverts_tabulation() {
        let p = maj3().add(&SparsePolynomial::constant(3, rational(-3, 7)));
        let vals = p.tabulate();
        assert_eq!(SparsePolynomial::interpolate(3, &vals).unwrap(), p);
        let dense = SparsePolynomial::from_terms(
            4,
            (0..16u64).map(|m| (Monomial(m), rational(m as i64 - 5, 3))),
        )
        .unwrap();
        let vals = dense.tabulate();
        for x in cube_points(4) {
            assert_eq!(vals[x.index() as usize], dense.eval(&x).unwrap());
        }
        assert_eq!(SparsePolynomial::interpolate(4, &vals).unwrap(), dense);
    }

    #[test]
    fn reflections() {
        let p = maj3();
        for x in cube_points(3) {
            let nr = p.negate_reflect().eval(&x).unwrap();
            assert_eq!(nr, -p.eval(&x.negated()).unwrap());
            let r = p.reflect(0b010).eval(&x).unwrap();
            assert_eq!(r, p.eval(&x.reflected(0b010)).unwrap());
        }
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(num_monomials_up_to(9, 9), 512);
        assert_eq!(num_monomials_up_to(14, 3), 1 + 14 + 91 + 364);
        let ms = monomials_up_to(4, 2);
        assert_eq!(ms.len() as u128, num_monomials_up_to(4, 2));
        let mut sorted = ms.clone();
        sorted.sort();
        assert_eq!(ms, sorted);
        assert_eq!(ms[0], Monomial::ONE);
        assert_eq!(ms[1], Monomial::var(0));
        assert_eq!(ms[5], Monomial(0b0011));
    }

    #[test]
    fn out_of_range_monomial_rejected() {
        assert!(SparsePolynomial::from_terms(2, [(Monomial::var(2), 1.0)]).is_err());
        assert!(Monomial::from_vars(&[1, 1]).is_err());
    }
}
