use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{rational_to_f64, Rational, SparsePolynomial, UniPoly};
use crate::cube::{cube_points, CubePoint};
use crate::error::{Error, Result};

/// Size limits for multilinear expansion, which is exponential in `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionCap {
    pub max_vars: usize,
    pub max_degree: usize,
}

impl Default for ExpansionCap {
    fn default() -> Self {
        ExpansionCap { max_vars: 20, max_degree: 20 }
    }
}

/// A polynomial kept in the form it was constructed in.
#[derive(Clone, Debug, PartialEq)]
pub enum StructuredPolynomial {
    Sparse(SparsePolynomial<Rational>),
    /// `outer(w0 + sum_i w_i x_i)`.
    AffineComposed { outer: UniPoly, w0: i64, w: Vec<i64> },
    /// `outer(inner(x))` for a multilinear `inner`.
    Composed { outer: UniPoly, inner: SparsePolynomial<Rational> },
    /// `constant + sum parts`.
    Sum { parts: Vec<StructuredPolynomial>, constant: Rational },
}

/// Weight and degree of a polynomial, exact when it could be expanded.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightDegree {
    pub weight: f64,
    pub weight_exact: Option<Rational>,
    pub degree: usize,
    pub exact: bool,
}

impl StructuredPolynomial {
    pub fn dim(&self) -> usize {
        match self {
            StructuredPolynomial::Sparse(p) => p.dim(),
            StructuredPolynomial::AffineComposed { w, .. } => w.len(),
            StructuredPolynomial::Composed { inner, .. } => inner.dim(),
            StructuredPolynomial::Sum { parts, .. } => parts.iter().map(|p| p.dim()).max().unwrap_or(0),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        StructuredPolynomial::Sparse(SparsePolynomial::constant(n, c))
    }

    /// Degree bound implied by the structure (before multilinear reduction).
    pub fn degree_bound(&self) -> usize {
        let n = self.dim();
        let d = match self {
            StructuredPolynomial::Sparse(p) => p.degree(),
            StructuredPolynomial::AffineComposed { outer, w, .. } => {
                let live = w.iter().filter(|&&x| x != 0).count();
                if live == 0 {
                    0
                } else {
                    outer.degree()
                }
            }
            StructuredPolynomial::Composed { outer, inner } => outer.degree() * inner.degree(),
            StructuredPolynomial::Sum { parts, .. } => {
                parts.iter().map(|p| p.degree_bound()).max().unwrap_or(0)
            }
        };
        d.min(n)
    }

    /// Largest univariate outer degree anywhere in the tree.
    pub fn outer_degree(&self) -> usize {
        match self {
            StructuredPolynomial::Sparse(_) => 0,
            StructuredPolynomial::AffineComposed { outer, .. }
            | StructuredPolynomial::Composed { outer, .. } => outer.degree(),
            StructuredPolynomial::Sum { parts, .. } => {
                parts.iter().map(|p| p.outer_degree()).max().unwrap_or(0)
            }
        }
    }

    fn check_dim(&self, x: &CubePoint) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::input(format!(
                "point has dimension {} but polynomial has dimension {}",
                x.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn eval_exact(&self, x: &CubePoint) -> Result<Rational> {
        self.check_dim(x)?;
        Ok(self.evaluator().value(x))
    }

    pub fn eval(&self, x: &CubePoint) -> Result<f64> {
        Ok(rational_to_f64(&self.eval_exact(x)?))
    }

    /// A memoizing evaluator for repeated exact evaluation.
    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator::new(self)
    }

    /// Exact values at every cube point, in enumeration order.
    pub fn tabulate(&self) -> Vec<Rational> {
        let n = self.dim();
        match self {
            StructuredPolynomial::Sparse(p) => p.tabulate(),
            StructuredPolynomial::Sum { parts, constant } => {
                let mut acc = vec![constant.clone(); 1 << n];
                for part in parts {
                    for (a, v) in acc.iter_mut().zip(part.tabulate()) {
                        *a += v;
                    }
                }
                acc
            }
            _ => {
                let mut ev = self.evaluator();
                cube_points(n).map(|x| ev.value(&x)).collect()
            }
        }
    }

    /// The multilinear expansion (unique on the cube).
    pub fn expand(&self, cap: &ExpansionCap) -> Result<SparsePolynomial<Rational>> {
        if let StructuredPolynomial::Sparse(p) = self {
            return Ok(p.clone());
        }
        let n = self.dim();
        if n > cap.max_vars {
            return Err(Error::Resource {
                what: "expansion variables",
                requested: n as u128,
                cap: cap.max_vars as u128,
            });
        }
        let outer = self.outer_degree();
        if outer > cap.max_degree {
            return Err(Error::Resource {
                what: "expansion outer degree",
                requested: outer as u128,
                cap: cap.max_degree as u128,
            });
        }
        SparsePolynomial::interpolate(n, &self.tabulate())
    }

    /// Exact weight and degree if the expansion fits `cap`, otherwise the
    /// structural degree bound and an analytic weight upper bound.
    pub fn weight_and_degree(&self, cap: &ExpansionCap) -> WeightDegree {
        match self.expand(cap) {
            Ok(p) => {
                let w = p.weight();
                WeightDegree { weight: rational_to_f64(&w), weight_exact: Some(w), degree: p.degree(), exact: true }
            }
            Err(_) => WeightDegree {
                weight: self.analytic_weight_bound(),
                weight_exact: None,
                degree: self.degree_bound(),
                exact: false,
            },
        }
    }

    /// Upper bound on the weight of the expansion, using
    /// `weight(q^j) <= weight(q)^j` for the inner form `q`.
    pub fn analytic_weight_bound(&self) -> f64 {
        match self {
            StructuredPolynomial::Sparse(p) => p.weight_f64(),
            StructuredPolynomial::AffineComposed { outer, w0, w } => {
                let wt = w0.unsigned_abs() + w.iter().map(|x| x.unsigned_abs()).sum::<u64>();
                outer.abs_bound(wt as f64)
            }
            StructuredPolynomial::Composed { outer, inner } => outer.abs_bound(inner.weight_f64()),
            StructuredPolynomial::Sum { parts, constant } => {
                parts.iter().map(|p| p.analytic_weight_bound()).sum::<f64>()
                    + rational_to_f64(&constant.abs())
            }
        }
    }

    /// `x -> -p(x)`.
    pub fn neg(&self) -> Self {
        match self {
            StructuredPolynomial::Sparse(p) => StructuredPolynomial::Sparse(p.neg()),
            StructuredPolynomial::AffineComposed { outer, w0, w } => {
                StructuredPolynomial::AffineComposed { outer: outer.neg(), w0: *w0, w: w.clone() }
            }
            StructuredPolynomial::Composed { outer, inner } => {
                StructuredPolynomial::Composed { outer: outer.neg(), inner: inner.clone() }
            }
            StructuredPolynomial::Sum { parts, constant } => StructuredPolynomial::Sum {
                parts: parts.iter().map(|p| p.neg()).collect(),
                constant: -constant,
            },
        }
    }

    /// `x -> p(x')` where `x'` flips the coordinates in `mask`.
    pub fn reflect_inputs(&self, mask: u64) -> Self {
        match self {
            StructuredPolynomial::Sparse(p) => StructuredPolynomial::Sparse(p.reflect(mask)),
            StructuredPolynomial::AffineComposed { outer, w0, w } => {
                let w = w
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| if mask >> j & 1 == 1 { -x } else { x })
                    .collect();
                StructuredPolynomial::AffineComposed { outer: outer.clone(), w0: *w0, w }
            }
            StructuredPolynomial::Composed { outer, inner } => {
                StructuredPolynomial::Composed { outer: outer.clone(), inner: inner.reflect(mask) }
            }
            StructuredPolynomial::Sum { parts, constant } => StructuredPolynomial::Sum {
                parts: parts.iter().map(|p| p.reflect_inputs(mask)).collect(),
                constant: constant.clone(),
            },
        }
    }

    /// Re-indexes into dimension `n`, sending variable `j` to `map[j]`.
    pub fn embed(&self, n: usize, map: &[usize]) -> Result<Self> {
        if map.len() != self.dim() || map.iter().any(|&v| v >= n) {
            return Err(Error::input("embedding map does not fit the target dimension"));
        }
        Ok(match self {
            StructuredPolynomial::Sparse(p) => StructuredPolynomial::Sparse(p.embed(n, map)?),
            StructuredPolynomial::AffineComposed { outer, w0, w } => {
                let mut wn = vec![0; n];
                for (j, &x) in w.iter().enumerate() {
                    wn[map[j]] += x;
                }
                StructuredPolynomial::AffineComposed { outer: outer.clone(), w0: *w0, w: wn }
            }
            StructuredPolynomial::Composed { outer, inner } => {
                StructuredPolynomial::Composed { outer: outer.clone(), inner: inner.embed(n, map)? }
            }
            StructuredPolynomial::Sum { parts, constant } => StructuredPolynomial::Sum {
                parts: parts.iter().map(|p| p.embed(n, map)).collect::<Result<_>>()?,
                constant: constant.clone(),
            },
        })
    }

    /// `x -> -p(-x)`.
    pub fn negate_reflect(&self) -> Self {
        self.reflect_inputs(crate::cube::full_mask(self.dim())).neg()
    }
}

/// Exact evaluation with per-node caches keyed by the inner value, so that
/// cube enumeration evaluates each univariate outer polynomial only once per
/// distinct argument.
pub struct Evaluator<'a> {
    node: Node<'a>,
}

enum Node<'a> {
    Sparse(&'a SparsePolynomial<Rational>),
    Affine { outer: &'a UniPoly, w0: i64, w: &'a [i64], cache: HashMap<i64, Rational> },
    Composed { outer: &'a UniPoly, inner: &'a SparsePolynomial<Rational>, cache: HashMap<Rational, Rational> },
    Sum { parts: Vec<Node<'a>>, constant: &'a Rational },
}

impl<'a> Evaluator<'a> {
    fn new(p: &'a StructuredPolynomial) -> Self {
        Evaluator { node: Node::build(p) }
    }

    pub fn value(&mut self, x: &CubePoint) -> Rational {
        self.node.value(x)
    }
}

impl<'a> Node<'a> {
    fn build(p: &'a StructuredPolynomial) -> Self {
        match p {
            StructuredPolynomial::Sparse(s) => Node::Sparse(s),
            StructuredPolynomial::AffineComposed { outer, w0, w } => {
                Node::Affine { outer, w0: *w0, w, cache: HashMap::new() }
            }
            StructuredPolynomial::Composed { outer, inner } => {
                Node::Composed { outer, inner, cache: HashMap::new() }
            }
            StructuredPolynomial::Sum { parts, constant } => {
                Node::Sum { parts: parts.iter().map(Node::build).collect(), constant }
            }
        }
    }

    fn value(&mut self, x: &CubePoint) -> Rational {
        match self {
            Node::Sparse(p) => p.eval_unchecked(x),
            Node::Affine { outer, w0, w, cache } => {
                let t = *w0 + x.dot(w);
                cache
                    .entry(t)
                    .or_insert_with(|| outer.eval_int(&BigInt::from(t)))
                    .clone()
            }
            Node::Composed { outer, inner, cache } => {
                let s = inner.eval_unchecked(x);
                if let Some(v) = cache.get(&s) {
                    return v.clone();
                }
                let v = outer.eval(&s);
                cache.insert(s, v.clone());
                v
            }
            Node::Sum { parts, constant } => {
                let mut acc = (*constant).clone();
                for p in parts {
                    acc += p.value(x);
                }
                if acc.is_zero() {
                    Rational::zero()
                } else {
                    acc
                }
            }
        }
    }
}
