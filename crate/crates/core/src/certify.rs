//! Exhaustive certification of one-sided and two-sided approximations, and
//! an LP oracle for the least achievable error at a given degree.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{cube_points, BooleanFunction, CubePoint, Label, Sign};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpStatus, Relation};
use crate::poly::{
    f64_to_rational, monomials_up_to, num_monomials_up_to, rational_to_f64, Rational, SparsePolynomial,
    StructuredPolynomial,
};

/// Largest dimension enumerated by the exhaustive checks.
pub const EXHAUSTIVE_CAP: usize = 24;
/// Slack allowed on exact evaluations.
pub const CERT_TOL: f64 = 1e-9;
/// Extra slack granted to LP witnesses.
pub const LP_WITNESS_TOL: f64 = 1e-7;
/// Largest dimension accepted by [`min_eps`].
pub const MIN_EPS_MAX_DIM: usize = 14;
/// Largest monomial count accepted by [`min_eps`].
pub const MIN_EPS_MAX_MONOMIALS: u128 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Positive,
    Negative,
    Twosided,
}

impl From<Sign> for Mode {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Positive => Mode::Positive,
            Sign::Negative => Mode::Negative,
        }
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "twosided" | "two-sided" | "two_sided" => Ok(Mode::Twosided),
            other => other.parse::<Sign>().map(Mode::from),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Positive => "positive",
            Mode::Negative => "negative",
            Mode::Twosided => "twosided",
        })
    }
}

/// Outcome of an exhaustive check. Violations are signed: positive values
/// exceed the allowed error, and a class with no points reports `-inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct CertReport {
    pub ok: bool,
    pub eps_requested: f64,
    pub worst_pos_violation: f64,
    pub worst_neg_violation: f64,
    pub points_checked: u64,
    pub witness: Option<CubePoint>,
}

#[derive(Serialize, Deserialize)]
struct CertJson {
    ok: bool,
    eps: f64,
    worst_pos: Option<f64>,
    worst_neg: Option<f64>,
    points: u64,
    witness: Option<Vec<i8>>,
}

impl Serialize for CertReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let finite = |v: f64| v.is_finite().then_some(v);
        CertJson {
            ok: self.ok,
            eps: self.eps_requested,
            worst_pos: finite(self.worst_pos_violation),
            worst_neg: finite(self.worst_neg_violation),
            points: self.points_checked,
            witness: self.witness.map(|x| x.signs()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CertReport {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CertJson::deserialize(d)?;
        let witness = j
            .witness
            .map(|s| CubePoint::from_signs(&s))
            .transpose()
            .map_err(serde::de::Error::custom)?;
        Ok(CertReport {
            ok: j.ok,
            eps_requested: j.eps,
            worst_pos_violation: j.worst_pos.unwrap_or(f64::NEG_INFINITY),
            worst_neg_violation: j.worst_neg.unwrap_or(f64::NEG_INFINITY),
            points_checked: j.points,
            witness,
        })
    }
}

/// Signed violation of the approximation condition at one point, in exact
/// arithmetic. `value` is `p(x)`, `label` is `f(x)`.
fn violation(mode: Mode, label: Label, value: &Rational, eps: &Rational) -> Rational {
    let one = Rational::from_integer(1.into());
    let target = if label.is_positive() { one.clone() } else { -one.clone() };
    let exact_side = match (mode, label) {
        (Mode::Twosided, _) => false,
        (Mode::Positive, Label::Positive) | (Mode::Negative, Label::Negative) => true,
        _ => false,
    };
    if exact_side {
        // Only the inner side is bounded: p >= 1 - eps, or p <= -1 + eps.
        match label {
            Label::Positive => (&one - eps) - value,
            Label::Negative => value - (eps - &one),
        }
    } else {
        (value - &target).abs() - eps
    }
}

#[derive(Clone)]
struct Worst {
    pos: Option<(Rational, u64)>,
    neg: Option<(Rational, u64)>,
}

impl Worst {
    fn merge_slot(a: Option<(Rational, u64)>, b: Option<(Rational, u64)>) -> Option<(Rational, u64)> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => {
                if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                    Some(y)
                } else {
                    Some(x)
                }
            }
        }
    }

    fn merge(self, other: Worst) -> Worst {
        Worst { pos: Worst::merge_slot(self.pos, other.pos), neg: Worst::merge_slot(self.neg, other.neg) }
    }
}

const CHUNK: u64 = 1 << 12;

fn check(p: &StructuredPolynomial, f: &dyn BooleanFunction, eps: f64, mode: Mode) -> Result<CertReport> {
    let n = f.dim();
    if p.dim() != n {
        return Err(Error::input(format!("polynomial dimension {} differs from target dimension {n}", p.dim())));
    }
    if n > EXHAUSTIVE_CAP {
        return Err(Error::Resource { what: "exhaustive certification dimension", requested: n as u128, cap: EXHAUSTIVE_CAP as u128 });
    }
    if !(eps >= 0.0) {
        return Err(Error::input(format!("eps must be nonnegative, got {eps}")));
    }
    let eps_q = f64_to_rational(eps)?;
    let total = 1u64 << n;
    let chunks: Vec<u64> = (0..total.div_ceil(CHUNK)).collect();
    let worst = chunks
        .par_iter()
        .map(|&c| {
            let mut ev = p.evaluator();
            let mut w = Worst { pos: None, neg: None };
            for i in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let x = CubePoint::from_index(n, i);
                let label = f.value(&x);
                let v = violation(mode, label, &ev.value(&x), &eps_q);
                let slot = if label.is_positive() { &mut w.pos } else { &mut w.neg };
                *slot = Worst::merge_slot(slot.take(), Some((v, i)));
            }
            w
        })
        .reduce(|| Worst { pos: None, neg: None }, Worst::merge);
    let as_f64 = |s: &Option<(Rational, u64)>| s.as_ref().map_or(f64::NEG_INFINITY, |(v, _)| rational_to_f64(v));
    let worst_pos_violation = as_f64(&worst.pos);
    let worst_neg_violation = as_f64(&worst.neg);
    let ok = worst_pos_violation <= CERT_TOL && worst_neg_violation <= CERT_TOL;
    let witness = if ok {
        None
    } else {
        Worst::merge_slot(worst.pos, worst.neg).map(|(_, i)| CubePoint::from_index(n, i))
    };
    Ok(CertReport { ok, eps_requested: eps, worst_pos_violation, worst_neg_violation, points_checked: total, witness })
}

/// Checks over the full cube that `p` is a one-sided `eps`-approximation of
/// `f` on the given side.
pub fn verify_onesided(p: &StructuredPolynomial, f: &dyn BooleanFunction, eps: f64, sign: Sign) -> Result<CertReport> {
    check(p, f, eps, sign.into())
}

/// Checks `|p(x) - f(x)| <= eps` over the full cube.
pub fn verify_twosided(p: &StructuredPolynomial, f: &dyn BooleanFunction, eps: f64) -> Result<CertReport> {
    check(p, f, eps, Mode::Twosided)
}

pub fn verify(p: &StructuredPolynomial, f: &dyn BooleanFunction, eps: f64, mode: Mode) -> Result<CertReport> {
    check(p, f, eps, mode)
}

/// Least error achievable at degree `d` and a polynomial attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinEps {
    pub eps: f64,
    pub poly: SparsePolynomial<f64>,
    pub lp_iterations: usize,
}

/// Solves for the smallest `eps` such that some polynomial of degree at most
/// `d` approximates `f` in the given mode, by linear programming over the
/// monomial coefficients.
pub fn min_eps(f: &dyn BooleanFunction, d: usize, mode: Mode) -> Result<MinEps> {
    let n = f.dim();
    if n > MIN_EPS_MAX_DIM {
        return Err(Error::Resource { what: "min_eps dimension", requested: n as u128, cap: MIN_EPS_MAX_DIM as u128 });
    }
    let d = d.min(n);
    let count = num_monomials_up_to(n, d);
    if count > MIN_EPS_MAX_MONOMIALS {
        return Err(Error::Resource { what: "min_eps monomials", requested: count, cap: MIN_EPS_MAX_MONOMIALS });
    }
    let monos = monomials_up_to(n, d);
    let e = monos.len();
    let mut lp = LinearProgram::new(e + 1);
    for j in 0..e {
        lp.set_free(j);
    }
    lp.set_objective(e, 1.0);
    for x in cube_points(n) {
        let label = f.value(&x);
        let row: Vec<(usize, f64)> = monos.iter().enumerate().map(|(j, m)| (j, x.monomial(m.0) as f64)).collect();
        let with_eps = |s: f64| row.iter().copied().chain([(e, s)]);
        let y = label.as_f64();
        let exact_side = matches!((mode, label), (Mode::Positive, Label::Positive) | (Mode::Negative, Label::Negative));
        if exact_side {
            match label {
                Label::Positive => lp.add_constraint(with_eps(1.0), Relation::Ge, 1.0)?,
                Label::Negative => lp.add_constraint(with_eps(-1.0), Relation::Le, -1.0)?,
            }
        } else {
            lp.add_constraint(with_eps(-1.0), Relation::Le, y)?;
            lp.add_constraint(with_eps(1.0), Relation::Ge, y)?;
        }
    }
    let sol = lp.solve()?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Solver { status: sol.status, detail: format!("min_eps LP for degree {d} in {mode} mode") });
    }
    let poly = SparsePolynomial::from_terms(n, monos.iter().zip(&sol.values).map(|(m, &c)| (*m, c)))?.pruned(1e-12);
    Ok(MinEps { eps: sol.values[e].max(0.0), poly, lp_iterations: sol.iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{Concept, TruthTable};
    use crate::poly::{int, rational, Monomial};

    #[test]
    fn constant_minus_one_on_false() {
        let f = Concept::constant_false(3);
        let p = StructuredPolynomial::constant(3, int(-1));
        let r = verify_onesided(&p, &f, 0.1, Sign::Positive).unwrap();
        assert!(r.ok);
        assert_eq!(r.worst_pos_violation, f64::NEG_INFINITY);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["worst_pos"], serde_json::Value::Null);
        assert_eq!(json["points"], 8);
    }

    #[test]
    fn zero_polynomial_violations() {
        let f = Concept::or_n(2);
        let p = StructuredPolynomial::constant(2, int(0));
        let r = verify_onesided(&p, &f, 0.25, Sign::Positive).unwrap();
        assert!(!r.ok);
        assert_eq!(r.worst_pos_violation, 0.75);
        assert_eq!(r.witness, Some(CubePoint::from_index(2, 0)));
        let r = verify_twosided(&p, &f, 0.5).unwrap();
        assert_eq!(r.worst_pos_violation, 0.5);
        assert!(!r.ok);
    }

    #[test]
    fn exact_majority_form() {
        let f = Concept::full_majority(3);
        let h = rational(1, 2);
        let p = SparsePolynomial::from_terms(
            3,
            [
                (Monomial::var(0), h.clone()),
                (Monomial::var(1), h.clone()),
                (Monomial::var(2), h.clone()),
                (Monomial(0b111), -h),
            ],
        )
        .unwrap();
        assert!(verify_twosided(&StructuredPolynomial::Sparse(p), &f, 0.0).unwrap().ok);
    }

    #[test]
    fn or2_negative_degree_one() {
        let r = min_eps(&Concept::or_n(2), 1, Mode::Negative).unwrap();
        assert!((r.eps - 0.5).abs() < 1e-9, "{}", r.eps);
        let p = StructuredPolynomial::Sparse(r.poly.to_rational().unwrap());
        assert!(verify_onesided(&p, &Concept::or_n(2), r.eps + LP_WITNESS_TOL, Sign::Negative).unwrap().ok);
    }

    #[test]
    fn negation_duality() {
        let f = Concept::full_majority(3);
        let g = TruthTable::of(&Concept::or_n(3)).negated();
        for d in 1..=2 {
            let a = min_eps(&Concept::or_n(3), d, Mode::Negative).unwrap().eps;
            let b = min_eps(&g, d, Mode::Positive).unwrap().eps;
            assert!((a - b).abs() < 1e-7);
        }
        assert!(min_eps(&f, 3, Mode::Twosided).unwrap().eps < 1e-9);
    }
}
