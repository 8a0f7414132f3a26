//! Points of the Boolean cube `{-1,+1}^n`, the concept classes evaluated on
//! it, labeled samples, and the empirical error metrics of reliable learning.
//!
//! Throughout, `+1` means True and `-1` means False. Halfspaces and
//! majorities use `sgn(0) = -1`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported cube dimension (points are stored as a 64-bit mask).
pub const MAX_DIM: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i64")]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Label::Negative => -1,
            Label::Positive => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.as_i8())
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }

    /// `sgn` with the convention `sgn(0) = -1`.
    pub fn sgn(v: f64) -> Self {
        Label::from_bool(v > 0.0)
    }
}

impl std::ops::Neg for Label {
    type Output = Label;
    fn neg(self) -> Label {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
        }
    }
}

impl From<Label> for i8 {
    fn from(l: Label) -> i8 {
        l.as_i8()
    }
}

impl TryFrom<i64> for Label {
    type Error = Error;
    fn try_from(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Label::Positive),
            -1 => Ok(Label::Negative),
            other => Err(Error::input(format!("label must be -1 or +1, got {other}"))),
        }
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "+1" => Ok(Label::Positive),
            "-1" => Ok(Label::Negative),
            other => Err(Error::input(format!("expected -1 or +1, got {other:?}"))),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

/// A point of `{-1,+1}^n`. Bit `j` of `neg` is set iff coordinate `j`
/// (0-based) equals `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubePoint {
    n: u8,
    neg: u64,
}

impl CubePoint {
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if signs.len() > MAX_DIM {
            return Err(Error::input(format!(
                "dimension {} exceeds {MAX_DIM}",
                signs.len()
            )));
        }
        let mut neg = 0u64;
        for (j, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => neg |= 1 << j,
                other => {
                    return Err(Error::input(format!(
                        "cube coordinate must be -1 or +1, got {other}"
                    )))
                }
            }
        }
        Ok(CubePoint {
            n: signs.len() as u8,
            neg,
        })
    }

    /// The point whose `-1` coordinates are the set bits of `index`.
    ///
    /// Enumerating `index` in `0..2^n` visits the cube in lexicographic order
    /// of bit patterns, starting at the all-`+1` point.
    pub fn from_index(n: usize, index: u64) -> Self {
        debug_assert!(n <= MAX_DIM);
        debug_assert!(n == 64 || index >> n == 0);
        CubePoint { n: n as u8, neg: index }
    }

    pub fn all_ones(n: usize) -> Self {
        CubePoint::from_index(n, 0)
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn index(&self) -> u64 {
        self.neg
    }

    /// Mask of coordinates equal to `-1`.
    pub fn neg_mask(&self) -> u64 {
        self.neg
    }

    /// Coordinate `j` (0-based) as `-1` or `+1`.
    pub fn get(&self, j: usize) -> i8 {
        if self.neg >> j & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.dim()).map(|j| self.get(j)).collect()
    }

    /// The value of the monomial `prod_{j in mask} x_j` at this point.
    pub fn monomial(&self, mask: u64) -> i8 {
        if (self.neg & mask).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `-x`.
    pub fn negated(&self) -> Self {
        CubePoint {
            n: self.n,
            neg: !self.neg & full_mask(self.dim()),
        }
    }

    /// Flips the coordinates selected by `mask`.
    pub fn reflected(&self, mask: u64) -> Self {
        CubePoint {
            n: self.n,
            neg: self.neg ^ (mask & full_mask(self.dim())),
        }
    }

    /// Number of `+1` coordinates among `mask`.
    pub fn count_ones_in(&self, mask: u64) -> u32 {
        (mask & !self.neg).count_ones()
    }

    /// `sum_j w_j x_j` over the first `w.len()` coordinates.
    pub fn dot(&self, w: &[i64]) -> i64 {
        w.iter()
            .enumerate()
            .map(|(j, &wj)| wj * i64::from(self.get(j)))
            .sum()
    }
}

impl fmt::Display for CubePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for j in 0..self.dim() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{:+}", self.get(j))?;
        }
        write!(f, ")")
    }
}

pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Every point of `{-1,+1}^n` in enumeration order.
pub fn cube_points(n: usize) -> impl Iterator<Item = CubePoint> {
    assert!(n < 64, "cannot enumerate a cube of dimension {n}");
    (0..1u64 << n).map(move |i| CubePoint::from_index(n, i))
}

/// A possibly negated variable. `var` is 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn eval(&self, x: &CubePoint) -> bool {
        (x.get(self.var) == 1) == self.positive
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    fn parse(tok: &str) -> Result<Self> {
        let v: i64 = tok
            .parse()
            .map_err(|_| Error::input(format!("bad literal {tok:?}")))?;
        if v == 0 {
            return Err(Error::input("literal index 0 is invalid (indices are 1-based)"));
        }
        Ok(Literal {
            var: (v.unsigned_abs() - 1) as usize,
            positive: v > 0,
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.positive { '+' } else { '-' };
        write!(f, "{sign}{}", self.var + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConceptKind {
    Disjunction(Vec<Literal>),
    Conjunction(Vec<Literal>),
    /// Majority over a subset of variables (0-based); the empty subset is the
    /// constant `-1`.
    Majority(Vec<usize>),
    Halfspace { w0: i64, w: Vec<i64> },
    Dnf(Vec<Vec<Literal>>),
    Cnf(Vec<Vec<Literal>>),
}

/// A Boolean function on `{-1,+1}^n` from one of the supported classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Concept {
    n: usize,
    kind: ConceptKind,
}

impl Concept {
    pub fn new(n: usize, kind: ConceptKind) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::input(format!("dimension {n} exceeds {MAX_DIM}")));
        }
        let check_lits = |lits: &[Literal], per_var: bool| -> Result<()> {
            let mut seen = std::collections::HashSet::new();
            for l in lits {
                if l.var >= n {
                    return Err(Error::input(format!(
                        "literal {l} out of range for n = {n}"
                    )));
                }
                let key = if per_var { (l.var, true) } else { (l.var, l.positive) };
                if !seen.insert(key) {
                    return Err(Error::input(format!("literal {l} repeated in a clause")));
                }
            }
            Ok(())
        };
        match &kind {
            ConceptKind::Disjunction(l) | ConceptKind::Conjunction(l) => check_lits(l, false)?,
            ConceptKind::Majority(vars) => {
                let mut sorted = vars.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != vars.len() {
                    return Err(Error::input("majority variable repeated"));
                }
                if let Some(&v) = vars.iter().find(|&&v| v >= n) {
                    return Err(Error::input(format!(
                        "majority variable {} out of range for n = {n}",
                        v + 1
                    )));
                }
            }
            ConceptKind::Halfspace { w0, w } => {
                if w.len() != n {
                    return Err(Error::input(format!(
                        "halfspace has {} weights for n = {n}",
                        w.len()
                    )));
                }
                if w0.unsigned_abs() + w.iter().map(|x| x.unsigned_abs()).sum::<u64>() == 0 {
                    return Err(Error::input("halfspace weight must be at least 1"));
                }
            }
            ConceptKind::Dnf(cl) | ConceptKind::Cnf(cl) => {
                for c in cl {
                    check_lits(c, true)?;
                }
            }
        }
        Ok(Concept { n, kind })
    }

    pub fn majority(n: usize, vars: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut vars: Vec<usize> = vars.into_iter().collect();
        vars.sort_unstable();
        Concept::new(n, ConceptKind::Majority(vars))
    }

    /// `MAJ_n` on all `n` variables.
    pub fn full_majority(n: usize) -> Self {
        Concept::majority(n, 0..n).expect("valid majority")
    }

    pub fn halfspace(w0: i64, w: Vec<i64>) -> Result<Self> {
        Concept::new(w.len(), ConceptKind::Halfspace { w0, w })
    }

    pub fn disjunction(n: usize, lits: Vec<Literal>) -> Result<Self> {
        Concept::new(n, ConceptKind::Disjunction(lits))
    }

    pub fn conjunction(n: usize, lits: Vec<Literal>) -> Result<Self> {
        Concept::new(n, ConceptKind::Conjunction(lits))
    }

    pub fn dnf(n: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        Concept::new(n, ConceptKind::Dnf(clauses))
    }

    pub fn cnf(n: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        Concept::new(n, ConceptKind::Cnf(clauses))
    }

    /// `OR_n` of all positive literals.
    pub fn or_n(n: usize) -> Self {
        Concept::disjunction(n, (0..n).map(Literal::pos).collect()).expect("valid disjunction")
    }

    /// `AND_n` of all positive literals.
    pub fn and_n(n: usize) -> Self {
        Concept::conjunction(n, (0..n).map(Literal::pos).collect()).expect("valid conjunction")
    }

    /// The constant `-1` (the empty disjunction).
    pub fn constant_false(n: usize) -> Self {
        Concept { n, kind: ConceptKind::Disjunction(Vec::new()) }
    }

    /// The constant `+1` (the empty conjunction).
    pub fn constant_true(n: usize) -> Self {
        Concept { n, kind: ConceptKind::Conjunction(Vec::new()) }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &ConceptKind {
        &self.kind
    }

    /// Integer-weight halfspace view, when the concept is a halfspace or a
    /// majority. A majority over `S` is `sgn(sum_{i in S} x_i)`.
    pub fn as_halfspace(&self) -> Option<(i64, Vec<i64>)> {
        match &self.kind {
            ConceptKind::Halfspace { w0, w } => Some((*w0, w.clone())),
            ConceptKind::Majority(vars) if !vars.is_empty() => {
                let mut w = vec![0; self.n];
                for &v in vars {
                    w[v] = 1;
                }
                Some((0, w))
            }
            _ => None,
        }
    }

    pub fn eval(&self, x: &CubePoint) -> Result<Label> {
        if x.dim() != self.n {
            return Err(Error::input(format!(
                "point has dimension {} but concept has dimension {}",
                x.dim(),
                self.n
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &CubePoint) -> Label {
        let and = |c: &[Literal]| c.iter().all(|l| l.eval(x));
        let or = |c: &[Literal]| c.iter().any(|l| l.eval(x));
        let v = match &self.kind {
            ConceptKind::Disjunction(l) => or(l),
            ConceptKind::Conjunction(l) => and(l),
            ConceptKind::Majority(vars) => {
                let s: i64 = vars.iter().map(|&v| i64::from(x.get(v))).sum();
                s > 0
            }
            ConceptKind::Halfspace { w0, w } => w0 + x.dot(w) > 0,
            ConceptKind::Dnf(cl) => cl.iter().any(|c| and(c)),
            ConceptKind::Cnf(cl) => cl.iter().all(|c| or(c)),
        };
        Label::from_bool(v)
    }

    /// Parses the one-line text format, inferring `n` from the largest index
    /// (or the number of halfspace weights) unless `n` is given.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let text = text.trim();
        let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let head = head.to_ascii_uppercase();
        let lits = |s: &str| -> Result<Vec<Literal>> {
            s.split_whitespace().map(Literal::parse).collect()
        };
        let max_var = |ls: &mut dyn Iterator<Item = usize>| ls.max().map_or(0, |v| v + 1);
        let kind = match head.as_str() {
            "MAJ" => {
                let mut vars = Vec::new();
                for tok in rest.split_whitespace() {
                    let v: usize = tok
                        .parse()
                        .map_err(|_| Error::input(format!("bad majority index {tok:?}")))?;
                    if v == 0 {
                        return Err(Error::input("majority index 0 is invalid (1-based)"));
                    }
                    vars.push(v - 1);
                }
                vars.sort_unstable();
                ConceptKind::Majority(vars)
            }
            "DISJ" | "OR" => ConceptKind::Disjunction(lits(rest)?),
            "CONJ" | "AND" => ConceptKind::Conjunction(lits(rest)?),
            "HALFSPACE" => {
                let ws: Vec<i64> = rest
                    .split_whitespace()
                    .map(|t| {
                        t.parse()
                            .map_err(|_| Error::input(format!("bad halfspace weight {t:?}")))
                    })
                    .collect::<Result<_>>()?;
                let (w0, w) = ws
                    .split_first()
                    .ok_or_else(|| Error::input("HALFSPACE needs w0"))?;
                ConceptKind::Halfspace { w0: *w0, w: w.to_vec() }
            }
            "DNF" | "CNF" => {
                let mut clauses = Vec::new();
                let mut s = rest.trim();
                while !s.is_empty() {
                    let body = s
                        .strip_prefix('(')
                        .ok_or_else(|| Error::input(format!("expected '(' in {s:?}")))?;
                    let end = body
                        .find(')')
                        .ok_or_else(|| Error::input("unbalanced parenthesis"))?;
                    clauses.push(lits(&body[..end])?);
                    s = body[end + 1..].trim_start();
                }
                if head == "DNF" {
                    ConceptKind::Dnf(clauses)
                } else {
                    ConceptKind::Cnf(clauses)
                }
            }
            other => return Err(Error::input(format!("unknown concept kind {other:?}"))),
        };
        let inferred = match &kind {
            ConceptKind::Majority(v) => max_var(&mut v.iter().copied()),
            ConceptKind::Disjunction(l) | ConceptKind::Conjunction(l) => {
                max_var(&mut l.iter().map(|l| l.var))
            }
            ConceptKind::Halfspace { w, .. } => w.len(),
            ConceptKind::Dnf(c) | ConceptKind::Cnf(c) => {
                max_var(&mut c.iter().flatten().map(|l| l.var))
            }
        };
        let n = match (n, &kind) {
            (Some(n), ConceptKind::Halfspace { w0, w }) if w.len() < n => {
                let mut w = w.clone();
                w.resize(n, 0);
                return Concept::new(n, ConceptKind::Halfspace { w0: *w0, w });
            }
            (Some(n), _) => n,
            (None, _) => inferred,
        };
        Concept::new(n, kind)
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ls: &[Literal]| {
            ls.iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let spaced = |head: &str, body: String| {
            if body.is_empty() {
                head.to_string()
            } else {
                format!("{head} {body}")
            }
        };
        let s = match &self.kind {
            ConceptKind::Majority(v) => spaced(
                "MAJ",
                v.iter()
                    .map(|v| (v + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
            ConceptKind::Disjunction(l) => spaced("DISJ", join(l)),
            ConceptKind::Conjunction(l) => spaced("CONJ", join(l)),
            ConceptKind::Halfspace { w0, w } => format!(
                "HALFSPACE {w0} {}",
                w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
            ),
            ConceptKind::Dnf(c) | ConceptKind::Cnf(c) => {
                let head = if matches!(self.kind, ConceptKind::Dnf(_)) { "DNF" } else { "CNF" };
                let body: String = c.iter().map(|c| format!("({})", join(c))).collect();
                spaced(head, body)
            }
        };
        f.write_str(&s)
    }
}

impl Serialize for Concept {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            text: String,
        }
        Repr { n: self.n, text: self.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Concept {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            text: String,
        }
        let r = Repr::deserialize(d)?;
        Concept::parse(&r.text, Some(r.n)).map_err(serde::de::Error::custom)
    }
}

/// Anything that maps cube points to labels.
pub trait BooleanFunction: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &CubePoint) -> Label;
}

impl BooleanFunction for Concept {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &CubePoint) -> Label {
        self.eval_unchecked(x)
    }
}

/// `OR` of several functions over a shared cube.
pub struct OrOf<'a>(pub Vec<&'a dyn BooleanFunction>);

/// `AND` of several functions over a shared cube.
pub struct AndOf<'a>(pub Vec<&'a dyn BooleanFunction>);

impl BooleanFunction for OrOf<'_> {
    fn dim(&self) -> usize {
        self.0.first().map_or(0, |f| f.dim())
    }
    fn value(&self, x: &CubePoint) -> Label {
        Label::from_bool(self.0.iter().any(|f| f.value(x).is_positive()))
    }
}

impl BooleanFunction for AndOf<'_> {
    fn dim(&self) -> usize {
        self.0.first().map_or(0, |f| f.dim())
    }
    fn value(&self, x: &CubePoint) -> Label {
        Label::from_bool(self.0.iter().all(|f| f.value(x).is_positive()))
    }
}

/// A function given by its full truth table in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    n: usize,
    values: Vec<Label>,
}

impl TruthTable {
    pub fn from_fn(n: usize, f: impl Fn(&CubePoint) -> Label) -> Self {
        TruthTable { n, values: cube_points(n).map(|x| f(&x)).collect() }
    }

    pub fn of(f: &dyn BooleanFunction) -> Self {
        TruthTable::from_fn(f.dim(), |x| f.value(x))
    }

    /// Pointwise negation `x -> -f(x)`.
    pub fn negated(&self) -> Self {
        TruthTable { n: self.n, values: self.values.iter().map(|&v| -v).collect() }
    }
}

impl BooleanFunction for TruthTable {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &CubePoint) -> Label {
        self.values[x.index() as usize]
    }
}

/// Which side of a one-sided approximation or reliable learner is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flipped(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "pos" | "+" => Ok(Sign::Positive),
            "negative" | "neg" | "-" => Ok(Sign::Negative),
            _ => Err(Error::input(format!("bad sign {s:?} (expected positive or negative)"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
        })
    }
}

/// Output of a partial classifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Partial {
    #[serde(rename = "-1")]
    Negative,
    #[serde(rename = "?")]
    Unknown,
    #[serde(rename = "+1")]
    Positive,
}

impl From<Label> for Partial {
    fn from(l: Label) -> Self {
        match l {
            Label::Negative => Partial::Negative,
            Label::Positive => Partial::Positive,
        }
    }
}

/// A classifier into `{-1, ?, +1}`.
pub trait PartialHypothesis {
    fn decide(&self, x: &CubePoint) -> Partial;
}

impl<F: Fn(&CubePoint) -> Partial> PartialHypothesis for F {
    fn decide(&self, x: &CubePoint) -> Partial {
        self(x)
    }
}

impl PartialHypothesis for Concept {
    fn decide(&self, x: &CubePoint) -> Partial {
        self.eval_unchecked(x).into()
    }
}

/// Labeled examples from `{-1,+1}^n x {-1,+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSample {
    n: usize,
    points: Vec<CubePoint>,
    labels: Vec<Label>,
}

/// Label counts at one distinct point of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointCounts {
    pub point: CubePoint,
    pub positives: usize,
    pub negatives: usize,
}

impl LabeledSample {
    pub fn new(n: usize, points: Vec<CubePoint>, labels: Vec<Label>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::input(format!(
                "{} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::input(format!(
                "point {p} does not have dimension {n}"
            )));
        }
        Ok(LabeledSample { n, points, labels })
    }

    pub fn empty(n: usize) -> Self {
        LabeledSample { n, points: Vec::new(), labels: Vec::new() }
    }

    /// Every point of the cube labeled by `f`.
    pub fn full_cube(f: &dyn BooleanFunction) -> Self {
        let n = f.dim();
        let points: Vec<_> = cube_points(n).collect();
        let labels = points.iter().map(|x| f.value(x)).collect();
        LabeledSample { n, points, labels }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[CubePoint] {
        &self.points
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CubePoint, Label)> + '_ {
        self.points.iter().zip(self.labels.iter().copied())
    }

    pub fn push(&mut self, x: CubePoint, y: Label) -> Result<()> {
        if x.dim() != self.n {
            return Err(Error::input(format!("point {x} does not have dimension {}", self.n)));
        }
        self.points.push(x);
        self.labels.push(y);
        Ok(())
    }

    /// Same points, every label flipped.
    pub fn with_flipped_labels(&self) -> Self {
        LabeledSample {
            n: self.n,
            points: self.points.clone(),
            labels: self.labels.iter().map(|&y| -y).collect(),
        }
    }

    /// `(-x, -y)` for every example.
    pub fn negated(&self) -> Self {
        LabeledSample {
            n: self.n,
            points: self.points.iter().map(|p| p.negated()).collect(),
            labels: self.labels.iter().map(|&y| -y).collect(),
        }
    }

    /// Per-point label counts, ordered by point index.
    pub fn point_counts(&self) -> Vec<PointCounts> {
        let mut map: BTreeMap<u64, (usize, usize)> = BTreeMap::new();
        for (x, y) in self.iter() {
            let e = map.entry(x.index()).or_default();
            if y.is_positive() {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        map.into_iter()
            .map(|(idx, (positives, negatives))| PointCounts {
                point: CubePoint::from_index(self.n, idx),
                positives,
                negatives,
            })
            .collect()
    }

    /// Reads the CSV format: header `x1,...,xn,y`, then rows of `±1`.
    pub fn read_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let cols = headers.len();
        if cols == 0 || headers.get(cols - 1).map(str::trim) != Some("y") {
            return Err(Error::input("sample CSV header must end with column `y`"));
        }
        for (j, h) in headers.iter().take(cols - 1).enumerate() {
            if h.trim() != format!("x{}", j + 1) {
                return Err(Error::input(format!(
                    "sample CSV column {} should be x{}, got {h:?}",
                    j + 1,
                    j + 1
                )));
            }
        }
        let n = cols - 1;
        let mut sample = LabeledSample::empty(n);
        let mut signs = vec![0i8; n];
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != cols {
                return Err(Error::input(format!("row has {} fields, expected {cols}", rec.len())));
            }
            for (j, s) in signs.iter_mut().enumerate() {
                *s = rec[j].parse::<Label>()?.as_i8();
            }
            let y: Label = rec[n].parse()?;
            sample.push(CubePoint::from_signs(&signs)?, y)?;
        }
        Ok(sample)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (1..=self.n).map(|j| format!("x{j}")).collect();
        header.push("y".into());
        w.write_record(&header)?;
        let mut row = Vec::with_capacity(self.n + 1);
        for (x, y) in self.iter() {
            row.clear();
            row.extend((0..self.n).map(|j| x.get(j).to_string()));
            row.push(y.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    pub false_pos: f64,
    pub false_neg: f64,
    pub err: f64,
    pub unknown_rate: f64,
}

/// Confusion counts of a partial classifier on a sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub false_pos: usize,
    pub false_neg: usize,
    pub unknown: usize,
    pub total: usize,
}

impl Counts {
    pub fn tally(h: &dyn PartialHypothesis, s: &LabeledSample) -> Self {
        let mut c = Counts { total: s.len(), ..Counts::default() };
        for (x, y) in s.iter() {
            match (h.decide(x), y) {
                (Partial::Positive, Label::Negative) => c.false_pos += 1,
                (Partial::Negative, Label::Positive) => c.false_neg += 1,
                (Partial::Unknown, _) => c.unknown += 1,
                _ => {}
            }
        }
        c
    }

    pub fn metrics(&self) -> ErrorMetrics {
        let m = self.total as f64;
        ErrorMetrics {
            false_pos: self.false_pos as f64 / m,
            false_neg: self.false_neg as f64 / m,
            err: (self.false_pos + self.false_neg) as f64 / m,
            unknown_rate: self.unknown as f64 / m,
        }
    }
}

/// False-positive, false-negative, error and abstention rates of `h` on `s`.
pub fn empirical_metrics(h: &dyn PartialHypothesis, s: &LabeledSample) -> Result<ErrorMetrics> {
    if s.is_empty() {
        return Err(Error::input("empirical metrics need a non-empty sample"));
    }
    Ok(Counts::tally(h, s).metrics())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &[i8]) -> CubePoint {
        CubePoint::from_signs(s).unwrap()
    }

    #[test]
    fn tautological_disjunction_is_true_everywhere() {
        let c = Concept::parse("DISJ +1 -1", None).unwrap();
        for x in cube_points(1) {
            assert_eq!(c.eval(&x).unwrap(), Label::Positive);
        }
    }

    #[test]
    fn majority_two_of_three() {
        let c = Concept::parse("MAJ 1 2 3", None).unwrap();
        assert_eq!(c.eval(&pt(&[1, 1, -1])).unwrap(), Label::Positive);
        assert_eq!(c.eval(&pt(&[1, -1, -1])).unwrap(), Label::Negative);
    }

    #[test]
    fn halfspace_tie_is_negative() {
        let c = Concept::halfspace(0, vec![1, -1]).unwrap();
        assert_eq!(c.eval(&pt(&[1, 1])).unwrap(), Label::Negative);
        let c = Concept::halfspace(-2, vec![1, 1, 0]).unwrap();
        assert_eq!(c.eval(&pt(&[1, 1, -1])).unwrap(), Label::Negative);
        let even = Concept::full_majority(4);
        assert_eq!(even.eval(&pt(&[1, 1, -1, -1])).unwrap(), Label::Negative);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let c = Concept::full_majority(3);
        assert!(matches!(c.eval(&pt(&[1, 1])), Err(Error::Input(_))));
    }

    #[test]
    fn dnf_is_or_of_its_clauses() {
        let f = Concept::parse("DNF (+1 -2)(+3 +4)(-5 +2 -6)", Some(12)).unwrap();
        let ConceptKind::Dnf(clauses) = f.kind().clone() else { unreachable!() };
        let cls: Vec<Concept> = clauses
            .into_iter()
            .map(|c| Concept::conjunction(12, c).unwrap())
            .collect();
        for x in cube_points(12) {
            let any = cls.iter().any(|c| c.eval(&x).unwrap().is_positive());
            assert_eq!(f.eval(&x).unwrap(), Label::from_bool(any));
        }
    }

    #[test]
    fn text_format_round_trips() {
        for s in ["MAJ 1 3 5", "DISJ +1 -2 +7", "HALFSPACE -1 2 0 3", "DNF (+1 -2)(+3 +4)", "CNF (-1)(+2 +3)", "CONJ +2"] {
            let c = Concept::parse(s, None).unwrap();
            assert_eq!(c.to_string(), s);
            assert_eq!(Concept::parse(&c.to_string(), Some(c.dim())).unwrap(), c);
        }
        assert_eq!(Concept::parse("DISJ +1 -2 +7", None).unwrap().dim(), 7);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(Concept::parse("MAJ 0", None).is_err());
        assert!(Concept::parse("XOR 1 2", None).is_err());
        assert!(Concept::parse("DNF (+1 -1)", None).is_err());
        assert!(Concept::parse("HALFSPACE 0 0 0", None).is_err());
        assert!(Concept::parse("MAJ 1 5", Some(3)).is_err());
    }

    #[test]
    fn metrics_of_constant_hypotheses() {
        let n = 2;
        let s = LabeledSample::new(
            n,
            cube_points(n).collect(),
            vec![Label::Negative; 4],
        )
        .unwrap();
        let all_pos = |_: &CubePoint| Partial::Positive;
        let m = empirical_metrics(&all_pos, &s).unwrap();
        assert_eq!((m.false_pos, m.false_neg), (1.0, 0.0));
        let abstain = |_: &CubePoint| Partial::Unknown;
        let m = empirical_metrics(&abstain, &s).unwrap();
        assert_eq!((m.unknown_rate, m.err), (1.0, 0.0));
        assert!(empirical_metrics(&abstain, &LabeledSample::empty(2)).is_err());
    }

    #[test]
    fn planted_majority_has_zero_error_on_its_cube() {
        let maj = Concept::full_majority(3);
        let s = LabeledSample::full_cube(&maj);
        assert_eq!(s.len(), 8);
        let m = empirical_metrics(&maj, &s).unwrap();
        assert_eq!(m, ErrorMetrics { false_pos: 0.0, false_neg: 0.0, err: 0.0, unknown_rate: 0.0 });
    }

    #[test]
    fn csv_round_trip() {
        let s = LabeledSample::full_cube(&Concept::full_majority(3));
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x1,x2,x3,y\n1,1,1,1\n"));
        assert_eq!(LabeledSample::read_csv(&buf[..]).unwrap(), s);
        assert!(LabeledSample::read_csv("x1,label\n1,1\n".as_bytes()).is_err());
        assert!(LabeledSample::read_csv("x1,y\n0,1\n".as_bytes()).is_err());
    }

    #[test]
    fn point_helpers() {
        let x = pt(&[1, -1, -1]);
        assert_eq!(x.monomial(0b110), 1);
        assert_eq!(x.monomial(0b011), -1);
        assert_eq!(x.negated(), pt(&[-1, 1, 1]));
        assert_eq!(x.count_ones_in(0b111), 1);
        assert_eq!(x.to_string(), "(+1,-1,-1)");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn total_hypotheses_split_error(
                bits in proptest::collection::vec((0u64..16, any::<bool>(), any::<bool>()), 1..60)
            ) {
                let n = 4;
                let pts = bits.iter().map(|b| CubePoint::from_index(n, b.0)).collect();
                let labels = bits.iter().map(|b| Label::from_bool(b.1)).collect();
                let s = LabeledSample::new(n, pts, labels).unwrap();
                let table: Vec<bool> = (0..16).map(|i| bits.iter().any(|b| b.0 == i && b.2)).collect();
                let h = move |x: &CubePoint| Partial::from(Label::from_bool(table[x.index() as usize]));
                let m = empirical_metrics(&h, &s).unwrap();
                prop_assert!((m.err - (m.false_pos + m.false_neg)).abs() < 1e-12);
                prop_assert_eq!(m.unknown_rate, 0.0);
            }
        }
    }
}
