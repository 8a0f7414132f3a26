//! Learners: the disjunction eliminator, the LP-based reliable learners with
//! randomized rounding and threshold derandomization, the agnostic L1
//! learner, the fully reliable combiner, and the sample-size planner.

use serde::{Deserialize, Serialize};

use crate::cube::{Concept, CubePoint, Label, LabeledSample, Literal, Partial, PartialHypothesis, PointCounts, Sign};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpStatus, Relation, FEAS_TOL};
use crate::poly::{monomials_up_to, num_monomials_up_to, Monomial, SparsePolynomial};

/// Largest monomial feature count accepted by the LP learners.
pub const MAX_FEATURES: u128 = 20_000;

/// Elimination learner: start from every literal and drop each literal
/// satisfied by some negative example.
pub fn learn_disjunction_positive(s: &LabeledSample) -> Result<Concept> {
    let n = s.dim();
    if n == 0 {
        return Err(Error::input("disjunction learning needs n >= 1"));
    }
    // keep[j][0] for x_j, keep[j][1] for its negation
    let mut keep = vec![[true, true]; n];
    for (x, y) in s.iter() {
        if y == Label::Negative {
            for (j, k) in keep.iter_mut().enumerate() {
                if x.get(j) == 1 {
                    k[0] = false;
                } else {
                    k[1] = false;
                }
            }
        }
    }
    let mut lits = Vec::new();
    for (j, k) in keep.iter().enumerate() {
        if k[0] {
            lits.push(Literal::pos(j));
        }
        if k[1] {
            lits.push(Literal::neg(j));
        }
    }
    Concept::disjunction(n, lits)
}

/// Training outcome of an LP learner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub objective_value: f64,
    pub constraints_active: usize,
    pub eps: f64,
    #[serde(rename = "W")]
    pub w: f64,
    pub d: usize,
    pub m: usize,
    pub lp_status: LpStatus,
    pub lp_iterations: usize,
    pub lp_rows: usize,
    pub lp_vars: usize,
    pub weight: f64,
}

/// Monomial features of the distinct sample points.
struct Features {
    monos: Vec<Monomial>,
    counts: Vec<PointCounts>,
}

impl Features {
    fn new(s: &LabeledSample, d: usize) -> Result<Self> {
        let n = s.dim();
        let d = d.min(n);
        let count = num_monomials_up_to(n, d);
        if count > MAX_FEATURES {
            return Err(Error::Resource { what: "monomial features", requested: count, cap: MAX_FEATURES });
        }
        Ok(Features { monos: monomials_up_to(n, d), counts: s.point_counts() })
    }

    fn len(&self) -> usize {
        self.monos.len()
    }

    /// `p(x)` as LP terms over the split coefficients `c+` (0..E) and `c-`
    /// (E..2E).
    fn row(&self, x: &CubePoint) -> Vec<(usize, f64)> {
        let e = self.len();
        let mut row = Vec::with_capacity(2 * e);
        for (j, m) in self.monos.iter().enumerate() {
            let v = x.monomial(m.0) as f64;
            row.push((j, v));
            row.push((e + j, -v));
        }
        row
    }

    fn add_weight_cap(&self, lp: &mut LinearProgram, w: f64) -> Result<()> {
        let e = self.len();
        lp.add_constraint((0..2 * e).map(|j| (j, 1.0)), Relation::Le, w)
    }

    fn poly(&self, n: usize, values: &[f64]) -> Result<SparsePolynomial<f64>> {
        let e = self.len();
        let terms = self.monos.iter().enumerate().map(|(j, m)| (*m, values[j] - values[e + j]));
        Ok(SparsePolynomial::from_terms(n, terms)?.pruned(0.0))
    }
}

fn check_fit_params(s: &LabeledSample, w: f64, eps: Option<f64>) -> Result<()> {
    if s.is_empty() {
        return Err(Error::input("cannot fit an empty sample"));
    }
    if !(w >= 0.0 && w.is_finite()) {
        return Err(Error::param(format!("weight cap must be finite and nonnegative, got {w}")));
    }
    if let Some(eps) = eps {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::param(format!("eps must lie in (0, 1), got {eps}")));
        }
    }
    Ok(())
}

fn active_rows(lp: &LinearProgram, x: &[f64]) -> usize {
    lp.constraints()
        .iter()
        .filter(|c| (c.activity(x) - c.rhs).abs() <= FEAS_TOL)
        .count()
}

/// Positive case of [`reliable_fit`].
fn reliable_fit_positive(s: &LabeledSample, d: usize, w: f64, eps: f64) -> Result<(SparsePolynomial<f64>, FitReport)> {
    let f = Features::new(s, d)?;
    let e = f.len();
    let positives: Vec<&PointCounts> = f.counts.iter().filter(|c| c.positives > 0).collect();
    let mut lp = LinearProgram::new(2 * e + positives.len());
    for (i, c) in positives.iter().enumerate() {
        let xi = 2 * e + i;
        lp.set_objective(xi, c.positives as f64);
        let mut row = f.row(&c.point);
        row.push((xi, 1.0));
        lp.add_constraint(row, Relation::Ge, 1.0)?;
    }
    for c in f.counts.iter().filter(|c| c.negatives > 0) {
        lp.add_constraint(f.row(&c.point), Relation::Le, -1.0 + eps)?;
    }
    f.add_weight_cap(&mut lp, w)?;
    let sol = lp.solve()?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Err(Error::Infeasible(format!(
                "no polynomial of degree {d} and weight {w} is at most -1 + {eps} on every negative example"
            )))
        }
        status => return Err(Error::Solver { status, detail: "reliable fit".into() }),
    }
    let p = f.poly(s.dim(), &sol.values)?;
    let report = FitReport {
        objective_value: sol.objective_value.max(0.0),
        constraints_active: active_rows(&lp, &sol.values),
        eps,
        w,
        d,
        m: s.len(),
        lp_status: sol.status,
        lp_iterations: sol.iterations,
        lp_rows: lp.num_constraints(),
        lp_vars: lp.num_vars(),
        weight: p.weight(),
    };
    Ok((p, report))
}

/// Minimizes the hinge loss `sum (1 - p(x_i))_+` over positive examples
/// subject to `p(x_i) <= -1 + eps` on negative examples and weight at most
/// `w`, over polynomials of degree at most `d`. The negative sign swaps the
/// roles of the labels (and negates the polynomial).
pub fn reliable_fit(s: &LabeledSample, d: usize, w: f64, eps: f64, sign: Sign) -> Result<(SparsePolynomial<f64>, FitReport)> {
    check_fit_params(s, w, Some(eps))?;
    match sign {
        Sign::Positive => reliable_fit_positive(s, d, w, eps),
        Sign::Negative => {
            let (p, r) = reliable_fit_positive(&s.with_flipped_labels(), d, w, eps)?;
            Ok((p.neg(), r))
        }
    }
}

/// Clamp to `[-1, 1]`.
pub fn chop(a: f64) -> f64 {
    a.clamp(-1.0, 1.0)
}

/// `+1` with probability `(1 + chop(p(x)))/2`, realized by the supplied
/// uniform draw `u`.
pub fn randomized_round(p: &SparsePolynomial<f64>, x: &CubePoint, u: f64) -> Label {
    round_value(p.eval_f64(x), u)
}

pub fn round_value(v: f64, u: f64) -> Label {
    if v <= -1.0 {
        Label::Negative
    } else if v >= 1.0 {
        Label::Positive
    } else {
        Label::from_bool(u < (1.0 + v) / 2.0)
    }
}

/// How a reliable hypothesis turns polynomial values into labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Rounding {
    Randomized,
    Thresholded {
        #[serde(with = "extended_f64")]
        t: f64,
        calibration_size: usize,
    },
}

/// A trained reliable classifier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReliableHypothesis {
    pub poly: SparsePolynomial<f64>,
    pub sign: Sign,
    pub rounding: Rounding,
}

impl ReliableHypothesis {
    pub fn chopped(&self, x: &CubePoint) -> f64 {
        chop(self.poly.eval_f64(x))
    }

    /// Label under threshold rounding; randomized hypotheses use `u = 1/2`
    /// here, see [`decide_with`](Self::decide_with).
    pub fn predict(&self, x: &CubePoint) -> Label {
        self.decide_with(x, 0.5)
    }

    pub fn decide_with(&self, x: &CubePoint, u: f64) -> Label {
        let h = self.chopped(x);
        match self.rounding {
            Rounding::Randomized => round_value(h, u),
            Rounding::Thresholded { t, .. } => match self.sign {
                Sign::Positive => Label::from_bool(h > t),
                Sign::Negative => Label::from_bool(!(h < t)),
            },
        }
    }
}

impl PartialHypothesis for ReliableHypothesis {
    fn decide(&self, x: &CubePoint) -> Partial {
        self.predict(x).into()
    }
}

/// Smallest candidate `t` (distinct values of `h` plus `+-inf`) such that
/// the fraction of negatives with `h > t` is at most `eps`.
pub fn smallest_threshold(h: &[f64], labels: &[Label], eps: f64) -> f64 {
    let m = h.len();
    let mut neg: Vec<f64> = h.iter().zip(labels).filter(|(_, y)| **y == Label::Negative).map(|(v, _)| *v).collect();
    neg.sort_by(|a, b| a.total_cmp(b));
    let mut cands: Vec<f64> = h.to_vec();
    cands.push(f64::NEG_INFINITY);
    cands.push(f64::INFINITY);
    cands.sort_by(|a, b| a.total_cmp(b));
    cands.dedup();
    // Allowed number of false positives.
    let allowed = (eps * m as f64 + 1e-9).floor() as usize;
    for t in cands {
        let above = neg.len() - neg.partition_point(|&v| v <= t);
        if above <= allowed {
            return t;
        }
    }
    f64::INFINITY
}

/// Smallest number of calibration examples accepted at error `eps`.
pub fn min_calibration(eps: f64) -> usize {
    (1.0 / (eps * eps)).ceil() as usize
}

/// Replaces randomized rounding by the threshold classifier
/// `sgn(chop(p(x)) - t*)` with the smallest `t*` whose false-positive rate
/// on the fresh sample is at most `eps` (mirrored for the negative sign).
pub fn derandomize(p: &SparsePolynomial<f64>, fresh: &LabeledSample, eps: f64, sign: Sign) -> Result<ReliableHypothesis> {
    if fresh.len() < min_calibration(eps) {
        return Err(Error::input(format!(
            "calibration sample has {} examples; at least {} needed at eps = {eps}",
            fresh.len(),
            min_calibration(eps)
        )));
    }
    if p.dim() != fresh.dim() {
        return Err(Error::input("calibration sample dimension differs from the polynomial"));
    }
    let h: Vec<f64> = fresh.points().iter().map(|x| chop(p.eval_f64(x))).collect();
    let t = match sign {
        Sign::Positive => smallest_threshold(&h, fresh.labels(), eps),
        Sign::Negative => {
            let hn: Vec<f64> = h.iter().map(|v| -v).collect();
            let yn: Vec<Label> = fresh.labels().iter().map(|&y| -y).collect();
            -smallest_threshold(&hn, &yn, eps)
        }
    };
    Ok(ReliableHypothesis { poly: p.clone(), sign, rounding: Rounding::Thresholded { t, calibration_size: fresh.len() } })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReliableFit {
    pub hypothesis: ReliableHypothesis,
    pub report: FitReport,
}

/// [`reliable_fit`] followed by [`derandomize`] on `fresh`.
pub fn learn_reliable(s: &LabeledSample, d: usize, w: f64, eps: f64, sign: Sign, fresh: &LabeledSample) -> Result<ReliableFit> {
    let (p, report) = reliable_fit(s, d, w, eps, sign)?;
    let hypothesis = derandomize(&p, fresh, eps, sign)?;
    Ok(ReliableFit { hypothesis, report })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnParams {
    pub d: usize,
    #[serde(rename = "W")]
    pub w: f64,
    pub eps: f64,
}

/// Agreement classifier of a positive and a negative reliable hypothesis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullyReliable {
    pub positive: ReliableFit,
    pub negative: ReliableFit,
}

impl PartialHypothesis for FullyReliable {
    fn decide(&self, x: &CubePoint) -> Partial {
        let a = self.positive.hypothesis.predict(x);
        let b = self.negative.hypothesis.predict(x);
        if a == b {
            a.into()
        } else {
            Partial::Unknown
        }
    }
}

/// Trains positive and negative reliable learners at `eps/4` and combines
/// them: the common label where they agree, `?` otherwise.
pub fn learn_fully_reliable(s: &LabeledSample, params: &LearnParams, fresh: &LabeledSample) -> Result<FullyReliable> {
    let eps = params.eps / 4.0;
    let positive = learn_reliable(s, params.d, params.w, eps, Sign::Positive, fresh)?;
    let negative = learn_reliable(s, params.d, params.w, eps, Sign::Negative, fresh)?;
    Ok(FullyReliable { positive, negative })
}

/// Minimizes `sum_i |p(x_i) - y_i|` over polynomials of degree at most `d`
/// and weight at most `w`.
pub fn agnostic_l1_fit(s: &LabeledSample, d: usize, w: f64) -> Result<(SparsePolynomial<f64>, FitReport)> {
    check_fit_params(s, w, None)?;
    let f = Features::new(s, d)?;
    let e = f.len();
    let slots: Vec<(usize, Label, usize)> = f
        .counts
        .iter()
        .enumerate()
        .flat_map(|(i, c)| [(i, Label::Positive, c.positives), (i, Label::Negative, c.negatives)])
        .filter(|&(_, _, k)| k > 0)
        .collect();
    let mut lp = LinearProgram::new(2 * e + slots.len());
    for (k, &(i, y, count)) in slots.iter().enumerate() {
        let u = 2 * e + k;
        lp.set_objective(u, count as f64);
        let row = f.row(&f.counts[i].point);
        // u >= p - y and u >= y - p
        let mut a = row.clone();
        a.push((u, -1.0));
        lp.add_constraint(a, Relation::Le, y.as_f64())?;
        let mut b = row;
        b.push((u, 1.0));
        lp.add_constraint(b, Relation::Ge, y.as_f64())?;
    }
    f.add_weight_cap(&mut lp, w)?;
    let sol = lp.solve()?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Solver { status: sol.status, detail: "agnostic L1 fit".into() });
    }
    let p = f.poly(s.dim(), &sol.values)?;
    let report = FitReport {
        objective_value: sol.objective_value.max(0.0),
        constraints_active: active_rows(&lp, &sol.values),
        eps: 0.0,
        w,
        d,
        m: s.len(),
        lp_status: sol.status,
        lp_iterations: sol.iterations,
        lp_rows: lp.num_constraints(),
        lp_vars: lp.num_vars(),
        weight: p.weight(),
    };
    Ok((p, report))
}

/// A polynomial threshold classifier `sgn(p(x) - t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdHypothesis {
    pub poly: SparsePolynomial<f64>,
    #[serde(with = "extended_f64")]
    pub t: f64,
}

impl ThresholdHypothesis {
    pub fn predict(&self, x: &CubePoint) -> Label {
        Label::from_bool(self.poly.eval_f64(x) > self.t)
    }
}

impl PartialHypothesis for ThresholdHypothesis {
    fn decide(&self, x: &CubePoint) -> Partial {
        self.predict(x).into()
    }
}

/// Threshold minimizing the empirical error of `sgn(p(x) - t)` on `fresh`
/// over the candidates `-inf` and the observed values; ties go to the
/// smaller threshold.
pub fn calibrate_threshold(p: &SparsePolynomial<f64>, fresh: &LabeledSample) -> Result<ThresholdHypothesis> {
    if fresh.is_empty() {
        return Err(Error::input("threshold calibration needs a non-empty sample"));
    }
    let mut vals: Vec<(f64, Label)> = fresh.iter().map(|(x, y)| (p.eval_f64(x), y)).collect();
    vals.sort_by(|a, b| a.0.total_cmp(&b.0));
    // At t = -inf everything is predicted +1: errors are the negatives.
    let mut errors = vals.iter().filter(|v| v.1 == Label::Negative).count();
    let (mut best_t, mut best) = (f64::NEG_INFINITY, errors);
    let mut i = 0;
    while i < vals.len() {
        let t = vals[i].0;
        while i < vals.len() && vals[i].0 == t {
            // Moving t up to this value flips these points to -1.
            match vals[i].1 {
                Label::Negative => errors -= 1,
                Label::Positive => errors += 1,
            }
            i += 1;
        }
        if errors < best {
            best = errors;
            best_t = t;
        }
    }
    Ok(ThresholdHypothesis { poly: p.clone(), t: best_t })
}

/// Sample size bound for reliable learning, with both terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub m: u64,
    pub term_rademacher: f64,
    pub term_confidence: f64,
}

/// `m = max(512/eps^4 W^2 d ln(2n), 64/eps^2 (W+1)^2 ln(1/delta))`.
pub fn plan_samples(n: usize, d: usize, w: f64, eps: f64, delta: f64) -> Result<SamplePlan> {
    if n == 0 || d == 0 || !(w > 0.0) {
        return Err(Error::param("plan_samples needs n, d, W positive"));
    }
    if !(eps > 0.0 && eps <= 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("need eps in (0, 1] and delta in (0, 1), got {eps}, {delta}")));
    }
    let term_rademacher = 512.0 / eps.powi(4) * w * w * d as f64 * (2.0 * n as f64).ln();
    let term_confidence = 64.0 / (eps * eps) * (w + 1.0).powi(2) * (1.0 / delta).ln();
    let m = term_rademacher.max(term_confidence).ceil() as u64;
    Ok(SamplePlan { m, term_rademacher, term_confidence })
}

/// `W sqrt(2 d ln(2n) / m)`.
pub fn rademacher_bound(w: f64, d: usize, n: usize, m: f64) -> f64 {
    w * (2.0 * d as f64 * (2.0 * n as f64).ln() / m).sqrt()
}

/// `(4/eps) R + 2 (W + 1) sqrt(ln(1/delta) / (2m))` with `R` from
/// [`rademacher_bound`].
pub fn generalization_alpha(n: usize, d: usize, w: f64, eps: f64, delta: f64, m: f64) -> f64 {
    4.0 / eps * rademacher_bound(w, d, n, m) + 2.0 * (w + 1.0) * ((1.0 / delta).ln() / (2.0 * m)).sqrt()
}

/// Serializes `f64` with infinities written as `"inf"` / `"-inf"`.
pub mod extended_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else if *v < 0.0 {
            s.serialize_str("-inf")
        } else {
            s.serialize_str("nan")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(serde::de::Error::custom(format!("bad number {t:?}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{cube_points, empirical_metrics, BooleanFunction};

    fn sample(n: usize, rows: &[(&[i8], i8)]) -> LabeledSample {
        let mut s = LabeledSample::empty(n);
        for (x, y) in rows {
            s.push(CubePoint::from_signs(x).unwrap(), Label::try_from(*y as i64).unwrap()).unwrap();
        }
        s
    }

    #[test]
    fn eliminator_examples() {
        let s = sample(2, &[(&[1, -1], 1)]);
        let h = learn_disjunction_positive(&s).unwrap();
        assert_eq!(h.to_string(), "DISJ +1 -1 +2 -2");
        let s = sample(3, &[(&[1, 1, 1], -1)]);
        assert_eq!(learn_disjunction_positive(&s).unwrap().to_string(), "DISJ -1 -2 -3");
        let s = sample(2, &[(&[1, 1], -1), (&[-1, -1], -1)]);
        let h = learn_disjunction_positive(&s).unwrap();
        for x in cube_points(2) {
            assert_eq!(h.value(&x), Label::Negative);
        }
    }

    #[test]
    fn rounding_examples() {
        let p = |v: f64| SparsePolynomial::constant(1, v);
        let x = CubePoint::all_ones(1);
        assert_eq!(randomized_round(&p(5.0), &x, 0.999), Label::Positive);
        assert_eq!(randomized_round(&p(0.0), &x, 0.49), Label::Positive);
        assert_eq!(randomized_round(&p(0.0), &x, 0.5), Label::Negative);
        assert_eq!(randomized_round(&p(-0.5), &x, 0.24), Label::Positive);
        assert_eq!(randomized_round(&p(-0.5), &x, 0.25), Label::Negative);
    }

    #[test]
    fn threshold_examples() {
        let all_pos = [Label::Positive; 3];
        assert_eq!(smallest_threshold(&[0.1, 0.2, 0.3], &all_pos, 0.1), f64::NEG_INFINITY);
        let all_neg = [Label::Negative; 3];
        assert_eq!(smallest_threshold(&[-1.0; 3], &all_neg, 0.1), -1.0);
    }

    #[test]
    fn hypothesis_json_round_trips_infinite_threshold() {
        let h = ReliableHypothesis {
            poly: SparsePolynomial::constant(2, 0.5),
            sign: Sign::Positive,
            rounding: Rounding::Thresholded { t: f64::NEG_INFINITY, calibration_size: 10 },
        };
        let text = serde_json::to_string(&h).unwrap();
        assert!(text.contains("\"-inf\""));
        assert_eq!(serde_json::from_str::<ReliableHypothesis>(&text).unwrap(), h);
    }

    #[test]
    fn weight_zero_is_infeasible_with_negatives() {
        let s = sample(1, &[(&[1], -1), (&[-1], 1)]);
        assert!(matches!(reliable_fit(&s, 1, 0.0, 0.5, Sign::Positive), Err(Error::Infeasible(_))));
        let s = sample(1, &[(&[1], -1), (&[-1], -1)]);
        let (_, r) = reliable_fit(&s, 1, 1.0, 0.5, Sign::Positive).unwrap();
        assert_eq!(r.objective_value, 0.0);
    }

    #[test]
    fn agnostic_examples() {
        let s = sample(2, &[(&[1, 1], 1), (&[-1, 1], 1), (&[1, -1], 1)]);
        let (p, r) = agnostic_l1_fit(&s, 2, 1.0).unwrap();
        assert!(r.objective_value.abs() < 1e-9);
        assert!((p.eval_f64(&CubePoint::all_ones(2)) - 1.0).abs() < 1e-9);
        let s = sample(2, &[(&[1, 1], 1), (&[-1, 1], -1), (&[1, -1], 1)]);
        let (p, r) = agnostic_l1_fit(&s, 2, 0.0).unwrap();
        assert!((r.objective_value - 3.0).abs() < 1e-9);
        assert!(p.is_zero());
        let h = calibrate_threshold(&p, &s).unwrap();
        assert_eq!(h.t, f64::NEG_INFINITY);
        assert!((empirical_metrics(&h, &s).unwrap().err - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn plan_at_units() {
        let p = plan_samples(1, 1, 1.0, 1.0, 0.5).unwrap();
        assert!((p.term_rademacher - 512.0 * 2f64.ln()).abs() < 1e-9);
        assert!((rademacher_bound(1.0, 1, 1, 2.0 * 2f64.ln()) - 1.0).abs() < 1e-12);
    }
}
