//! Property tests for the invariants of each module.

use num_traits::{One, Signed};
use proptest::prelude::*;

use onesided::certify::{min_eps, verify, verify_onesided, Mode};
use onesided::constructions::{
    default_kahn_params, halfspace_onesided_eps, halfspace_pos_quarter, kahn_sk, or_compose,
};
use onesided::cube::{
    cube_points, empirical_metrics, BooleanFunction, Concept, CubePoint, Label, LabeledSample, Literal, Partial,
    Sign, TruthTable,
};
use onesided::harness::{
    brute_opt, generate, persist, execute, replay, Bank, LearnerSpec, NoiseModel, OptMode, RunSpec, SampleSizes,
};
use onesided::learn::{
    derandomize, learn_disjunction_positive, reliable_fit, round_value, Rounding,
};
use onesided::lp::{LinearProgram, LpStatus, Relation};
use onesided::poly::{chebyshev, int, rational, ExpansionCap, Monomial, SparsePolynomial, StructuredPolynomial, UniPoly};

fn labeled(n: usize, m: std::ops::Range<usize>) -> impl Strategy<Value = LabeledSample> {
    prop::collection::vec((0..1u64 << n, any::<bool>()), m).prop_map(move |rows| {
        let (pts, ys): (Vec<_>, Vec<_>) =
            rows.into_iter().map(|(i, b)| (CubePoint::from_index(n, i), Label::from_bool(b))).unzip();
        LabeledSample::new(n, pts, ys).unwrap()
    })
}

fn clause(n: usize) -> impl Strategy<Value = Vec<Literal>> {
    prop::collection::btree_set(0..n, 1..=n.min(3))
        .prop_flat_map(|vars| {
            let vars: Vec<usize> = vars.into_iter().collect();
            let k = vars.len();
            (Just(vars), prop::collection::vec(any::<bool>(), k))
        })
        .prop_map(|(vars, signs)| vars.into_iter().zip(signs).map(|(v, s)| Literal { var: v, positive: s }).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn total_hypothesis_err_is_sum(s in labeled(4, 1..40), mask in 0u64..16) {
        let h = move |x: &CubePoint| Partial::from(Label::from_bool(x.neg_mask() & mask != 0));
        let m = empirical_metrics(&h, &s).unwrap();
        prop_assert_eq!(m.unknown_rate, 0.0);
        prop_assert!((m.err - (m.false_pos + m.false_neg)).abs() < 1e-12);
    }

    #[test]
    fn dnf_is_or_of_clauses((n, clauses) in (2usize..=8).prop_flat_map(|n| (Just(n), prop::collection::vec(clause(n), 1..4)))) {
        let f = Concept::dnf(n, clauses.clone()).unwrap();
        let parts: Vec<Concept> = clauses.into_iter().map(|c| Concept::conjunction(n, c).unwrap()).collect();
        for x in cube_points(n) {
            let any = parts.iter().any(|c| c.value(&x).is_positive());
            prop_assert_eq!(f.value(&x).is_positive(), any);
        }
    }

    #[test]
    fn halfspace_tie_is_negative(w in prop::collection::vec(-5i64..=5, 1..=8), idx in any::<u64>()) {
        let n = w.len();
        let x = CubePoint::from_index(n, idx & ((1 << n) - 1));
        let w0 = -x.dot(&w);
        let h = Concept::halfspace(w0, w).unwrap();
        prop_assert_eq!(h.value(&x), Label::Negative);
    }

    #[test]
    fn expand_agrees_with_eval(
        w in prop::collection::vec(-2i64..=2, 1..=7),
        w0 in -3i64..=3,
        outer in prop::collection::vec(-3i64..=3, 1..=4),
    ) {
        let n = w.len();
        let p = StructuredPolynomial::AffineComposed { outer: UniPoly::from_ints(&outer), w0, w };
        let e = p.expand(&ExpansionCap::default()).unwrap();
        for x in cube_points(n) {
            prop_assert_eq!(e.eval(&x).unwrap(), p.eval_exact(&x).unwrap());
        }
    }

    #[test]
    fn lp_strong_duality(
        rows in 1usize..=5,
        cols in 1usize..=5,
        a in prop::collection::vec(1u32..=10, 25),
        b in prop::collection::vec(0u32..=10, 5),
        c in prop::collection::vec(1u32..=10, 5),
    ) {
        // Primal: min c.x, A x >= b, x >= 0. Dual: max b.y, A'y <= c, y >= 0.
        let at = |i: usize, j: usize| a[i * 5 + j] as f64 / 10.0;
        let mut primal = LinearProgram::new(cols);
        for j in 0..cols {
            primal.set_objective(j, c[j] as f64);
        }
        for i in 0..rows {
            primal.add_constraint((0..cols).map(|j| (j, at(i, j))), Relation::Ge, b[i] as f64).unwrap();
        }
        let mut dual = LinearProgram::new(rows);
        for i in 0..rows {
            dual.set_objective(i, -(b[i] as f64));
        }
        for j in 0..cols {
            dual.add_constraint((0..rows).map(|i| (i, at(i, j))), Relation::Le, c[j] as f64).unwrap();
        }
        let p = primal.solve().unwrap();
        let d = dual.solve().unwrap();
        prop_assert_eq!(p.status, LpStatus::Optimal);
        prop_assert_eq!(d.status, LpStatus::Optimal);
        prop_assert!((p.objective_value + d.objective_value).abs() <= 1e-6 * (1.0 + p.objective_value.abs()));
    }

    #[test]
    fn lp_row_permutation_keeps_objective(
        rows in prop::collection::vec((prop::collection::vec(-5i32..=5, 4), -10i32..=10, 0u8..3), 1..8),
        c in prop::collection::vec(-3i32..=3, 4),
        rot in 0usize..8,
    ) {
        let build = |order: &[usize]| {
            let mut lp = LinearProgram::new(4);
            for j in 0..4 {
                lp.set_objective(j, c[j] as f64);
                lp.set_bounds(j, -10.0, 10.0);
            }
            for &i in order {
                let (coef, rhs, rel) = &rows[i];
                let rel = [Relation::Le, Relation::Ge, Relation::Eq][*rel as usize];
                lp.add_constraint(coef.iter().enumerate().map(|(j, &v)| (j, v as f64)), rel, *rhs as f64).unwrap();
            }
            lp.solve().unwrap()
        };
        let order: Vec<usize> = (0..rows.len()).collect();
        let mut permuted = order.clone();
        permuted.rotate_left(rot % rows.len());
        permuted.reverse();
        let a = build(&order);
        let b = build(&permuted);
        prop_assert_eq!(a.status, b.status);
        if a.status == LpStatus::Optimal {
            prop_assert!((a.objective_value - b.objective_value).abs() <= 1e-7 * (1.0 + a.objective_value.abs()));
        }
    }

    #[test]
    fn min_eps_duality_and_witness(table in prop::collection::vec(any::<bool>(), 8), d in 0usize..=3) {
        let f = TruthTable::from_fn(3, |x| Label::from_bool(table[x.index() as usize]));
        let neg = min_eps(&f, d, Mode::Negative).unwrap();
        let pos_of_neg = min_eps(&f.negated(), d, Mode::Positive).unwrap();
        prop_assert!((neg.eps - pos_of_neg.eps).abs() <= 1e-7);
        for mode in [Mode::Positive, Mode::Negative, Mode::Twosided] {
            let r = min_eps(&f, d, mode).unwrap();
            let w = StructuredPolynomial::Sparse(r.poly.to_rational().unwrap());
            prop_assert!(verify(&w, &f, r.eps + 1e-7, mode).unwrap().ok);
        }
    }

    #[test]
    fn eliminator_consistent_and_maximal(n in 1usize..=30, rows in prop::collection::vec((any::<u64>(), any::<bool>()), 1..60)) {
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let (pts, ys): (Vec<_>, Vec<_>) =
            rows.into_iter().map(|(i, b)| (CubePoint::from_index(n, i & mask), Label::from_bool(b))).unzip();
        let s = LabeledSample::new(n, pts, ys).unwrap();
        let h = learn_disjunction_positive(&s).unwrap();
        for (x, y) in s.iter() {
            if y == Label::Negative {
                prop_assert_eq!(h.value(x), Label::Negative);
            }
        }
        let onesided::cube::ConceptKind::Disjunction(kept) = h.kind() else { panic!("not a disjunction") };
        for v in 0..n {
            for positive in [true, false] {
                let l = Literal { var: v, positive };
                if !kept.contains(&l) {
                    prop_assert!(s.iter().any(|(x, y)| y == Label::Negative && l.eval(x)));
                }
            }
        }
    }

    #[test]
    fn reliable_fit_feasible(s in labeled(3, 1..30), d in 1usize..=3, w in 1.0f64..4.0, eps in 0.05f64..0.5) {
        match reliable_fit(&s, d, w, eps, Sign::Positive) {
            Ok((p, _)) => {
                prop_assert!(p.weight() <= w + 1e-7);
                for (x, y) in s.iter() {
                    if y == Label::Negative {
                        prop_assert!(p.eval_f64(x) <= -1.0 + eps + 1e-7);
                    }
                }
            }
            Err(onesided::Error::Infeasible(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn reliable_fit_beats_grid(s in labeled(2, 1..20)) {
        let (w, eps) = (2.0, 0.25);
        let grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let mut best = f64::INFINITY;
        for &c0 in &grid {
            for &c1 in &grid {
                for &c2 in &grid {
                    if c0.abs() + c1.abs() + c2.abs() > w {
                        continue;
                    }
                    let p = |x: &CubePoint| c0 + c1 * x.get(0) as f64 + c2 * x.get(1) as f64;
                    if s.iter().any(|(x, y)| y == Label::Negative && p(x) > -1.0 + eps) {
                        continue;
                    }
                    let hinge: f64 = s.iter().filter(|(_, y)| *y == Label::Positive).map(|(x, _)| (1.0 - p(x)).max(0.0)).sum();
                    best = best.min(hinge);
                }
            }
        }
        match reliable_fit(&s, 1, w, eps, Sign::Positive) {
            Ok((_, r)) => prop_assert!(r.objective_value <= best + 1e-7),
            Err(onesided::Error::Infeasible(_)) => prop_assert!(best.is_infinite()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn reliable_mirror_symmetry(s in labeled(3, 4..30), d in 1usize..=2) {
        let neg = reliable_fit(&s, d, 3.0, 0.2, Sign::Negative);
        let pos = reliable_fit(&s.negated(), d, 3.0, 0.2, Sign::Positive);
        match (neg, pos) {
            (Ok((_, a)), Ok((_, b))) => prop_assert!((a.objective_value - b.objective_value).abs() <= 1e-6),
            (Err(onesided::Error::Infeasible(_)), Err(onesided::Error::Infeasible(_))) => {}
            (a, b) => return Err(TestCaseError::fail(format!("{:?} vs {:?}", a.map(|r| r.1), b.map(|r| r.1)))),
        }
    }

    #[test]
    fn rounding_expectation_on_grid(v in -1.5f64..1.5) {
        let grid = 10_000;
        let mean: f64 = (0..grid).map(|i| round_value(v, (i as f64 + 0.5) / grid as f64).as_f64()).sum::<f64>() / grid as f64;
        prop_assert!((mean - v.clamp(-1.0, 1.0)).abs() <= 1e-3);
    }

    #[test]
    fn derandomize_meets_eps_exactly(
        s in labeled(4, 100..160),
        coef in prop::collection::vec(-1.0f64..1.0, 5),
        eps in 0.1f64..0.5,
    ) {
        let terms = coef.iter().enumerate().map(|(j, &c)| (if j == 0 { Monomial::ONE } else { Monomial::var(j - 1) }, c));
        let p = SparsePolynomial::from_terms(4, terms).unwrap();
        for sign in [Sign::Positive, Sign::Negative] {
            let h = derandomize(&p, &s, eps, sign).unwrap();
            let thresholded = matches!(h.rounding, Rounding::Thresholded { .. });
            prop_assert!(thresholded);
            let m = empirical_metrics(&h, &s).unwrap();
            let rate = if sign == Sign::Positive { m.false_pos } else { m.false_neg };
            prop_assert!(rate <= eps);
        }
    }

    #[test]
    fn one_sided_noise_keeps_planted_reliable(seed in any::<u64>(), m in 1usize..500, eta in 0.0f64..0.9) {
        let c = Concept::majority(5, [0, 1, 3]).unwrap();
        let s = generate(&c, &NoiseModel::OneSidedPositive { eta }, m, seed).unwrap();
        prop_assert_eq!(empirical_metrics(&c, &s).unwrap().false_pos, 0.0);
        let s = generate(&c, &NoiseModel::OneSidedNegative { eta }, m, seed).unwrap();
        prop_assert_eq!(empirical_metrics(&c, &s).unwrap().false_neg, 0.0);
    }

    #[test]
    fn brute_opt_monotone_in_bank(s in labeled(4, 1..50), masks in prop::collection::vec(1u64..16, 1..10)) {
        let concepts: Vec<Concept> = masks
            .iter()
            .map(|&m| Concept::majority(4, (0..4).filter(|j| m >> j & 1 == 1)).unwrap())
            .collect();
        let mut prev = f64::INFINITY;
        for k in 0..=concepts.len() {
            let bank = Bank::Explicit { concepts: concepts[..k].to_vec() };
            let v = brute_opt(&s, &bank, OptMode::Positive).unwrap().value;
            prop_assert!(v <= prev);
            prev = v;
        }
    }
}

#[test]
fn chebyshev_bounded_on_interval() {
    for d in 0..=30 {
        let t = chebyshev(d);
        for k in 0..=1000i64 {
            let v = t.eval(&rational(k - 500, 500)).abs();
            assert!(v <= int(1), "T_{d} exceeds 1");
        }
    }
}

#[test]
fn chebyshev_growth_just_outside() {
    for a in 1..=30i64 {
        let t = chebyshev(a as usize);
        let v = t.eval(&(int(1) + rational(1, a * a)));
        assert!(v >= int(2), "T_{a}(1 + 1/a^2) < 2");
    }
}

#[test]
fn chebyshev_monotone_above_one() {
    for d in 0..=20 {
        let t = chebyshev(d);
        let mut prev = t.eval(&int(1));
        for k in 1..=200i64 {
            let v = t.eval(&(int(1) + rational(k, 40)));
            assert!(v >= prev, "T_{d} decreases above 1");
            prev = v;
        }
    }
}

#[test]
fn sk_at_least_one_beyond_w() {
    for w in [8u64, 20, 33, 64] {
        for k in [6u64, 8, 12, 16] {
            let Ok(params) = default_kahn_params(w, k) else { continue };
            let s = kahn_sk(&params).unwrap();
            for t in w..=2 * w {
                assert!(s.eval(&int(t as i64)) >= num_rational::BigRational::one(), "S_k({}) < 1 at W = {}, k = {}", t, w, k);
            }
        }
    }
}

#[test]
fn constructions_certify_on_small_halfspaces() {
    let halfspaces = [
        Concept::halfspace(0, vec![1, 2, -1]).unwrap(),
        Concept::halfspace(1, vec![2, -3, 1, 1]).unwrap(),
        Concept::halfspace(-2, vec![1, 1, 1, 1, 1]).unwrap(),
        Concept::halfspace(0, vec![3, 1, 1, -1, 2, 1]).unwrap(),
    ];
    for h in &halfspaces {
        let q = halfspace_pos_quarter(h).unwrap();
        assert!(verify_onesided(&q, h, 0.25, Sign::Positive).unwrap().ok, "quarter {h}");
        for sign in [Sign::Positive, Sign::Negative] {
            for eps in [0.25, 0.1] {
                let a = halfspace_onesided_eps(h, sign, eps).unwrap();
                assert!(a.certified(), "{h} {sign} {eps}");
                assert!(verify_onesided(&a.poly, h, eps, sign).unwrap().ok);
            }
        }
    }
}

#[test]
fn or_compose_degree_is_max_of_parts() {
    let n = 5;
    let p1 = halfspace_pos_quarter(&Concept::majority(n, [0, 1, 2]).unwrap()).unwrap();
    let p2 = halfspace_pos_quarter(&Concept::majority(n, [3]).unwrap()).unwrap();
    let cap = ExpansionCap::default();
    let d1 = p1.expand(&cap).unwrap().degree();
    let d2 = p2.expand(&cap).unwrap().degree();
    let composed = or_compose(vec![p1, p2]).unwrap();
    assert_eq!(composed.expand(&cap).unwrap().degree(), d1.max(d2));
}

#[test]
fn replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let spec = RunSpec {
        seed: 11,
        concept: Concept::full_majority(5),
        noise: NoiseModel::OneSidedPositive { eta: 0.1 },
        learner: LearnerSpec::Reliable { sign: Sign::Positive, d: 3, w: 6.0, eps: 0.2 },
        sizes: SampleSizes { train: 400, calibration: 200, holdout: 400 },
        bank: Some(Bank::Majority),
        delta: 0.05,
    };
    let out = execute(&spec).unwrap();
    assert!(out.manifest.result.error.is_none(), "{:?}", out.manifest.result.error);
    let run_dir = persist(&out, dir.path()).unwrap();
    let r = replay(&run_dir).unwrap();
    assert!(r.identical, "{:?}", r.mismatched);
}
