//! Explicit one-sided and two-sided approximating polynomials: Chebyshev
//! constructions for halfspaces, the normalized polynomials `S_k`, OR/AND
//! composition, the blocked construction for `AND_n`, and DNF/CNF formulas.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::certify::{self, CertReport, EXHAUSTIVE_CAP};
use crate::cube::{BooleanFunction, Concept, ConceptKind, Literal, Sign};
use crate::error::{Error, Result};
use crate::poly::{chebyshev, int, rational, rational_to_f64, Monomial, Rational, SparsePolynomial, StructuredPolynomial, UniPoly};

/// A requested one-sided approximation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneSidedSpec {
    pub target: Concept,
    pub sign: Sign,
    pub eps: f64,
    pub degree_bound: usize,
    pub weight_bound: f64,
}

/// Parameters of `S_k`: roots at `0..=a` and `W-b..W`, a Chebyshev factor
/// of degree `r`, normalized to 1 at `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KahnParams {
    #[serde(rename = "W")]
    pub w: u64,
    pub k: u64,
    pub a: u64,
    pub b: u64,
    pub r: u64,
}

impl KahnParams {
    /// Degree of the resulting polynomial, `a + 1 + b + r`.
    pub fn degree(&self) -> u64 {
        self.a + 1 + self.b + self.r
    }

    fn validate(&self) -> Result<()> {
        if self.w < 1 {
            return Err(Error::param("S_k needs W >= 1"));
        }
        if self.a + self.b >= self.w {
            return Err(Error::param(format!(
                "S_k parameters need W - b - a > 0 (W = {}, a = {}, b = {})",
                self.w, self.a, self.b
            )));
        }
        if self.degree() > self.k.max(1) {
            return Err(Error::param(format!(
                "S_k degree a + 1 + b + r = {} exceeds k = {}",
                self.degree(),
                self.k
            )));
        }
        Ok(())
    }
}

/// An approximant together with the parameters that produced it and the
/// outcome of its certification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Approximant {
    pub poly: StructuredPolynomial,
    pub eps: f64,
    pub kahn: Option<KahnParams>,
    /// `None` when the target was too large to enumerate.
    pub certificate: Option<CertReport>,
}

impl Approximant {
    pub fn certified(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.ok)
    }
}

fn halfspace_parts(h: &Concept) -> Result<(i64, Vec<i64>, u64)> {
    let (w0, w) = h
        .as_halfspace()
        .ok_or_else(|| Error::input(format!("{h} is not a halfspace or majority")))?;
    let weight = w0.unsigned_abs() + w.iter().map(|x| x.unsigned_abs()).sum::<u64>();
    if weight == 0 {
        return Err(Error::param("halfspace weight must be at least 1"));
    }
    Ok((w0, w, weight))
}

fn ceil_sqrt(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while r * r < v {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= v {
        r -= 1;
    }
    r
}

/// `P(w0 + w.x)` with `P = T_d(2t/W + 1)^4 / 4 - 1` and `d = ceil(sqrt(W))`:
/// at least 3 where the halfspace is true and within `[-1, -3/4]` where it
/// is false, so a positive one-sided 1/4-approximation of degree `4d`.
pub fn halfspace_pos_quarter(h: &Concept) -> Result<StructuredPolynomial> {
    let (w0, w, weight) = halfspace_parts(h)?;
    let d = ceil_sqrt(weight) as usize;
    let g = chebyshev(d).compose_affine(&rational(2, weight as i64), &int(1));
    let outer = g.pow(4).scale(&rational(1, 4)).add_constant(&int(-1));
    Ok(StructuredPolynomial::AffineComposed { outer, w0, w })
}

fn product_of_roots(roots: impl Iterator<Item = u64>) -> UniPoly {
    roots.fold(UniPoly::constant(Rational::one()), |acc, i| acc.mul(&UniPoly::linear_root(i as i64)))
}

/// `S_k(t) = C^-1 prod_{i=0..=a} (t - i) prod_{j=W-b..W-1} (t - j)
/// T_r((t - a)/(W - b - a))`, with `C` chosen so that `S_k(W) = 1`.
pub fn kahn_sk(params: &KahnParams) -> Result<UniPoly> {
    params.validate()?;
    let KahnParams { w, a, b, r, .. } = *params;
    let roots = product_of_roots((0..=a).chain(w - b..w));
    let span = (w - b - a) as i64;
    let cheb = chebyshev(r as usize).compose_affine(&rational(1, span), &rational(-(a as i64), span));
    let raw = roots.mul(&cheb);
    let c = raw.eval(&int(w as i64));
    debug_assert!(c.is_positive());
    let s = raw.scale(&(Rational::one() / c));
    if log::log_enabled!(log::Level::Debug) && params.k > 0 && w > 1 {
        let c_exp = s.log_coeff_exponent(w as f64) / params.k as f64;
        log::debug!("S_k with W = {w}, k = {}: max |coefficient| = W^({c_exp:.4} k)", params.k);
    }
    Ok(s)
}

/// `a = ceil(k / (4 log2 W))`, `b = ceil(k^2 / (4 W log2 W))`,
/// `r = k - (a + 1) - b`.
pub fn default_kahn_params(w: u64, k: u64) -> Result<KahnParams> {
    if w < 2 || k < 3 {
        return Err(Error::param(format!("default S_k parameters need W >= 2 and k >= 3 (W = {w}, k = {k})")));
    }
    let lg = (w as f64).log2();
    let a = (k as f64 / (4.0 * lg)).ceil() as u64;
    let b = ((k * k) as f64 / (4.0 * w as f64 * lg)).ceil() as u64;
    if a + 1 + b > k {
        return Err(Error::param(format!("k = {k} leaves no room for the Chebyshev factor (a = {a}, b = {b})")));
    }
    let p = KahnParams { w, k, a, b, r: k - (a + 1) - b };
    p.validate()?;
    Ok(p)
}

/// Two-sided wrapper `2 S_k - 1`.
fn wrap(s: &UniPoly) -> UniPoly {
    s.scale(&int(2)).add_constant(&int(-1))
}

/// Positive one-sided `eps`-approximation of a halfspace of weight `W`
/// through `2 S_k(W' + t') - 1` with `t' = 2(w0 + w.x) - 1` and
/// `W' = 2W + 1`, doubling `k` until exhaustive certification passes.
fn halfspace_positive_eps(h: &Concept, eps: f64) -> Result<Approximant> {
    let (w0, w, weight) = halfspace_parts(h)?;
    let wp = 2 * weight + 1;
    let n = h.dim();
    let k_max = 4 * wp;
    let k0 = ((wp as f64 * (wp as f64).log2() * (2.0 / eps).ln()).sqrt().ceil() as u64).max(3);
    let build = |params: &KahnParams| -> Result<StructuredPolynomial> {
        Ok(StructuredPolynomial::AffineComposed {
            outer: wrap(&kahn_sk(params)?),
            w0: wp as i64 + 2 * w0 - 1,
            w: w.iter().map(|x| 2 * x).collect(),
        })
    };
    if n > EXHAUSTIVE_CAP {
        let params = default_kahn_params(wp, k0.min(k_max))?;
        log::warn!("{h}: dimension {n} too large to certify; returning uncertified k = {}", params.k);
        return Ok(Approximant { poly: build(&params)?, eps, kahn: Some(params), certificate: None });
    }
    let mut last: Option<Approximant> = None;
    let mut k = k0.min(k_max);
    loop {
        if let Ok(params) = default_kahn_params(wp, k) {
            let poly = build(&params)?;
            let cert = certify::verify_onesided(&poly, h, eps, Sign::Positive)?;
            log::debug!("{h}: k = {k} certificate ok = {}", cert.ok);
            let ok = cert.ok;
            let approx = Approximant { poly, eps, kahn: Some(params), certificate: Some(cert) };
            if ok {
                return Ok(approx);
            }
            last = Some(approx);
        }
        if k >= k_max {
            break;
        }
        k = (2 * k).min(k_max);
    }
    match last {
        Some(a) => {
            log::warn!("{h}: doubling schedule exhausted at k = {k_max} without certification");
            Ok(a)
        }
        None => Err(Error::param(format!("no valid S_k parameters for W' = {wp} up to k = {k_max}"))),
    }
}

/// One-sided `eps`-approximation of a halfspace. The negative side is
/// `x -> -q(-x)` for the positive construction `q` on the halfspace
/// `1 - w0 + w.x`, which satisfies `sgn(1 - w0 + w.x) = -h(-x)`.
pub fn halfspace_onesided_eps(h: &Concept, sign: Sign, eps: f64) -> Result<Approximant> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::param(format!("eps must lie in (0, 1/2], got {eps}")));
    }
    match sign {
        Sign::Positive => halfspace_positive_eps(h, eps),
        Sign::Negative => {
            let (w0, w, _) = halfspace_parts(h)?;
            let reflected = Concept::halfspace(1 - w0, w)?;
            let mut q = halfspace_positive_eps(&reflected, eps)?;
            q.poly = negate_onesided(&q.poly);
            if q.certificate.is_some() {
                q.certificate = Some(certify::verify_onesided(&q.poly, h, eps, Sign::Negative)?);
            }
            Ok(q)
        }
    }
}

/// `x -> -p(-x)`.
pub fn negate_onesided(p: &StructuredPolynomial) -> StructuredPolynomial {
    p.negate_reflect()
}

fn compose(parts: Vec<StructuredPolynomial>, sign: i64) -> Result<StructuredPolynomial> {
    if parts.is_empty() {
        return Err(Error::input("composition needs at least one part"));
    }
    let n = parts[0].dim();
    if parts.iter().any(|p| p.dim() != n) {
        return Err(Error::input("composed parts must share a dimension"));
    }
    let m = parts.len() as i64;
    Ok(StructuredPolynomial::Sum { parts, constant: int(sign * (m - 1)) })
}

/// `-1 + sum_i (1 + p_i)`: positive one-sided for the OR when each part is
/// positive one-sided at `eps/m`.
pub fn or_compose(parts: Vec<StructuredPolynomial>) -> Result<StructuredPolynomial> {
    compose(parts, 1)
}

/// `1 - sum_i (1 - p_i)`: negative one-sided for the AND when each part is
/// negative one-sided at `eps/m`.
pub fn and_compose(parts: Vec<StructuredPolynomial>) -> Result<StructuredPolynomial> {
    compose(parts, -1)
}

/// Solution `t >= e` of `t / ln t = rhs`, or `e` when `rhs < e`.
pub fn balance_point(rhs: f64) -> f64 {
    let e = std::f64::consts::E;
    if !(rhs > e) {
        return e;
    }
    let g = |t: f64| t / t.ln() - rhs;
    let (mut lo, mut hi) = (e, e);
    while g(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Number of blocks for [`and_n_tradeoff`]: the largest divisor of `n` not
/// exceeding the solution of `t / ln t = n^2 ln(1/eps) / d^2` (capped at `n`).
pub fn tradeoff_blocks(n: usize, d: usize, eps: f64) -> Result<usize> {
    if n == 0 || d == 0 {
        return Err(Error::param("and_n_tradeoff needs n >= 1 and d >= 1"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(format!("eps must lie in (0, 1), got {eps}")));
    }
    let rhs = (n * n) as f64 * (1.0 / eps).ln() / (d * d) as f64;
    let t_star = balance_point(rhs).min(n as f64);
    (1..=n)
        .rev()
        .find(|&t| n % t == 0 && t as f64 <= t_star)
        .ok_or_else(|| Error::param("no block count divides n"))
}

/// Smallest `S_k` over `W = t` on the doubling schedule with
/// `max_{s < t} |S_k(s)| <= bound`; falls back to the exact interpolant
/// vanishing on `0..t` once `k` reaches `t`.
fn counting_sk(t: u64, bound: &Rational) -> Result<(KahnParams, UniPoly)> {
    let exact = KahnParams { w: t, k: t, a: t - 1, b: 0, r: 0 };
    let ln2e = rational_to_f64(bound).recip().ln().max(1.0);
    let mut k = (((t as f64).sqrt() * ln2e).ceil() as u64).max(3);
    while k < t {
        if let Ok(params) = default_kahn_params(t, k) {
            let s = kahn_sk(&params)?;
            let worst = (0..t).map(|v| s.eval(&int(v as i64)).abs()).max().unwrap_or_else(Rational::zero);
            if &worst <= bound {
                return Ok((params, s));
            }
        }
        k *= 2;
    }
    Ok((exact, kahn_sk(&exact)?))
}

/// Two-sided `eps`-approximation of `AND_n` (true iff every input is `+1`)
/// with degree traded against weight: the inputs are split into `t` blocks,
/// each block computed exactly by `2 prod (1 + x_j)/2 - 1`, and the block
/// outputs combined by `2 S_k(s) - 1` where `s` counts true blocks.
pub fn and_n_tradeoff(n: usize, d: usize, eps: f64) -> Result<Approximant> {
    let t = tradeoff_blocks(n, d, eps)?;
    let size = n / t;
    let half = rational(1, 2);
    let block = |i: usize| -> Result<SparsePolynomial<Rational>> {
        // prod_{j in block} (1 + x_j)/2
        let mut acc = SparsePolynomial::constant(n, Rational::one());
        for j in i * size..(i + 1) * size {
            let f = SparsePolynomial::from_terms(n, [(Monomial::ONE, half.clone()), (Monomial::var(j), half.clone())])?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    };
    if t == 1 {
        let q = block(0)?.scale(&int(2)).add(&SparsePolynomial::constant(n, int(-1)));
        return Ok(Approximant { poly: StructuredPolynomial::Sparse(q), eps, kahn: None, certificate: None });
    }
    let mut count = SparsePolynomial::zero(n);
    for i in 0..t {
        count = count.add(&block(i)?);
    }
    let bound = crate::poly::f64_to_rational(eps)? / int(2);
    let (params, s) = counting_sk(t as u64, &bound)?;
    log::debug!("AND_{n} with d = {d}: {t} blocks of {size}, S_k degree {}", params.degree());
    Ok(Approximant { poly: StructuredPolynomial::Composed { outer: wrap(&s), inner: count }, eps, kahn: Some(params), certificate: None })
}

/// Two-sided `eps`-approximation of the conjunction of `lits` over `n`
/// variables, by embedding [`and_n_tradeoff`] and reflecting negated inputs.
fn clause_twosided(n: usize, lits: &[Literal], d: usize, eps: f64) -> Result<StructuredPolynomial> {
    if lits.is_empty() {
        return Ok(StructuredPolynomial::constant(n, int(1)));
    }
    let inner = and_n_tradeoff(lits.len(), d, eps)?.poly;
    let map: Vec<usize> = lits.iter().map(|l| l.var).collect();
    let mask = lits
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.positive)
        .fold(0u64, |m, (j, _)| m | 1 << j);
    inner.reflect_inputs(mask).embed(n, &map)
}

fn dnf_clauses(f: &Concept, want_cnf: bool) -> Result<Vec<Vec<Literal>>> {
    match (f.kind(), want_cnf) {
        (ConceptKind::Dnf(c), false) | (ConceptKind::Cnf(c), true) => Ok(c.clone()),
        _ => Err(Error::input(format!("{f} is not a {}", if want_cnf { "CNF" } else { "DNF" }))),
    }
}

fn certify_if_small(poly: StructuredPolynomial, f: &dyn BooleanFunction, eps: f64, sign: Option<Sign>) -> Result<Approximant> {
    let certificate = if f.dim() <= EXHAUSTIVE_CAP {
        Some(match sign {
            Some(s) => certify::verify_onesided(&poly, f, eps, s)?,
            None => certify::verify_twosided(&poly, f, eps)?,
        })
    } else {
        None
    };
    Ok(Approximant { poly, eps, kahn: None, certificate })
}

/// Positive one-sided `eps`-approximation of a DNF with `m` terms: each term
/// gets a two-sided `eps/m`-approximant and the results are OR-composed.
pub fn dnf_pos_onesided(f: &Concept, d: usize, eps: f64) -> Result<Approximant> {
    let clauses = dnf_clauses(f, false)?;
    let poly = dnf_poly(f.dim(), &clauses, d, eps)?;
    certify_if_small(poly, f, eps, Some(Sign::Positive))
}

fn dnf_poly(n: usize, clauses: &[Vec<Literal>], d: usize, eps: f64) -> Result<StructuredPolynomial> {
    if clauses.is_empty() {
        return Ok(StructuredPolynomial::constant(n, int(-1)));
    }
    let part_eps = eps / clauses.len() as f64;
    let parts = clauses
        .iter()
        .map(|c| clause_twosided(n, c, d, part_eps))
        .collect::<Result<Vec<_>>>()?;
    or_compose(parts)
}

/// Negative one-sided `eps`-approximation of a CNF: `-F(-x)` is the DNF
/// with the same clauses, so this reflects the DNF construction.
pub fn cnf_neg_onesided(f: &Concept, d: usize, eps: f64) -> Result<Approximant> {
    let clauses = dnf_clauses(f, true)?;
    let poly = negate_onesided(&dnf_poly(f.dim(), &clauses, d, eps)?);
    certify_if_small(poly, f, eps, Some(Sign::Negative))
}

/// Certifies an [`and_n_tradeoff`] result against `AND_n`.
pub fn and_n_certified(n: usize, d: usize, eps: f64) -> Result<Approximant> {
    let a = and_n_tradeoff(n, d, eps)?;
    let mut c = certify_if_small(a.poly, &Concept::and_n(n), eps, None)?;
    c.kahn = a.kahn;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{cube_points, CubePoint};
    use crate::poly::ExpansionCap;

    #[test]
    fn quarter_construction_on_dictator() {
        let h = Concept::halfspace(0, vec![1]).unwrap();
        let p = halfspace_pos_quarter(&h).unwrap();
        let StructuredPolynomial::AffineComposed { outer, .. } = &p else { panic!() };
        assert_eq!(outer.eval(&int(-1)), rational(-3, 4));
        assert_eq!(outer.eval(&int(1)), rational(77, 4));
        assert_eq!(p.degree_bound(), 1);
        assert_eq!(outer.degree(), 4);
    }

    #[test]
    fn quarter_construction_certifies_small_majorities() {
        for n in [1usize, 3, 5] {
            let h = Concept::full_majority(n);
            let p = halfspace_pos_quarter(&h).unwrap();
            assert!(certify::verify_onesided(&p, &h, 0.25, Sign::Positive).unwrap().ok);
            for x in cube_points(n) {
                let v = p.eval_exact(&x).unwrap();
                if h.value(&x).is_positive() {
                    assert!(v >= int(3));
                } else {
                    assert!(v >= int(-1) && v <= rational(-3, 4));
                }
            }
        }
    }

    #[test]
    fn sk_identities() {
        for k in [8u64, 12, 16] {
            let p = default_kahn_params(20, k).unwrap();
            let s = kahn_sk(&p).unwrap();
            assert_eq!(s.eval(&int(20)), Rational::one());
            assert_eq!(s.degree() as u64, k);
            for root in (0..=p.a).chain(20 - p.b..20) {
                assert!(s.eval(&int(root as i64)).is_zero());
            }
            for t in 20..=40 {
                assert!(s.eval(&int(t)) >= Rational::one());
            }
        }
    }

    #[test]
    fn default_params_arithmetic() {
        let p = default_kahn_params(64, 16).unwrap();
        assert_eq!(p.a, 1);
        assert_eq!(p.b, 1);
        assert_eq!(p.r, 13);
        assert!(default_kahn_params(2, 3).is_err());
        assert!(default_kahn_params(20, 2).is_err());
    }

    #[test]
    fn eps_construction_on_dictator() {
        let h = Concept::full_majority(1);
        let a = halfspace_onesided_eps(&h, Sign::Positive, 0.1).unwrap();
        assert!(a.certified());
        let hi = a.poly.eval(&CubePoint::from_signs(&[1]).unwrap()).unwrap();
        let lo = a.poly.eval(&CubePoint::from_signs(&[-1]).unwrap()).unwrap();
        assert!(hi >= 0.9);
        assert!((lo + 1.0).abs() <= 0.1);
    }

    #[test]
    fn negative_eps_construction() {
        let h = Concept::full_majority(3);
        let a = halfspace_onesided_eps(&h, Sign::Negative, 0.1).unwrap();
        assert!(a.certified());
        let tie = Concept::halfspace(0, vec![1, -1]).unwrap();
        let a = halfspace_onesided_eps(&tie, Sign::Negative, 0.2).unwrap();
        assert!(a.certified());
    }

    #[test]
    fn negation_is_an_involution() {
        let h = Concept::full_majority(3);
        let p = halfspace_pos_quarter(&h).unwrap();
        let back = negate_onesided(&negate_onesided(&p));
        assert_eq!(back.tabulate(), p.tabulate());
        let c = StructuredPolynomial::constant(2, int(-1));
        assert_eq!(negate_onesided(&c).tabulate(), vec![int(1); 4]);
    }

    #[test]
    fn single_part_composition_is_identity() {
        let p = halfspace_pos_quarter(&Concept::full_majority(3)).unwrap();
        assert_eq!(or_compose(vec![p.clone()]).unwrap().tabulate(), p.tabulate());
        assert_eq!(and_compose(vec![p.clone()]).unwrap().tabulate(), p.tabulate());
        assert!(or_compose(Vec::new()).is_err());
        let m1 = StructuredPolynomial::constant(3, int(-1));
        assert_eq!(or_compose(vec![m1.clone(), m1]).unwrap().tabulate(), vec![int(-1); 8]);
    }

    #[test]
    fn blocks_follow_balance_equation() {
        assert_eq!(tradeoff_blocks(8, 5, 0.25).unwrap(), 4);
        assert_eq!(tradeoff_blocks(8, 100, 0.25).unwrap(), 2);
        assert_eq!(tradeoff_blocks(8, 1, 0.25).unwrap(), 8);
        let t = balance_point(10.0);
        assert!((t / t.ln() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn and_tradeoff_certifies() {
        for (n, d) in [(8usize, 5usize), (8, 1), (6, 3), (4, 100)] {
            let a = and_n_certified(n, d, 0.25).unwrap();
            assert!(a.certified(), "n = {n}, d = {d}");
        }
    }

    #[test]
    fn and_with_unit_blocks_counts_inputs() {
        let a = and_n_tradeoff(4, 1, 0.25).unwrap();
        let StructuredPolynomial::Composed { inner, .. } = &a.poly else { panic!() };
        for x in cube_points(4) {
            let ones = (0..4).filter(|&j| x.get(j) == 1).count() as i64;
            assert_eq!(inner.eval(&x).unwrap(), int(ones));
        }
    }

    #[test]
    fn dnf_and_cnf_certify() {
        let f = Concept::parse("DNF (+1 -2 +3)(+4 +5 -6)", None).unwrap();
        assert!(dnf_pos_onesided(&f, 2, 0.25).unwrap().certified());
        let g = Concept::parse("CNF (+1 -2 +3)(+4 +5 -6)", None).unwrap();
        assert!(cnf_neg_onesided(&g, 2, 0.25).unwrap().certified());
        let t = Concept::parse("DNF (+1)(-1 +2)", None).unwrap();
        assert!(dnf_pos_onesided(&t, 2, 0.25).unwrap().certified());
    }

    #[test]
    fn composition_weight_is_additive() {
        let cap = ExpansionCap::default();
        let a = halfspace_pos_quarter(&Concept::majority(6, [0, 1, 2]).unwrap()).unwrap();
        let b = halfspace_pos_quarter(&Concept::majority(6, [3, 4, 5]).unwrap()).unwrap();
        let wa = a.weight_and_degree(&cap);
        let wb = b.weight_and_degree(&cap);
        let or = or_compose(vec![a, b]).unwrap().weight_and_degree(&cap);
        assert!(or.weight_exact.unwrap() <= wa.weight_exact.unwrap() + wb.weight_exact.unwrap() + int(1));
        assert_eq!(or.degree, wa.degree.max(wb.degree));
    }
}
