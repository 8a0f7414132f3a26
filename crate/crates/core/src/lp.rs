//! Dense two-phase tableau simplex.
//!
//! Problems are stated as `minimize c.x` subject to sparse rows
//! `a.x (<=|=|>=) b` and per-variable bounds `lo <= x <= hi` (either side may
//! be infinite; the default is `0 <= x`). Pivoting uses Dantzig's rule with a
//! two-pass (Harris) ratio test on a right-hand side carrying a small fixed
//! perturbation, which is removed at the end by dual simplex steps. Bland's
//! rule takes over after a run of degenerate pivots. The outcome is a
//! deterministic function of the input.
//! Tall problems (many more rows than columns) are solved through their dual.
//!
//! Debug dump format, one item per line:
//!
//! ```text
//! vars <n>
//! min <c_0> <c_1> ... <c_{n-1}>
//! bound <j> <lo> <hi>          (only for non-default bounds; inf/-inf allowed)
//! <j>:<a_j> <j>:<a_j> ... <= <b>   (also = and >=)
//! ```

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primal feasibility tolerance on returned solutions.
pub const FEAS_TOL: f64 = 1e-7;
const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const HARRIS_TOL: f64 = 1e-10;
const DEGENERATE_RUN: usize = 64;
/// Right-hand-side perturbation relative to the largest right-hand side.
const PERTURB_REL: f64 = 1e-9;
/// Negative basic values tolerated after removing the perturbation.
const PERTURB_CLEAN_TOL: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(usize, f64)>,
    pub rel: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let v = self.activity(x);
        match self.rel {
            Relation::Le => (v - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - v).max(0.0),
            Relation::Eq => (v - self.rhs).abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    Numerical,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::IterationLimit => "iteration limit",
            LpStatus::Numerical => "numerical failure",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Variable values; empty unless optimal.
    pub values: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
}

impl LinearProgram {
    /// `n` variables, zero objective, bounds `0 <= x`.
    pub fn new(n: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; n],
            constraints: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self, j: usize) -> (f64, f64) {
        (self.lower[j], self.upper[j])
    }

    pub fn set_objective(&mut self, j: usize, c: f64) {
        self.objective[j] = c;
    }

    pub fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        self.lower[j] = lo;
        self.upper[j] = hi;
    }

    pub fn set_free(&mut self, j: usize) {
        self.set_bounds(j, f64::NEG_INFINITY, f64::INFINITY);
    }

    /// Adds a sparse row; repeated indices are summed.
    pub fn add_constraint(&mut self, terms: impl IntoIterator<Item = (usize, f64)>, rel: Relation, rhs: f64) -> Result<()> {
        let n = self.num_vars();
        let mut dense: std::collections::BTreeMap<usize, f64> = Default::default();
        for (j, a) in terms {
            if j >= n {
                return Err(Error::input(format!("constraint references variable {j} of {n}")));
            }
            if !a.is_finite() {
                return Err(Error::input("non-finite constraint coefficient"));
            }
            *dense.entry(j).or_insert(0.0) += a;
        }
        if !rhs.is_finite() {
            return Err(Error::input("non-finite right-hand side"));
        }
        let terms = dense.into_iter().filter(|&(_, a)| a != 0.0).collect();
        self.constraints.push(Constraint { terms, rel, rhs });
        Ok(())
    }

    pub fn add_dense_constraint(&mut self, coeffs: &[f64], rel: Relation, rhs: f64) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::input(format!(
                "constraint has {} coefficients for {} variables",
                coeffs.len(),
                self.num_vars()
            )));
        }
        self.add_constraint(coeffs.iter().copied().enumerate(), rel, rhs)
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest row or bound violation at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.constraints.iter().map(|c| c.violation(x));
        let bounds = (0..self.num_vars()).map(|j| (self.lower[j] - x[j]).max(x[j] - self.upper[j]).max(0.0));
        rows.chain(bounds).fold(0.0, f64::max)
    }

    pub fn dump(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "vars {}", self.num_vars())?;
        let obj: Vec<String> = self.objective.iter().map(|c| format!("{c:?}")).collect();
        writeln!(w, "min {}", obj.join(" "))?;
        for j in 0..self.num_vars() {
            if self.lower[j] != 0.0 || self.upper[j] != f64::INFINITY {
                writeln!(w, "bound {j} {:?} {:?}", self.lower[j], self.upper[j])?;
            }
        }
        for c in &self.constraints {
            let terms: Vec<String> = c.terms.iter().map(|(j, a)| format!("{j}:{a:?}")).collect();
            writeln!(w, "{} {} {:?}", terms.join(" "), c.rel.symbol(), c.rhs)?;
        }
        Ok(())
    }

    /// Parses the [`dump`](Self::dump) format.
    pub fn parse_dump(text: &str) -> Result<Self> {
        let bad = |line: &str| Error::input(format!("bad LP dump line {line:?}"));
        let num = |s: &str, line: &str| -> Result<f64> { s.parse().map_err(|_| bad(line)) };
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().ok_or_else(|| bad(""))?;
        let n: usize = head
            .strip_prefix("vars ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| bad(head))?;
        let mut lp = LinearProgram::new(n);
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "min" => {
                    if toks.len() != n + 1 {
                        return Err(bad(line));
                    }
                    for j in 0..n {
                        lp.objective[j] = num(toks[j + 1], line)?;
                    }
                }
                "bound" => {
                    if toks.len() != 4 {
                        return Err(bad(line));
                    }
                    let j: usize = toks[1].parse().map_err(|_| bad(line))?;
                    if j >= n {
                        return Err(bad(line));
                    }
                    lp.set_bounds(j, num(toks[2], line)?, num(toks[3], line)?);
                }
                _ => {
                    if toks.len() < 2 {
                        return Err(bad(line));
                    }
                    let rel = match toks[toks.len() - 2] {
                        "<=" => Relation::Le,
                        "=" => Relation::Eq,
                        ">=" => Relation::Ge,
                        _ => return Err(bad(line)),
                    };
                    let rhs = num(toks[toks.len() - 1], line)?;
                    let mut terms = Vec::new();
                    for t in &toks[..toks.len() - 2] {
                        let (j, a) = t.split_once(':').ok_or_else(|| bad(line))?;
                        terms.push((j.parse().map_err(|_| bad(line))?, num(a, line)?));
                    }
                    lp.add_constraint(terms, rel, rhs)?;
                }
            }
        }
        Ok(lp)
    }

    pub fn solve(&self) -> Result<LpSolution> {
        solve(self)
    }
}

/// How an original variable maps onto nonnegative standard-form columns.
#[derive(Clone, Copy, Debug)]
enum VarMap {
    /// `x = lo + y`
    Shift { col: usize, lo: f64 },
    /// `x = hi - y`
    Reflect { col: usize, hi: f64 },
    /// `x = y+ - y-`
    Split { pos: usize, neg: usize },
}

/// `minimize cost.y + offset` subject to rows, `y >= 0`.
#[derive(Clone, Debug)]
struct Standard {
    ncols: usize,
    cost: Vec<f64>,
    offset: f64,
    rows: Vec<Constraint>,
}

fn standardize(lp: &LinearProgram) -> Result<(Standard, Vec<VarMap>)> {
    let n = lp.num_vars();
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut extra_rows = Vec::new();
    for j in 0..n {
        let (lo, hi) = (lp.lower[j], lp.upper[j]);
        if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::input(format!("invalid bounds [{lo}, {hi}] on variable {j}")));
        }
        let m = if lo.is_finite() {
            let col = ncols;
            ncols += 1;
            if hi.is_finite() {
                extra_rows.push(Constraint { terms: vec![(col, 1.0)], rel: Relation::Le, rhs: hi - lo });
            }
            VarMap::Shift { col, lo }
        } else if hi.is_finite() {
            ncols += 1;
            VarMap::Reflect { col: ncols - 1, hi }
        } else {
            ncols += 2;
            VarMap::Split { pos: ncols - 2, neg: ncols - 1 }
        };
        maps.push(m);
    }
    let map_row = |terms: &[(usize, f64)], rhs: f64| {
        let mut out = Vec::with_capacity(terms.len());
        let mut rhs = rhs;
        for &(j, a) in terms {
            match maps[j] {
                VarMap::Shift { col, lo } => {
                    out.push((col, a));
                    rhs -= a * lo;
                }
                VarMap::Reflect { col, hi } => {
                    out.push((col, -a));
                    rhs -= a * hi;
                }
                VarMap::Split { pos, neg } => {
                    out.push((pos, a));
                    out.push((neg, -a));
                }
            }
        }
        (out, rhs)
    };
    let mut rows: Vec<Constraint> = lp
        .constraints
        .iter()
        .map(|c| {
            let (terms, rhs) = map_row(&c.terms, c.rhs);
            Constraint { terms, rel: c.rel, rhs }
        })
        .collect();
    rows.extend(extra_rows);
    let mut cost = vec![0.0; ncols];
    let mut offset = 0.0;
    for (j, &c) in lp.objective.iter().enumerate() {
        match maps[j] {
            VarMap::Shift { col, lo } => {
                cost[col] += c;
                offset += c * lo;
            }
            VarMap::Reflect { col, hi } => {
                cost[col] -= c;
                offset += c * hi;
            }
            VarMap::Split { pos, neg } => {
                cost[pos] += c;
                cost[neg] -= c;
            }
        }
    }
    Ok((Standard { ncols, cost, offset, rows }, maps))
}

fn recover(maps: &[VarMap], y: &[f64]) -> Vec<f64> {
    maps.iter()
        .map(|m| match *m {
            VarMap::Shift { col, lo } => lo + y[col],
            VarMap::Reflect { col, hi } => hi - y[col],
            VarMap::Split { pos, neg } => y[pos] - y[neg],
        })
        .collect()
}

struct StdOutcome {
    status: LpStatus,
    y: Vec<f64>,
    /// Shadow price of each row in its given orientation, for rows that
    /// received a slack or surplus column; `None` for equality rows.
    duals: Vec<Option<f64>>,
    iterations: usize,
}

/// Dense tableau. Column `ncols` holds the right-hand side and column
/// `ncols + 1` the transformed perturbation added to it during pivoting.
struct Tableau {
    rows: usize,
    ncols: usize,
    width: usize,
    a: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    iterations: usize,
    limit: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

/// Deterministic perturbation in `[1, 2) * scale` for row `i`.
fn perturbation(i: usize, scale: f64) -> f64 {
    let mut z = (i as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    scale * (1.0 + (z >> 11) as f64 / (1u64 << 53) as f64)
}

impl Tableau {
    fn at(&self, i: usize, k: usize) -> f64 {
        self.a[i * self.width + k]
    }

    /// Unperturbed basic value of row `i`.
    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.ncols)
    }

    /// Basic value of row `i` including the perturbation.
    fn value(&self, i: usize) -> f64 {
        self.at(i, self.ncols) + self.at(i, self.ncols + 1)
    }

    fn perturb(&mut self, scale: f64) {
        for i in 0..self.rows {
            let k = i * self.width + self.ncols + 1;
            self.a[k] = perturbation(i, scale);
        }
    }

    fn clear_perturbation(&mut self) {
        for i in 0..self.rows {
            let k = i * self.width + self.ncols + 1;
            self.a[k] = 0.0;
        }
        self.obj[self.ncols + 1] = 0.0;
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.width;
        let p = self.a[r * w + q];
        {
            let row = &mut self.a[r * w..(r + 1) * w];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[q] = 1.0;
        }
        let prow: Vec<f64> = self.a[r * w..(r + 1) * w].to_vec();
        let nz: Vec<usize> = (0..w).filter(|&k| prow[k] != 0.0).collect();
        let dense = nz.len() * 3 > w;
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.a[i * w + q];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.a[i * w..(i + 1) * w];
            if dense {
                for (v, &pv) in row.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
            } else {
                for &k in &nz {
                    row[k] -= f * prow[k];
                }
            }
            row[q] = 0.0;
        }
        let f = self.obj[q];
        if f != 0.0 {
            for &k in &nz {
                self.obj[k] -= f * prow[k];
            }
            self.obj[q] = 0.0;
        }
        self.basis[r] = q;
        self.iterations += 1;
    }

    fn check_limit(&self) -> Result<()> {
        if self.iterations >= self.limit {
            return Err(Error::Solver {
                status: LpStatus::IterationLimit,
                detail: format!("{} iterations on a {}x{} tableau", self.iterations, self.rows, self.ncols),
            });
        }
        Ok(())
    }

    /// Primal simplex over the columns allowed by `eligible`.
    fn run(&mut self, eligible: &dyn Fn(usize) -> bool) -> Result<Step> {
        let w = self.width;
        let mut degenerate = 0usize;
        let objective = |t: &Tableau| t.obj[t.ncols] + t.obj[t.ncols + 1];
        let mut last_obj = objective(self);
        loop {
            self.check_limit()?;
            let bland = degenerate >= DEGENERATE_RUN;
            let mut enter = None;
            let mut best = -COST_TOL;
            for j in 0..self.ncols {
                if !eligible(j) {
                    continue;
                }
                let d = self.obj[j];
                if bland {
                    if d < -COST_TOL {
                        enter = Some(j);
                        break;
                    }
                } else if d < best {
                    best = d;
                    enter = Some(j);
                }
            }
            let Some(q) = enter else {
                return Ok(Step::Optimal);
            };
            let r = if bland { self.ratio_bland(q) } else { self.ratio_harris(q) };
            let Some(r) = r else {
                return Ok(Step::Unbounded);
            };
            self.pivot(r, q);
            // Harris steps can leave tiny negative values.
            if self.value(r) < 0.0 {
                self.a[r * w + self.ncols + 1] = -self.a[r * w + self.ncols];
            }
            let obj = objective(self);
            if !obj.is_finite() {
                return Err(Error::Solver {
                    status: LpStatus::Numerical,
                    detail: format!("objective became {obj} after {} iterations", self.iterations),
                });
            }
            if (obj - last_obj).abs() <= 1e-12 * (1.0 + last_obj.abs()) {
                degenerate += 1;
            } else {
                degenerate = 0;
                last_obj = obj;
            }
        }
    }

    /// Dual simplex from a dual-feasible basis until every unperturbed
    /// basic value is at least `-tol`. Returns false if the rows prove
    /// primal infeasibility.
    fn dual_cleanup(&mut self, eligible: &dyn Fn(usize) -> bool, tol: f64) -> Result<bool> {
        loop {
            self.check_limit()?;
            let mut leave = None;
            let mut worst = -tol;
            for i in 0..self.rows {
                let b = self.rhs(i);
                if b < worst {
                    worst = b;
                    leave = Some(i);
                }
            }
            let Some(r) = leave else {
                return Ok(true);
            };
            let mut enter: Option<(usize, f64)> = None;
            for j in 0..self.ncols {
                let a = self.at(r, j);
                if !eligible(j) || a >= -PIVOT_TOL {
                    continue;
                }
                let ratio = self.obj[j].max(0.0) / -a;
                if enter.map_or(true, |(_, best)| ratio < best) {
                    enter = Some((j, ratio));
                }
            }
            let Some((q, _)) = enter else {
                return Ok(false);
            };
            self.pivot(r, q);
        }
    }

    fn ratio_harris(&self, q: usize) -> Option<usize> {
        let w = self.width;
        let mut theta = f64::INFINITY;
        for i in 0..self.rows {
            let a = self.a[i * w + q];
            if a > PIVOT_TOL {
                theta = theta.min((self.value(i).max(0.0) + HARRIS_TOL) / a);
            }
        }
        if theta == f64::INFINITY {
            return None;
        }
        let mut pick: Option<(usize, f64)> = None;
        for i in 0..self.rows {
            let a = self.a[i * w + q];
            if a > PIVOT_TOL && self.value(i).max(0.0) / a <= theta {
                let better = match pick {
                    None => true,
                    Some((k, best)) => a > best || (a == best && self.basis[i] < self.basis[k]),
                };
                if better {
                    pick = Some((i, a));
                }
            }
        }
        pick.map(|(i, _)| i)
    }

    fn ratio_bland(&self, q: usize) -> Option<usize> {
        let w = self.width;
        let mut pick: Option<(usize, f64)> = None;
        for i in 0..self.rows {
            let a = self.a[i * w + q];
            if a > PIVOT_TOL {
                let ratio = self.value(i).max(0.0) / a;
                let better = match pick {
                    None => true,
                    Some((k, best)) => ratio < best || (ratio == best && self.basis[i] < self.basis[k]),
                };
                if better {
                    pick = Some((i, ratio));
                }
            }
        }
        pick.map(|(i, _)| i)
    }

    /// Objective row holding the reduced costs of `cost` (zero beyond its
    /// length) for the current basis.
    fn price(&mut self, cost: &[f64]) {
        let w = self.width;
        self.obj = vec![0.0; w];
        self.obj[..cost.len()].copy_from_slice(cost);
        for i in 0..self.rows {
            let c = cost.get(self.basis[i]).copied().unwrap_or(0.0);
            if c != 0.0 {
                for k in 0..w {
                    self.obj[k] -= c * self.a[i * w + k];
                }
            }
        }
        for i in 0..self.rows {
            self.obj[self.basis[i]] = 0.0;
        }
    }

    /// Primal simplex on the perturbed right-hand side, then removal of the
    /// perturbation. `Ok(None)` means unbounded.
    fn optimize(&mut self, eligible: &dyn Fn(usize) -> bool, scale: f64) -> Result<Option<bool>> {
        self.perturb(scale);
        let step = self.run(eligible)?;
        self.clear_perturbation();
        match step {
            Step::Unbounded => Ok(None),
            Step::Optimal => {
                let feasible = self.dual_cleanup(eligible, PERTURB_CLEAN_TOL)?;
                if feasible {
                    // The cleanup keeps dual feasibility; finish any remaining
                    // primal steps on the exact data.
                    if let Step::Unbounded = self.run(eligible)? {
                        return Ok(None);
                    }
                }
                Ok(Some(feasible))
            }
        }
    }
}

const TABLEAU_CAP: u128 = 400_000_000;

fn solve_standard(std: &Standard) -> Result<StdOutcome> {
    let m = std.rows.len();
    let n = std.ncols;
    // Normalize to nonnegative right-hand sides.
    let rows: Vec<(Vec<(usize, f64)>, Relation, f64, bool)> = std
        .rows
        .iter()
        .map(|c| {
            if c.rhs < 0.0 {
                (c.terms.iter().map(|&(j, a)| (j, -a)).collect(), c.rel.flipped(), -c.rhs, true)
            } else {
                (c.terms.clone(), c.rel, c.rhs, false)
            }
        })
        .collect();
    // Crash basis: a structural column with a single positive entry can
    // start basic in a >= or = row, sparing that row an artificial.
    let mut col_rows = vec![0usize; n];
    for (terms, ..) in &rows {
        for &(j, v) in terms {
            if v != 0.0 {
                col_rows[j] += 1;
            }
        }
    }
    let crash: Vec<Option<usize>> = rows
        .iter()
        .map(|(terms, rel, ..)| {
            if *rel == Relation::Le {
                return None;
            }
            let mut pick: Option<(usize, f64)> = None;
            for &(j, v) in terms {
                if v > 0.0 && col_rows[j] == 1 && pick.map_or(true, |(_, best)| std.cost[j] / v < best) {
                    pick = Some((j, std.cost[j] / v));
                }
            }
            pick.map(|(j, _)| j)
        })
        .collect();
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = crash.iter().zip(&rows).filter(|(c, r)| r.1 != Relation::Le && c.is_none()).count();
    let ncols = n + n_slack + n_art;
    let width = ncols + 2;
    let cells = (m as u128) * (width as u128);
    if cells > TABLEAU_CAP {
        return Err(Error::Resource { what: "simplex tableau cells", requested: cells, cap: TABLEAU_CAP });
    }
    let mut a = vec![0.0; m * width];
    let mut basis = vec![0; m];
    let mut slack_of = vec![None; m];
    let mut next_slack = n;
    let mut next_art = n + n_slack;
    for (i, (terms, rel, rhs, _)) in rows.iter().enumerate() {
        let row = &mut a[i * width..(i + 1) * width];
        for &(j, v) in terms.iter() {
            row[j] += v;
        }
        row[ncols] = *rhs;
        match rel {
            Relation::Le => {
                row[next_slack] = 1.0;
                slack_of[i] = Some((next_slack, 1.0));
                basis[i] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -1.0;
                slack_of[i] = Some((next_slack, -1.0));
                next_slack += 1;
            }
            Relation::Eq => {}
        }
        if *rel != Relation::Le {
            match crash[i] {
                Some(j) => {
                    let p = row[j];
                    for v in row.iter_mut() {
                        *v /= p;
                    }
                    row[j] = 1.0;
                    basis[i] = j;
                }
                None => {
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
        }
    }
    let art_start = n + n_slack;
    let limit = 50_000 + 50 * (m + ncols);
    let mut t = Tableau { rows: m, ncols, width, a, obj: vec![0.0; width], basis, iterations: 0, limit };
    let scale = PERTURB_REL * (1.0 + rows.iter().map(|r| r.2).fold(0.0, f64::max));

    if n_art > 0 {
        // Phase 1: minimize the sum of artificials.
        let mut cost = vec![0.0; ncols];
        cost[art_start..].iter_mut().for_each(|c| *c = 1.0);
        t.price(&cost);
        let feasible = t.optimize(&|_| true, scale)?;
        let infeas = -t.obj[ncols];
        let tol = FEAS_TOL * (1.0 + rows.iter().map(|r| r.2).fold(0.0, f64::max));
        if feasible != Some(true) || infeas > tol {
            return Ok(StdOutcome { status: LpStatus::Infeasible, y: Vec::new(), duals: Vec::new(), iterations: t.iterations });
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut keep = vec![true; m];
        for i in 0..m {
            if t.basis[i] < art_start {
                continue;
            }
            let q = (0..art_start)
                .filter(|&j| t.at(i, j).abs() > 1e-7)
                .max_by(|&x, &y| t.at(i, x).abs().partial_cmp(&t.at(i, y).abs()).unwrap().then(y.cmp(&x)));
            match q {
                Some(q) => t.pivot(i, q),
                None => keep[i] = false,
            }
        }
        if keep.iter().any(|&k| !k) {
            let mut a = Vec::with_capacity(t.a.len());
            let mut basis = Vec::new();
            for i in 0..m {
                if keep[i] {
                    a.extend_from_slice(&t.a[i * width..(i + 1) * width]);
                    basis.push(t.basis[i]);
                }
            }
            t.a = a;
            t.basis = basis;
            t.rows = t.basis.len();
        }
        // Pivoting out artificials can leave tiny negative values.
        if !t.dual_cleanup(&|j| j < art_start, FEAS_TOL)? {
            return Ok(StdOutcome { status: LpStatus::Infeasible, y: Vec::new(), duals: Vec::new(), iterations: t.iterations });
        }
    }

    // Phase 2.
    t.price(&std.cost);
    match t.optimize(&|j| j < art_start, scale)? {
        None => {
            return Ok(StdOutcome { status: LpStatus::Unbounded, y: Vec::new(), duals: Vec::new(), iterations: t.iterations })
        }
        Some(false) => {
            return Err(Error::Solver {
                status: LpStatus::Numerical,
                detail: "lost primal feasibility while removing the perturbation".into(),
            })
        }
        Some(true) => {}
    }
    let mut y = vec![0.0; n];
    for i in 0..t.rows {
        if t.basis[i] < n {
            y[t.basis[i]] = t.rhs(i).max(0.0);
        }
    }
    let duals = (0..m)
        .map(|i| {
            slack_of[i].map(|(s, sigma): (usize, f64)| {
                let pi = -t.obj[s] / sigma;
                if rows[i].3 {
                    -pi
                } else {
                    pi
                }
            })
        })
        .collect();
    Ok(StdOutcome { status: LpStatus::Optimal, y, duals, iterations: t.iterations })
}

/// Solves `min c.y, A y (rel) b, y >= 0` through the dual
/// `min -b.u, A'u <= c` with sign-restricted or free `u`.
fn solve_via_dual(std: &Standard) -> Result<Option<StdOutcome>> {
    let mut cols: Vec<(usize, f64)> = Vec::new(); // (row, sign) per dual column
    for (i, r) in std.rows.iter().enumerate() {
        match r.rel {
            Relation::Ge => cols.push((i, 1.0)),
            Relation::Le => cols.push((i, -1.0)),
            Relation::Eq => {
                cols.push((i, 1.0));
                cols.push((i, -1.0));
            }
        }
    }
    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); std.ncols];
    for (k, &(i, s)) in cols.iter().enumerate() {
        for &(j, a) in &std.rows[i].terms {
            by_col[j].push((k, s * a));
        }
    }
    let dual = Standard {
        ncols: cols.len(),
        cost: cols.iter().map(|&(i, s)| -s * std.rows[i].rhs).collect(),
        offset: 0.0,
        rows: by_col
            .into_iter()
            .zip(&std.cost)
            .map(|(terms, &c)| Constraint { terms, rel: Relation::Le, rhs: c })
            .collect(),
    };
    let out = solve_standard(&dual)?;
    match out.status {
        LpStatus::Optimal => {
            let y: Vec<f64> = out.duals.iter().map(|d| (-d.unwrap_or(0.0)).max(0.0)).collect();
            Ok(Some(StdOutcome { status: LpStatus::Optimal, y, duals: Vec::new(), iterations: out.iterations }))
        }
        LpStatus::Unbounded => {
            Ok(Some(StdOutcome { status: LpStatus::Infeasible, y: Vec::new(), duals: Vec::new(), iterations: out.iterations }))
        }
        // A dual infeasibility leaves the primal status ambiguous.
        _ => Ok(None),
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    if lp.num_vars() == 0 {
        return Err(Error::input("linear program has no variables"));
    }
    let (std, maps) = standardize(lp)?;
    let tall = std.rows.len() > 2 * std.ncols;
    let mut out = None;
    if tall {
        if let Some(o) = solve_via_dual(&std)? {
            if o.status != LpStatus::Optimal || lp.max_violation(&recover(&maps, &o.y)) <= FEAS_TOL {
                out = Some(o);
            } else {
                log::debug!("dual route produced an infeasible primal; falling back");
            }
        }
    }
    let out = match out {
        Some(o) => o,
        None => solve_standard(&std)?,
    };
    if out.status != LpStatus::Optimal {
        return Ok(LpSolution { status: out.status, values: Vec::new(), objective_value: f64::NAN, iterations: out.iterations });
    }
    let values = recover(&maps, &out.y);
    let viol = lp.max_violation(&values);
    if viol > FEAS_TOL {
        return Err(Error::Solver {
            status: LpStatus::Numerical,
            detail: format!("solution violates constraints by {viol:e} after {} iterations", out.iterations),
        });
    }
    let objective_value = lp.objective_at(&values);
    debug_assert!((objective_value - (std.offset + std.cost.iter().zip(&out.y).map(|(c, v)| c * v).sum::<f64>())).abs() < 1e-6 * (1.0 + objective_value.abs()));
    Ok(LpSolution { status: LpStatus::Optimal, values, objective_value, iterations: out.iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_lower_bound() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(0, 1.0);
        lp.set_free(0);
        lp.add_constraint([(0, 1.0)], Relation::Ge, 3.0).unwrap();
        let s = lp.solve().unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.values[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = LinearProgram::new(1);
        lp.set_free(0);
        lp.add_constraint([(0, 1.0)], Relation::Le, -1.0).unwrap();
        lp.add_constraint([(0, 1.0)], Relation::Ge, 1.0).unwrap();
        assert_eq!(lp.solve().unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, -1.0);
        lp.add_constraint([(0, 1.0), (1, -1.0)], Relation::Le, 1.0).unwrap();
        assert_eq!(lp.solve().unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn weight_zero_hinge() {
        // minimize xi s.t. xi >= 1 - c, xi >= 0, |c| <= 0 via c = c+ - c-.
        let mut lp = LinearProgram::new(3); // xi, c+, c-
        lp.set_objective(0, 1.0);
        lp.add_constraint([(0, 1.0), (1, 1.0), (2, -1.0)], Relation::Ge, 1.0).unwrap();
        lp.add_constraint([(1, 1.0), (2, 1.0)], Relation::Le, 0.0).unwrap();
        let s = lp.solve().unwrap();
        assert!((s.objective_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, -3.0);
        lp.set_objective(1, -5.0);
        lp.add_constraint([(0, 1.0)], Relation::Le, 4.0).unwrap();
        lp.add_constraint([(1, 2.0)], Relation::Le, 12.0).unwrap();
        lp.add_constraint([(0, 3.0), (1, 2.0)], Relation::Le, 18.0).unwrap();
        let s = lp.solve().unwrap();
        assert!((s.objective_value + 36.0).abs() < 1e-9);
        assert!((s.values[0] - 2.0).abs() < 1e-9 && (s.values[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn bounds_and_equalities() {
        let mut lp = LinearProgram::new(3);
        lp.set_objective(0, 1.0);
        lp.set_objective(1, 2.0);
        lp.set_objective(2, -1.0);
        lp.set_bounds(0, -2.0, 5.0);
        lp.set_bounds(1, f64::NEG_INFINITY, 3.0);
        lp.set_free(2);
        lp.add_constraint([(0, 1.0), (1, 1.0), (2, 1.0)], Relation::Eq, 4.0).unwrap();
        lp.add_constraint([(2, 1.0)], Relation::Le, 10.0).unwrap();
        lp.add_constraint([(1, 1.0)], Relation::Ge, -1.0).unwrap();
        let s = lp.solve().unwrap();
        // Eliminating x2 leaves 2*x0 + 3*x1 - 4, minimized at x0 = -2, x1 = -1.
        assert!((s.objective_value - (-2.0 - 2.0 - 7.0)).abs() < 1e-9, "{s:?}");
    }

    #[test]
    fn tall_problem_uses_dual_route() {
        // min t s.t. t >= |x - k/10| for k in 0..=40 -> t = 2 at x = 2.
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, 1.0);
        lp.set_free(1);
        for k in 0..=40 {
            let v = k as f64 / 10.0;
            lp.add_constraint([(0, 1.0), (1, -1.0)], Relation::Ge, -v).unwrap();
            lp.add_constraint([(0, 1.0), (1, 1.0)], Relation::Ge, v).unwrap();
        }
        let s = lp.solve().unwrap();
        assert!((s.objective_value - 2.0).abs() < 1e-9);
        assert!((s.values[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn dump_round_trips() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, 1.5);
        lp.set_bounds(1, -1.0, f64::INFINITY);
        lp.add_constraint([(0, 1.0), (1, -2.0)], Relation::Ge, 0.25).unwrap();
        let mut buf = Vec::new();
        lp.dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(LinearProgram::parse_dump(&text).unwrap(), lp);
    }
}
