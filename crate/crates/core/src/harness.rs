//! Synthetic example generators, brute-force optimal reliable classifiers
//! and experiment runs persisted under content-addressed directories.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)`; each run stage
//! reads its own ChaCha stream (see [`Stage`]).

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cube::{
    empirical_metrics, BooleanFunction, Concept, CubePoint, ErrorMetrics, Label, LabeledSample, Literal, Partial,
    PartialHypothesis, Sign,
};
use crate::error::{Error, Result};
use crate::learn::{
    agnostic_l1_fit, calibrate_threshold, learn_disjunction_positive, learn_fully_reliable, learn_reliable,
    plan_samples, FitReport, FullyReliable, LearnParams, ReliableHypothesis, SamplePlan, ThresholdHypothesis,
};

/// Environment variable naming the run-directory root.
pub const RUNS_ENV: &str = "ONESIDED_RUNS";
/// Identifier of the example generator recorded in manifests.
pub const GENERATOR_ID: &str = "uniform-cube/chacha8/v1";
/// Largest `n` for the majority bank.
pub const MAJORITY_BANK_MAX_DIM: usize = 14;
/// Largest `n` for the monotone-disjunction bank.
pub const DISJUNCTION_BANK_MAX_DIM: usize = 20;
/// Largest number of `(c+, c-)` pairs scanned in fully mode.
pub const PAIR_CAP: u128 = 1 << 26;

/// Run stages, each reading its own ChaCha stream of the run seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Train = 1,
    Calibration = 2,
    Holdout = 3,
}

/// One row of an explicit joint distribution over `(x, y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub x: Vec<i8>,
    pub y: Label,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    None,
    /// Flips `-1` labels of the planted concept to `+1` with probability `eta`.
    OneSidedPositive { eta: f64 },
    /// Flips `+1` labels of the planted concept to `-1` with probability `eta`.
    OneSidedNegative { eta: f64 },
    Symmetric { eta: f64 },
    /// Draws `(x, y)` from the listed rows in proportion to their weights;
    /// the planted concept is ignored.
    AdversarialTable { table: Vec<TableEntry> },
}

impl NoiseModel {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            NoiseModel::None => Ok(()),
            NoiseModel::OneSidedPositive { eta } | NoiseModel::OneSidedNegative { eta } | NoiseModel::Symmetric { eta } => {
                if (0.0..1.0).contains(eta) {
                    Ok(())
                } else {
                    Err(Error::param(format!("noise rate must lie in [0, 1), got {eta}")))
                }
            }
            NoiseModel::AdversarialTable { table } => {
                if table.is_empty() {
                    return Err(Error::input("adversarial table is empty"));
                }
                for e in table {
                    if e.x.len() != n {
                        return Err(Error::input(format!("table row has {} coordinates, expected {n}", e.x.len())));
                    }
                    CubePoint::from_signs(&e.x)?;
                    if !(e.weight >= 0.0 && e.weight.is_finite()) {
                        return Err(Error::input("table weights must be finite and nonnegative"));
                    }
                }
                if table.iter().map(|e| e.weight).sum::<f64>() <= 0.0 {
                    return Err(Error::input("table weights sum to zero"));
                }
                Ok(())
            }
        }
    }
}

impl std::fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NoiseModel::None => write!(f, "none"),
            NoiseModel::OneSidedPositive { eta } => write!(f, "one_sided_positive({eta})"),
            NoiseModel::OneSidedNegative { eta } => write!(f, "one_sided_negative({eta})"),
            NoiseModel::Symmetric { eta } => write!(f, "symmetric({eta})"),
            NoiseModel::AdversarialTable { table } => write!(f, "adversarial_table({} rows)", table.len()),
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn uniform_point(rng: &mut ChaCha8Rng, n: usize) -> CubePoint {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    CubePoint::from_index(n, rng.gen::<u64>() & mask)
}

/// `m` examples with `x` uniform on the cube, labeled by `c` and then
/// corrupted by `noise`; reads stream 0 of `seed`.
pub fn generate(c: &Concept, noise: &NoiseModel, m: usize, seed: u64) -> Result<LabeledSample> {
    generate_stream(c, noise, m, seed, 0)
}

/// [`generate`] on the given ChaCha stream.
pub fn generate_stream(c: &Concept, noise: &NoiseModel, m: usize, seed: u64, stream: u64) -> Result<LabeledSample> {
    let n = c.dim();
    noise.validate(n)?;
    if m == 0 {
        return Err(Error::input("sample size must be at least 1"));
    }
    let mut rng = rng_for(seed, stream);
    let mut points = Vec::with_capacity(m);
    let mut labels = Vec::with_capacity(m);
    if let NoiseModel::AdversarialTable { table } = noise {
        let rows: Vec<(CubePoint, Label)> =
            table.iter().map(|e| (CubePoint::from_signs(&e.x).expect("validated"), e.y)).collect();
        let total: f64 = table.iter().map(|e| e.weight).sum();
        for _ in 0..m {
            let mut u = rng.gen::<f64>() * total;
            let mut pick = rows.len() - 1;
            for (i, e) in table.iter().enumerate() {
                if u < e.weight {
                    pick = i;
                    break;
                }
                u -= e.weight;
            }
            points.push(rows[pick].0);
            labels.push(rows[pick].1);
        }
        return LabeledSample::new(n, points, labels);
    }
    for _ in 0..m {
        let x = uniform_point(&mut rng, n);
        let y = c.value(&x);
        let u: f64 = rng.gen();
        let y = match (noise, y) {
            (NoiseModel::OneSidedPositive { eta }, Label::Negative) if u < *eta => Label::Positive,
            (NoiseModel::OneSidedNegative { eta }, Label::Positive) if u < *eta => Label::Negative,
            (NoiseModel::Symmetric { eta }, y) if u < *eta => -y,
            _ => y,
        };
        points.push(x);
        labels.push(y);
    }
    LabeledSample::new(n, points, labels)
}

/// Concept enumeration for [`brute_opt`]. The constants `-1` and `+1` are
/// always added.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bank {
    /// Majorities over every subset of the variables.
    Majority,
    /// Disjunctions of every subset of the positive literals.
    MonotoneDisjunction,
    Explicit { concepts: Vec<Concept> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptMode {
    Positive,
    Negative,
    Fully,
}

impl std::str::FromStr for OptMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" => Ok(OptMode::Positive),
            "negative" => Ok(OptMode::Negative),
            "fully" => Ok(OptMode::Fully),
            _ => Err(Error::input(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub mode: OptMode,
    /// `opt+` (false-negative rate), `opt-` (false-positive rate) or `opt?`
    /// (unknown rate).
    pub value: f64,
    /// For fully mode, `[c+, c-]`.
    pub argmin: Vec<Concept>,
    pub bank_size: usize,
}

#[derive(Clone, Copy)]
enum Member {
    False,
    True,
    Mask(u64),
    Listed(usize),
}

struct BankView<'a> {
    n: usize,
    kind: &'a Bank,
    size: usize,
}

impl<'a> BankView<'a> {
    fn new(n: usize, kind: &'a Bank) -> Result<Self> {
        let size = match kind {
            Bank::Majority | Bank::MonotoneDisjunction => {
                let cap = if matches!(kind, Bank::Majority) { MAJORITY_BANK_MAX_DIM } else { DISJUNCTION_BANK_MAX_DIM };
                if n > cap {
                    return Err(Error::Resource { what: "bank dimension", requested: n as u128, cap: cap as u128 });
                }
                (1usize << n) + 2
            }
            Bank::Explicit { concepts } => {
                if let Some(c) = concepts.iter().find(|c| c.dim() != n) {
                    return Err(Error::input(format!("bank concept {c} does not have dimension {n}")));
                }
                concepts.len() + 2
            }
        };
        Ok(BankView { n, kind, size })
    }

    fn member(&self, i: usize) -> Member {
        match i {
            0 => Member::False,
            1 => Member::True,
            _ => match self.kind {
                Bank::Explicit { .. } => Member::Listed(i - 2),
                _ => Member::Mask((i - 2) as u64),
            },
        }
    }

    fn value(&self, m: Member, x: &CubePoint) -> bool {
        match m {
            Member::False => false,
            Member::True => true,
            Member::Mask(s) => {
                let neg = x.neg_mask();
                match self.kind {
                    Bank::Majority => (s & !neg).count_ones() > (s & neg).count_ones(),
                    _ => s & !neg != 0,
                }
            }
            Member::Listed(j) => match self.kind {
                Bank::Explicit { concepts } => concepts[j].value(x).is_positive(),
                _ => unreachable!(),
            },
        }
    }

    fn concept(&self, m: Member) -> Concept {
        let vars = |s: u64| (0..self.n).filter(move |j| s >> j & 1 == 1);
        match m {
            Member::False => Concept::constant_false(self.n),
            Member::True => Concept::constant_true(self.n),
            Member::Mask(s) => match self.kind {
                Bank::Majority => Concept::majority(self.n, vars(s)).expect("valid majority"),
                _ => Concept::disjunction(self.n, vars(s).map(Literal::pos).collect()).expect("valid disjunction"),
            },
            Member::Listed(j) => match self.kind {
                Bank::Explicit { concepts } => concepts[j].clone(),
                _ => unreachable!(),
            },
        }
    }
}

/// Per-member counts: `(false positives, false negatives, positive mask)`.
fn member_counts(view: &BankView, counts: &[crate::cube::PointCounts], i: usize) -> (usize, usize, Vec<u64>) {
    let m = view.member(i);
    let mut bits = vec![0u64; counts.len().div_ceil(64)];
    let (mut fp, mut fn_) = (0, 0);
    for (k, c) in counts.iter().enumerate() {
        if view.value(m, &c.point) {
            fp += c.negatives;
            bits[k / 64] |= 1 << (k % 64);
        } else {
            fn_ += c.positives;
        }
    }
    (fp, fn_, bits)
}

fn smallest_encoding(cands: impl Iterator<Item = Concept>) -> Concept {
    cands.min_by_key(|c| c.to_string()).expect("nonempty candidate set")
}

/// Best reliable classifier in `bank` on the empirical distribution of `s`:
/// the least false-negative rate among zero-false-positive members
/// (positive), the mirror (negative), or the least unknown rate of a pair
/// `(c+, c-)` with `c+` positive-feasible and `c-` negative-feasible
/// (fully). Ties go to the lexicographically smallest encoding.
pub fn brute_opt(s: &LabeledSample, bank: &Bank, mode: OptMode) -> Result<OptResult> {
    if s.is_empty() {
        return Err(Error::input("brute_opt needs a non-empty sample"));
    }
    let view = BankView::new(s.dim(), bank)?;
    let counts = s.point_counts();
    let total = s.len() as f64;
    let per: Vec<(usize, usize, Vec<u64>)> = (0..view.size)
        .into_par_iter()
        .map(|i| {
            let (fp, fn_, bits) = member_counts(&view, &counts, i);
            let keep = mode == OptMode::Fully && (fp == 0 || fn_ == 0);
            (fp, fn_, if keep { bits } else { Vec::new() })
        })
        .collect();
    let single = |feasible: &dyn Fn(&(usize, usize, Vec<u64>)) -> bool, cost: &dyn Fn(&(usize, usize, Vec<u64>)) -> usize| {
        let best = per.iter().filter(|r| feasible(r)).map(cost).min().expect("constants are always feasible");
        let winners = (0..view.size).filter(|&i| feasible(&per[i]) && cost(&per[i]) == best);
        let c = smallest_encoding(winners.map(|i| view.concept(view.member(i))));
        (best, vec![c])
    };
    let (best, argmin) = match mode {
        OptMode::Positive => single(&|r| r.0 == 0, &|r| r.1),
        OptMode::Negative => single(&|r| r.1 == 0, &|r| r.0),
        OptMode::Fully => {
            let pos: Vec<usize> = (0..view.size).filter(|&i| per[i].0 == 0).collect();
            let neg: Vec<usize> = (0..view.size).filter(|&i| per[i].1 == 0).collect();
            let pairs = pos.len() as u128 * neg.len() as u128;
            if pairs > PAIR_CAP {
                return Err(Error::Resource { what: "bank pairs", requested: pairs, cap: PAIR_CAP });
            }
            let weight: Vec<usize> = counts.iter().map(|c| c.positives + c.negatives).collect();
            let unknown = |a: usize, b: usize| -> usize {
                let mut u = 0;
                for (w, (x, y)) in per[a].2.iter().zip(&per[b].2).enumerate() {
                    let mut d = x ^ y;
                    while d != 0 {
                        u += weight[w * 64 + d.trailing_zeros() as usize];
                        d &= d - 1;
                    }
                }
                u
            };
            let scored: Vec<(usize, usize, usize)> = pos
                .par_iter()
                .flat_map_iter(|&a| neg.iter().map(move |&b| (a, b)))
                .map(|(a, b)| (unknown(a, b), a, b))
                .collect();
            let best = scored.iter().map(|r| r.0).min().expect("constant pair is feasible");
            let (_, a, b) = scored
                .iter()
                .filter(|r| r.0 == best)
                .min_by_key(|r| (view.concept(view.member(r.1)).to_string(), view.concept(view.member(r.2)).to_string()))
                .copied()
                .expect("nonempty");
            (best, vec![view.concept(view.member(a)), view.concept(view.member(b))])
        }
    };
    Ok(OptResult { mode, value: best as f64 / total, argmin, bank_size: view.size })
}

/// Learner configuration of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LearnerSpec {
    Reliable {
        sign: Sign,
        d: usize,
        #[serde(rename = "W")]
        w: f64,
        eps: f64,
    },
    /// Positive and negative reliable learners at `eps/4`, combined.
    FullyReliable {
        d: usize,
        #[serde(rename = "W")]
        w: f64,
        eps: f64,
    },
    Disjunction,
    AgnosticL1 {
        d: usize,
        #[serde(rename = "W")]
        w: f64,
    },
}

impl LearnerSpec {
    fn opt_mode(&self) -> OptMode {
        match self {
            LearnerSpec::Reliable { sign: Sign::Negative, .. } => OptMode::Negative,
            LearnerSpec::FullyReliable { .. } => OptMode::Fully,
            _ => OptMode::Positive,
        }
    }

    fn needs_calibration(&self) -> bool {
        !matches!(self, LearnerSpec::Disjunction)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSizes {
    pub train: usize,
    #[serde(default)]
    pub calibration: usize,
    pub holdout: usize,
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub seed: u64,
    pub concept: Concept,
    pub noise: NoiseModel,
    pub learner: LearnerSpec,
    pub sizes: SampleSizes,
    /// Bank for the optimum on the held-out sample; `None` skips it.
    #[serde(default)]
    pub bank: Option<Bank>,
    /// Confidence used for the reported theoretical sample size.
    #[serde(default = "default_delta")]
    pub delta: f64,
}

fn default_delta() -> f64 {
    0.05
}

impl RunSpec {
    /// Hex SHA-256 of the canonical JSON of the spec.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(serde_json::to_vec(self).expect("run specification serializes")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageError {
    pub stage: String,
    pub message: String,
}

/// Trained classifier of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "learner", content = "hypothesis", rename_all = "snake_case")]
pub enum Hypothesis {
    Reliable(ReliableHypothesis),
    FullyReliable { positive: ReliableHypothesis, negative: ReliableHypothesis },
    Disjunction(Concept),
    AgnosticL1(ThresholdHypothesis),
}

impl PartialHypothesis for Hypothesis {
    fn decide(&self, x: &CubePoint) -> Partial {
        match self {
            Hypothesis::Reliable(h) => h.decide(x),
            Hypothesis::FullyReliable { positive, negative } => {
                let (a, b) = (positive.predict(x), negative.predict(x));
                if a == b {
                    a.into()
                } else {
                    Partial::Unknown
                }
            }
            Hypothesis::Disjunction(c) => c.decide(x),
            Hypothesis::AgnosticL1(h) => h.decide(x),
        }
    }
}

/// Metrics of a run; serialized to `result.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub train: Option<ErrorMetrics>,
    pub holdout: Option<ErrorMetrics>,
    /// The planted concept on the held-out sample.
    pub planted_holdout: Option<ErrorMetrics>,
    pub opt: Option<OptResult>,
    pub fit: Vec<FitReport>,
    pub error: Option<StageError>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub hash: String,
    pub generator: String,
    pub spec: RunSpec,
    /// Sample size bound for reliable learning, reported verbatim.
    pub theoretical_m: Option<SamplePlan>,
    pub result: RunResult,
    /// SHA-256 of each stored artifact.
    pub artifacts: BTreeMap<String, String>,
}

/// A run held in memory before persistence.
pub struct RunOutput {
    pub manifest: RunManifest,
    pub hypothesis: Option<Hypothesis>,
    pub result_json: String,
    pub hypothesis_json: String,
    pub sample_csv: Vec<u8>,
}

fn stage<T>(name: &str, r: Result<T>) -> std::result::Result<T, StageError> {
    r.map_err(|e| StageError { stage: name.to_string(), message: e.to_string() })
}

struct Trained {
    hypothesis: Hypothesis,
    fit: Vec<FitReport>,
}

fn train(spec: &RunSpec, s: &LabeledSample, fresh: Option<&LabeledSample>) -> Result<Trained> {
    let fresh = || fresh.ok_or_else(|| Error::input("learner needs a calibration sample"));
    Ok(match &spec.learner {
        LearnerSpec::Reliable { sign, d, w, eps } => {
            let r = learn_reliable(s, *d, *w, *eps, *sign, fresh()?)?;
            Trained { hypothesis: Hypothesis::Reliable(r.hypothesis), fit: vec![r.report] }
        }
        LearnerSpec::FullyReliable { d, w, eps } => {
            let FullyReliable { positive, negative } =
                learn_fully_reliable(s, &LearnParams { d: *d, w: *w, eps: *eps }, fresh()?)?;
            Trained {
                hypothesis: Hypothesis::FullyReliable { positive: positive.hypothesis, negative: negative.hypothesis },
                fit: vec![positive.report, negative.report],
            }
        }
        LearnerSpec::Disjunction => Trained { hypothesis: Hypothesis::Disjunction(learn_disjunction_positive(s)?), fit: vec![] },
        LearnerSpec::AgnosticL1 { d, w } => {
            let (p, report) = agnostic_l1_fit(s, *d, *w)?;
            Trained { hypothesis: Hypothesis::AgnosticL1(calibrate_threshold(&p, fresh()?)?), fit: vec![report] }
        }
    })
}

fn theoretical_m(spec: &RunSpec) -> Option<SamplePlan> {
    let n = spec.concept.dim();
    match spec.learner {
        LearnerSpec::Reliable { d, w, eps, .. } | LearnerSpec::FullyReliable { d, w, eps } => {
            plan_samples(n, d, w, eps, spec.delta).ok()
        }
        _ => None,
    }
}

fn sha(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Generates the samples, trains, evaluates on the held-out sample and
/// computes the bank optimum, without touching the file system. Stage
/// failures are recorded in the result rather than returned.
pub fn execute(spec: &RunSpec) -> Result<RunOutput> {
    let c = &spec.concept;
    let draw = |m: usize, st: Stage| generate_stream(c, &spec.noise, m, spec.seed, st as u64);
    let mut result = RunResult { train: None, holdout: None, planted_holdout: None, opt: None, fit: vec![], error: None };
    let mut hypothesis = None;
    let mut sample_csv = Vec::new();
    let outcome = (|| -> std::result::Result<(), StageError> {
        let s = stage("generate", draw(spec.sizes.train, Stage::Train))?;
        stage("generate", s.write_csv(&mut sample_csv))?;
        let fresh = if spec.learner.needs_calibration() && spec.sizes.calibration > 0 {
            Some(stage("generate", draw(spec.sizes.calibration, Stage::Calibration))?)
        } else {
            None
        };
        let holdout = stage("generate", draw(spec.sizes.holdout, Stage::Holdout))?;
        let t = stage("learn", train(spec, &s, fresh.as_ref()))?;
        result.fit = t.fit;
        result.train = Some(stage("evaluate", empirical_metrics(&t.hypothesis, &s))?);
        result.holdout = Some(stage("evaluate", empirical_metrics(&t.hypothesis, &holdout))?);
        result.planted_holdout = Some(stage("evaluate", empirical_metrics(c, &holdout))?);
        hypothesis = Some(t.hypothesis);
        if let Some(bank) = &spec.bank {
            result.opt = Some(stage("brute_opt", brute_opt(&holdout, bank, spec.learner.opt_mode()))?);
        }
        Ok(())
    })();
    result.error = outcome.err();
    let result_json = serde_json::to_string_pretty(&result)?;
    let hypothesis_json = serde_json::to_string_pretty(&hypothesis)?;
    let mut artifacts = BTreeMap::new();
    artifacts.insert("result.json".to_string(), sha(result_json.as_bytes()));
    artifacts.insert("hypothesis.json".to_string(), sha(hypothesis_json.as_bytes()));
    artifacts.insert("sample.csv".to_string(), sha(&sample_csv));
    let manifest = RunManifest {
        hash: spec.hash(),
        generator: GENERATOR_ID.to_string(),
        spec: spec.clone(),
        theoretical_m: theoretical_m(spec),
        result,
        artifacts,
    };
    Ok(RunOutput { manifest, hypothesis, result_json, hypothesis_json, sample_csv })
}

/// Run root from [`RUNS_ENV`], defaulting to `./runs`.
pub fn runs_root() -> PathBuf {
    std::env::var_os(RUNS_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("runs"))
}

/// Writes `manifest.json`, `result.json`, `hypothesis.json` and
/// `sample.csv` under `root/<hash>` and returns that directory.
pub fn persist(out: &RunOutput, root: &Path) -> Result<PathBuf> {
    let dir = root.join(&out.manifest.hash);
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&out.manifest)?)?;
    fs::write(dir.join("result.json"), &out.result_json)?;
    fs::write(dir.join("hypothesis.json"), &out.hypothesis_json)?;
    fs::write(dir.join("sample.csv"), &out.sample_csv)?;
    Ok(dir)
}

/// [`execute`] followed by [`persist`].
pub fn run_experiment(spec: &RunSpec, root: &Path) -> Result<(RunManifest, PathBuf)> {
    let out = execute(spec)?;
    let dir = persist(&out, root)?;
    Ok((out.manifest, dir))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub identical: bool,
    pub mismatched: Vec<String>,
    pub manifest: RunManifest,
}

/// Re-executes the manifest stored in `dir` and compares every artifact
/// with the stored bytes.
pub fn replay(dir: &Path) -> Result<ReplayReport> {
    let stored: RunManifest = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
    let out = execute(&stored.spec)?;
    let fresh: [(&str, &[u8]); 3] = [
        ("result.json", out.result_json.as_bytes()),
        ("hypothesis.json", out.hypothesis_json.as_bytes()),
        ("sample.csv", &out.sample_csv),
    ];
    let mut mismatched = Vec::new();
    for (name, bytes) in fresh {
        let old = fs::read(dir.join(name)).unwrap_or_default();
        if old != bytes {
            mismatched.push(name.to_string());
        }
    }
    Ok(ReplayReport { identical: mismatched.is_empty(), mismatched, manifest: out.manifest })
}

/// Appends one summary row per run to a CSV file, writing the header when
/// the file is new or empty.
pub fn append_summary(path: &Path, m: &RunManifest) -> Result<()> {
    let fresh = fs::metadata(path).map(|md| md.len() == 0).unwrap_or(true);
    let file = fs::OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::Writer::from_writer(file);
    if fresh {
        w.write_record([
            "hash", "seed", "concept", "noise", "learner", "train", "calibration", "holdout", "false_pos", "false_neg",
            "err", "unknown_rate", "opt", "error",
        ])?;
    }
    let r = &m.result;
    let metric = |f: fn(&ErrorMetrics) -> f64| r.holdout.as_ref().map(|h| f(h).to_string()).unwrap_or_default();
    let learner = serde_json::to_string(&m.spec.learner)?;
    w.write_record([
        m.hash.clone(),
        m.spec.seed.to_string(),
        m.spec.concept.to_string(),
        m.spec.noise.to_string(),
        learner,
        m.spec.sizes.train.to_string(),
        m.spec.sizes.calibration.to_string(),
        m.spec.sizes.holdout.to_string(),
        metric(|h| h.false_pos),
        metric(|h| h.false_neg),
        metric(|h| h.err),
        metric(|h| h.unknown_rate),
        r.opt.as_ref().map(|o| o.value.to_string()).unwrap_or_default(),
        r.error.as_ref().map(|e| format!("{}: {}", e.stage, e.message)).unwrap_or_default(),
    ])?;
    w.flush()?;
    let _ = w.into_inner().map(|mut f| f.flush());
    Ok(())
}
