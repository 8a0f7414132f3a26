//! `onesided`: command-line front end for the onesided library.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use onesided::certify::{self, Mode};
use onesided::constructions::{self, Approximant};
use onesided::cube::{empirical_metrics, Concept, ErrorMetrics, LabeledSample, Sign};
use onesided::harness::{self, Bank, Hypothesis, OptMode, RunManifest, RunSpec};
use onesided::learn::{self, LearnParams};
use onesided::poly::{ExpansionCap, StructuredPolynomial};
use onesided::Error;

#[derive(Parser)]
#[command(name = "onesided", version, about = "One-sided polynomial approximation and reliable learning")]
struct Cli {
    /// Print the documented JSON schema instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Constant-error approximant of a halfspace (error 1/4).
    Quarter,
    /// Arbitrary-error approximant of a halfspace.
    Eps,
    /// Degree/weight tradeoff for AND_n.
    And,
    /// Positive one-sided approximant of a DNF.
    Dnf,
    /// Negative one-sided approximant of a CNF.
    Cnf,
}

#[derive(Clone, Copy, ValueEnum)]
enum LearnerKind {
    Reliable,
    Fully,
    Disjunction,
    Agnostic,
}

#[derive(Clone, Copy, ValueEnum)]
enum BankKind {
    Majority,
    Disjunction,
}

#[derive(Subcommand)]
enum Command {
    /// Build an approximating polynomial and certify it.
    Construct {
        #[arg(long, required_unless_present = "n")]
        concept: Option<String>,
        #[arg(long, value_enum, default_value = "quarter")]
        method: Method,
        #[arg(long, default_value = "positive")]
        sign: Sign,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        /// Degree budget for the tradeoff constructions.
        #[arg(long)]
        d: Option<usize>,
        /// Input length for `--method and`.
        #[arg(long)]
        n: Option<usize>,
        /// Write the approximant JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a stored polynomial against a concept.
    Certify {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        concept: String,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value = "positive")]
        mode: Mode,
    },
    /// Least achievable error for each degree, by linear programming.
    Mineps {
        #[arg(long)]
        concept: String,
        #[arg(long, default_value = "positive")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        dmin: usize,
        #[arg(long)]
        dmax: usize,
    },
    /// Train a learner on a sample CSV.
    Learn {
        #[arg(long)]
        train: PathBuf,
        #[arg(long, value_enum, default_value = "reliable")]
        learner: LearnerKind,
        #[arg(long, default_value = "positive")]
        sign: Sign,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long = "W", default_value_t = 1.0)]
        w: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Fresh sample for threshold calibration.
        #[arg(long)]
        calibration: Option<PathBuf>,
        /// Held-out sample to evaluate on.
        #[arg(long)]
        test: Option<PathBuf>,
        /// Write the hypothesis JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample size bound for reliable learning.
    Plan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long = "W")]
        w: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Best reliable classifier of a concept bank on a sample.
    Oracle {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long, value_enum, default_value = "majority")]
        bank: BankKind,
        #[arg(long, default_value = "positive")]
        mode: OptMode,
    },
    /// Run experiment specs and append a summary table.
    Bench {
        /// JSON files holding one run specification or an array of them.
        #[arg(required = true)]
        specs: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Run root (defaults to $ONESIDED_RUNS or ./runs).
        #[arg(long)]
        runs: Option<PathBuf>,
        /// Summary CSV (defaults to <runs>/summary.csv).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Re-execute a stored run and compare its artifacts byte for byte.
    Replay { dir: PathBuf },
}

fn read_sample(path: &Path) -> onesided::Result<LabeledSample> {
    LabeledSample::read_csv(fs::File::open(path)?)
}

fn write_json(path: &Path, v: &impl serde::Serialize) -> onesided::Result<()> {
    fs::write(path, serde_json::to_string_pretty(v)? + "\n")?;
    Ok(())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value serializes"));
}

fn fmt_metrics(m: &ErrorMetrics) -> String {
    format!(
        "false_pos {:.6}  false_neg {:.6}  err {:.6}  unknown {:.6}",
        m.false_pos, m.false_neg, m.err, m.unknown_rate
    )
}

fn fmt_violation(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.3e}")
    } else {
        "none".into()
    }
}

/// Outcome of a command: its exit status once output has been printed.
enum Outcome {
    Done,
    Rejected,
}

fn construct(
    concept: Option<&str>,
    method: Method,
    sign: Sign,
    eps: f64,
    d: Option<usize>,
    n: Option<usize>,
) -> onesided::Result<Approximant> {
    let target = || -> onesided::Result<Concept> {
        Concept::parse(concept.ok_or_else(|| Error::Input("--concept is required".into()))?, n)
    };
    let need_d = || d.ok_or_else(|| Error::Input("--d is required for this method".into()));
    match method {
        Method::Quarter => {
            let c = target()?;
            let poly = constructions::halfspace_pos_quarter(&c)?;
            let certificate = if c.dim() <= certify::EXHAUSTIVE_CAP {
                Some(certify::verify_onesided(&poly, &c, 0.25, Sign::Positive)?)
            } else {
                None
            };
            Ok(Approximant { poly, eps: 0.25, kahn: None, certificate })
        }
        Method::Eps => constructions::halfspace_onesided_eps(&target()?, sign, eps),
        Method::And => {
            let n = match (n, concept) {
                (Some(n), _) => n,
                (None, Some(_)) => target()?.dim(),
                (None, None) => unreachable!("clap requires --concept or --n"),
            };
            constructions::and_n_certified(n, need_d()?, eps)
        }
        Method::Dnf => constructions::dnf_pos_onesided(&target()?, need_d()?, eps),
        Method::Cnf => constructions::cnf_neg_onesided(&target()?, need_d()?, eps),
    }
}

fn run(cli: Cli) -> onesided::Result<Outcome> {
    let json = cli.json;
    match cli.command {
        Command::Construct { concept, method, sign, eps, d, n, out } => {
            let a = construct(concept.as_deref(), method, sign, eps, d, n)?;
            let wd = a.poly.weight_and_degree(&ExpansionCap::default());
            if let Some(path) = &out {
                write_json(path, &a)?;
            }
            if json {
                print_json(&json!({
                    "approximant": a,
                    "degree": wd.degree,
                    "weight": wd.weight,
                    "exact": wd.exact,
                }));
            } else {
                println!("eps        {}", a.eps);
                println!("degree     {}{}", wd.degree, if wd.exact { "" } else { " (bound)" });
                println!("weight     {:.6}{}", wd.weight, if wd.exact { "" } else { " (bound)" });
                if let Some(k) = &a.kahn {
                    println!("S_k        W={} k={} a={} b={} r={}", k.w, k.k, k.a, k.b, k.r);
                }
                match &a.certificate {
                    Some(c) => println!(
                        "certified  {}  worst_pos {}  worst_neg {}  points {}",
                        c.ok,
                        fmt_violation(c.worst_pos_violation),
                        fmt_violation(c.worst_neg_violation),
                        c.points_checked
                    ),
                    None => println!("certified  skipped (dimension above {})", certify::EXHAUSTIVE_CAP),
                }
            }
            Ok(if a.certificate.as_ref().is_some_and(|c| !c.ok) { Outcome::Rejected } else { Outcome::Done })
        }
        Command::Certify { poly, concept, eps, mode } => {
            let text = fs::read_to_string(&poly)?;
            let p: StructuredPolynomial = match serde_json::from_str::<Approximant>(&text) {
                Ok(a) => a.poly,
                Err(_) => serde_json::from_str(&text)?,
            };
            let c = Concept::parse(&concept, Some(p.dim()))?;
            let r = certify::verify(&p, &c, eps, mode)?;
            if json {
                print_json(&serde_json::to_value(&r)?);
            } else {
                println!("ok         {}", r.ok);
                println!("worst_pos  {}", fmt_violation(r.worst_pos_violation));
                println!("worst_neg  {}", fmt_violation(r.worst_neg_violation));
                println!("points     {}", r.points_checked);
                if let Some(x) = r.witness {
                    println!("witness    {x}");
                }
            }
            Ok(if r.ok { Outcome::Done } else { Outcome::Rejected })
        }
        Command::Mineps { concept, mode, dmin, dmax } => {
            if dmin > dmax {
                return Err(Error::Input("--dmin exceeds --dmax".into()));
            }
            let c = Concept::parse(&concept, None)?;
            let mut rows = Vec::new();
            for d in dmin..=dmax {
                let r = certify::min_eps(&c, d, mode)?;
                rows.push((d, r));
            }
            if json {
                let v: Vec<Value> = rows
                    .iter()
                    .map(|(d, r)| json!({"d": d, "eps": r.eps, "lp_iterations": r.lp_iterations}))
                    .collect();
                print_json(&json!({"concept": c, "mode": mode, "rows": v}));
            } else {
                println!("{:>3}  {:>12}", "d", "eps");
                for (d, r) in &rows {
                    println!("{d:>3}  {:>12.9}", r.eps);
                }
            }
            Ok(Outcome::Done)
        }
        Command::Learn { train, learner, sign, d, w, eps, calibration, test, out } => {
            let s = read_sample(&train)?;
            let fresh = calibration.as_deref().map(read_sample).transpose()?;
            let need_fresh = || fresh.as_ref().ok_or_else(|| Error::Input("--calibration is required".into()));
            let (h, fits) = match learner {
                LearnerKind::Reliable => {
                    let r = learn::learn_reliable(&s, d, w, eps, sign, need_fresh()?)?;
                    (Hypothesis::Reliable(r.hypothesis), vec![r.report])
                }
                LearnerKind::Fully => {
                    let r = learn::learn_fully_reliable(&s, &LearnParams { d, w, eps }, need_fresh()?)?;
                    (
                        Hypothesis::FullyReliable { positive: r.positive.hypothesis, negative: r.negative.hypothesis },
                        vec![r.positive.report, r.negative.report],
                    )
                }
                LearnerKind::Disjunction => (Hypothesis::Disjunction(learn::learn_disjunction_positive(&s)?), vec![]),
                LearnerKind::Agnostic => {
                    let (p, r) = learn::agnostic_l1_fit(&s, d, w)?;
                    (Hypothesis::AgnosticL1(learn::calibrate_threshold(&p, need_fresh()?)?), vec![r])
                }
            };
            let train_m = empirical_metrics(&h, &s)?;
            let test_m = test.as_deref().map(read_sample).transpose()?.map(|t| empirical_metrics(&h, &t)).transpose()?;
            if let Some(path) = &out {
                write_json(path, &h)?;
            }
            if json {
                print_json(&json!({"fit": fits, "train": train_m, "test": test_m, "hypothesis": h}));
            } else {
                for f in &fits {
                    println!(
                        "fit    objective {:.6}  weight {:.6}  active {}  lp {}x{} in {} pivots",
                        f.objective_value, f.weight, f.constraints_active, f.lp_rows, f.lp_vars, f.lp_iterations
                    );
                }
                if let Hypothesis::Disjunction(c) = &h {
                    println!("hypothesis {c}");
                }
                println!("train  {}", fmt_metrics(&train_m));
                if let Some(t) = &test_m {
                    println!("test   {}", fmt_metrics(t));
                }
            }
            Ok(Outcome::Done)
        }
        Command::Plan { n, d, w, eps, delta } => {
            let p = learn::plan_samples(n, d, w, eps, delta)?;
            let m = p.m as f64;
            let rad = learn::rademacher_bound(w, d, n, m);
            let alpha = learn::generalization_alpha(n, d, w, eps, delta, m);
            if json {
                print_json(&json!({"plan": p, "rademacher": rad, "alpha": alpha}));
            } else {
                println!("term_rademacher  {:.6e}", p.term_rademacher);
                println!("term_confidence  {:.6e}", p.term_confidence);
                println!("m                {}", p.m);
                println!("rademacher(m)    {rad:.6e}");
                println!("alpha(m)         {alpha:.6e}  (eps/2 = {})", eps / 2.0);
            }
            Ok(Outcome::Done)
        }
        Command::Oracle { sample, bank, mode } => {
            let s = read_sample(&sample)?;
            let bank = match bank {
                BankKind::Majority => Bank::Majority,
                BankKind::Disjunction => Bank::MonotoneDisjunction,
            };
            let r = harness::brute_opt(&s, &bank, mode)?;
            if json {
                print_json(&serde_json::to_value(&r)?);
            } else {
                println!("opt     {:.6}", r.value);
                for c in &r.argmin {
                    println!("argmin  {c}");
                }
                println!("bank    {}", r.bank_size);
            }
            Ok(Outcome::Done)
        }
        Command::Bench { specs, jobs, runs, summary } => {
            let mut all: Vec<RunSpec> = Vec::new();
            for path in &specs {
                let v: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
                match v {
                    Value::Array(items) => {
                        for item in items {
                            all.push(serde_json::from_value(item)?);
                        }
                    }
                    other => all.push(serde_json::from_value(other)?),
                }
            }
            let root = runs.unwrap_or_else(harness::runs_root);
            let summary = summary.unwrap_or_else(|| root.join("summary.csv"));
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::Input(format!("worker pool: {e}")))?;
            let done: Vec<onesided::Result<(RunManifest, PathBuf)>> =
                pool.install(|| all.par_iter().map(|s| harness::run_experiment(s, &root)).collect());
            fs::create_dir_all(&root)?;
            let mut manifests = Vec::new();
            for r in done {
                let (m, dir) = r?;
                harness::append_summary(&summary, &m)?;
                manifests.push((m, dir));
            }
            if json {
                let v: Vec<Value> = manifests
                    .iter()
                    .map(|(m, dir)| json!({"dir": dir, "manifest": m}))
                    .collect();
                print_json(&Value::Array(v));
            } else {
                for (m, dir) in &manifests {
                    let line = match (&m.result.error, &m.result.holdout) {
                        (Some(e), _) => format!("error in {}: {}", e.stage, e.message),
                        (None, Some(h)) => fmt_metrics(h),
                        (None, None) => String::new(),
                    };
                    println!("{}  {line}", dir.display());
                }
                println!("summary {}", summary.display());
            }
            Ok(if manifests.iter().any(|(m, _)| m.result.error.is_some()) { Outcome::Rejected } else { Outcome::Done })
        }
        Command::Replay { dir } => {
            let r = harness::replay(&dir)?;
            if json {
                print_json(&json!({"identical": r.identical, "mismatched": r.mismatched, "hash": r.manifest.hash}));
            } else if r.identical {
                println!("identical  {}", r.manifest.hash);
            } else {
                println!("mismatch   {}", r.mismatched.join(", "));
            }
            Ok(if r.identical { Outcome::Done } else { Outcome::Rejected })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Rejected) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            log::debug!("{e:?}");
            ExitCode::from(1)
        }
    }
}
