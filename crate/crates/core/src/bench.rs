//! Benchmark harness: runs every solver of a suite on every instance.
//!
//! Suite file (JSON):
//!
//! ```json
//! {
//!   "instances": ["a.txt", "b.txt"],
//!   "solvers": [{ "algo": "brute" }, { "name": "rand", "algo": "randomized", "seed": 7, "reps": 50 }],
//!   "budget": 20000000,
//!   "max_dp_width": 25
//! }
//! ```
//!
//! Instance paths are relative to the suite file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HappyError, Result};
use crate::io::parse_instance;
use crate::model::Instance;
use crate::runner::{run, Algo, RunConfig};
use crate::solve::{Limits, SolveStats};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverSpec {
    /// Label in the output; defaults to the algorithm name.
    #[serde(default)]
    pub name: Option<String>,
    pub algo: Algo,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub reps: Option<u64>,
}

impl SolverSpec {
    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| self.algo.name().to_string())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suite {
    #[serde(default)]
    pub instances: Vec<PathBuf>,
    #[serde(default)]
    pub solvers: Vec<SolverSpec>,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub max_dp_width: Option<usize>,
}

impl Suite {
    fn limits(&self) -> Limits {
        let mut limits = Limits::default();
        if let Some(b) = self.budget {
            limits.enumeration_budget = b;
        }
        if let Some(w) = self.max_dp_width {
            limits.max_dp_width = w;
        }
        limits
    }
}

pub fn load_suite(path: &Path) -> Result<Suite> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HappyError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| HappyError::parse(e.line(), format!("suite: {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub solver: String,
    pub seed: u64,
    pub decision: Option<bool>,
    pub value: Option<u64>,
    pub millis: f64,
    /// Whether every solver that ran on this instance gave the same decision.
    pub agreement: Option<bool>,
    pub error: Option<String>,
    pub stats: Option<SolveStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub solver: String,
    pub runs: usize,
    pub geomean_millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub schema: u32,
    pub records: Vec<BenchRecord>,
    pub summary: Vec<SummaryRow>,
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HappyError::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

/// Runs the suite; instance paths resolve against `base_dir`. Failures are
/// recorded per record and never abort the run.
pub fn run_suite(suite: &Suite, base_dir: &Path) -> BenchReport {
    let limits = suite.limits();
    let instances: Vec<(String, Result<Instance>)> = suite
        .instances
        .iter()
        .map(|p| (p.display().to_string(), load_instance(&base_dir.join(p))))
        .collect();
    let jobs: Vec<(usize, &SolverSpec)> = (0..instances.len())
        .flat_map(|i| suite.solvers.iter().map(move |s| (i, s)))
        .collect();
    let mut records: Vec<BenchRecord> = jobs
        .par_iter()
        .map(|&(i, spec)| {
            let (id, loaded) = &instances[i];
            let config = RunConfig {
                algo: spec.algo,
                seed: spec.seed,
                repetitions: spec.reps,
                limits,
            };
            let start = Instant::now();
            let outcome = loaded
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|inst| run(inst, &config).map(|r| (r.is_yes(inst.k), r)));
            let millis = start.elapsed().as_secs_f64() * 1e3;
            let mut record = BenchRecord {
                instance: id.clone(),
                solver: spec.label(),
                seed: spec.seed,
                decision: None,
                value: None,
                millis,
                agreement: None,
                error: None,
                stats: None,
            };
            match outcome {
                Ok((yes, result)) => {
                    record.decision = Some(yes);
                    record.value = result.value;
                    record.stats = Some(result.stats);
                }
                Err(e) => record.error = Some(e.to_string()),
            }
            record
        })
        .collect();

    let per_solver = suite.solvers.len();
    if per_solver > 0 {
        for chunk in records.chunks_mut(per_solver) {
            let decisions: Vec<bool> = chunk.iter().filter_map(|r| r.decision).collect();
            let agree = decisions.windows(2).all(|w| w[0] == w[1]);
            for r in chunk.iter_mut().filter(|r| r.decision.is_some()) {
                r.agreement = Some(agree);
            }
        }
    }

    let mut logs: BTreeMap<String, (usize, f64)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.error.is_none()) {
        let entry = logs.entry(r.solver.clone()).or_default();
        entry.0 += 1;
        entry.1 += r.millis.max(1e-6).ln();
    }
    let summary = suite
        .solvers
        .iter()
        .map(|s| s.label())
        .filter_map(|label| {
            logs.remove(&label).map(|(runs, sum)| SummaryRow {
                solver: label,
                runs,
                geomean_millis: (sum / runs as f64).exp(),
            })
        })
        .collect();
    BenchReport {
        schema: 1,
        records,
        summary,
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// CSV with columns `instance,solver,seed,decision,value,millis,agreement,error`,
/// followed by one `geomean` row per solver.
pub fn write_csv<W: std::io::Write>(report: &BenchReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let fail = |e: csv::Error| HappyError::Io(e.to_string());
    w.write_record([
        "instance",
        "solver",
        "seed",
        "decision",
        "value",
        "millis",
        "agreement",
        "error",
    ])
    .map_err(fail)?;
    for r in &report.records {
        w.write_record([
            r.instance.clone(),
            r.solver.clone(),
            r.seed.to_string(),
            opt(r.decision),
            opt(r.value),
            format!("{:.3}", r.millis),
            opt(r.agreement),
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(fail)?;
    }
    for s in &report.summary {
        w.write_record([
            "geomean".to_string(),
            s.solver.clone(),
            String::new(),
            String::new(),
            String::new(),
            format!("{:.3}", s.geomean_millis),
            String::new(),
            String::new(),
        ])
        .map_err(fail)?;
    }
    w.flush()?;
    Ok(())
}
