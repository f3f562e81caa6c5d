//! Solver selection by name, shared by the CLI and the bench harness.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HappyError, Result};
use crate::mhe::{mhe_brute_force, mhe_solve};
use crate::mhv::{best_trivial_extension, mhv_brute_force, mhv_randomized, RandomizedConfig};
use crate::model::{Instance, ProblemKind};
use crate::solve::{Limits, SolveResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Brute,
    Randomized,
    Trivial,
    KernelDp,
}

impl Algo {
    pub const ALL: [Algo; 4] = [Algo::Brute, Algo::Randomized, Algo::Trivial, Algo::KernelDp];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Brute => "brute",
            Algo::Randomized => "randomized",
            Algo::Trivial => "trivial",
            Algo::KernelDp => "kernel-dp",
        }
    }

    /// Whether the answer is exact (as opposed to one-sided).
    pub fn is_exact(self) -> bool {
        matches!(self, Algo::Brute | Algo::KernelDp)
    }

    pub fn supports(self, kind: ProblemKind) -> bool {
        match self {
            Algo::Brute | Algo::Trivial => true,
            Algo::Randomized => kind == ProblemKind::Mhv,
            Algo::KernelDp => kind == ProblemKind::Mhe,
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = HappyError;

    fn from_str(s: &str) -> Result<Self> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| HappyError::invalid(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub algo: Algo,
    pub seed: u64,
    /// Repetitions of the randomized solver; `None` picks `3 * ell^k`.
    pub repetitions: Option<u64>,
    pub limits: Limits,
}

impl RunConfig {
    pub fn new(algo: Algo) -> Self {
        RunConfig {
            algo,
            seed: 0,
            repetitions: None,
            limits: Limits::default(),
        }
    }
}

pub fn run(instance: &Instance, config: &RunConfig) -> Result<SolveResult> {
    let algo = config.algo;
    if !algo.supports(instance.kind) {
        let only = match algo {
            Algo::Randomized => "mhv",
            _ => "mhe",
        };
        return Err(HappyError::invalid(format!(
            "algorithm {algo} solves {only} instances only, got {}",
            instance.kind
        )));
    }
    let budget = config.limits.enumeration_budget;
    match (algo, instance.kind) {
        (Algo::Brute, ProblemKind::Mhv) => mhv_brute_force(instance, budget),
        (Algo::Brute, ProblemKind::Mhe) => mhe_brute_force(instance, budget),
        (Algo::Trivial, _) => best_trivial_extension(instance),
        (Algo::Randomized, _) => {
            let mut rc = RandomizedConfig::new(config.seed);
            rc.repetitions = config.repetitions;
            mhv_randomized(instance, &rc)
        }
        (Algo::KernelDp, _) => mhe_solve(instance, &config.limits),
    }
}
