//! Result types shared by every solver, plus the exhaustive enumerator used
//! by the brute-force oracles.

use std::time::Duration;

use serde::Serialize;

use crate::error::{HappyError, Result};
use crate::happy::objective;
use crate::model::{Color, Coloring, Instance, Vertex};

/// Default cap on the number of extensions a brute-force run may visit.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 20_000_000;
/// Default cap on the number of uncolored vertices handed to the subset DP.
pub const DEFAULT_MAX_DP_WIDTH: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub enumeration_budget: u64,
    pub max_dp_width: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            max_dp_width: DEFAULT_MAX_DP_WIDTH,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Outcome {
    /// Yes/no answer with respect to the instance target `k`.
    Decision(bool),
    /// Exact optimum.
    Optimum(u64),
    /// Value reached by a heuristic certificate; a lower bound on the optimum.
    Achieved(u64),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Enumerated colorings, DP states, or guess-procedure runs.
    pub calls: u64,
    /// Deepest recursion (or forced-pick chain) reached.
    pub depth: u64,
    #[serde(rename = "millis", serialize_with = "ser_millis")]
    pub elapsed: Duration,
    pub seed: Option<u64>,
}

fn ser_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub certificate: Option<Coloring>,
    /// Objective value of the certificate, when there is one.
    pub value: Option<u64>,
    pub stats: SolveStats,
}

impl SolveResult {
    /// Whether the result certifies at least `k` happy vertices/edges.
    pub fn is_yes(&self, k: u64) -> bool {
        match self.outcome {
            Outcome::Decision(b) => b,
            Outcome::Optimum(v) | Outcome::Achieved(v) => v >= k,
        }
    }

    pub fn optimum(&self) -> Option<u64> {
        match self.outcome {
            Outcome::Optimum(v) => Some(v),
            _ => None,
        }
    }
}

/// Number of extensions `ell^{n'}`, saturating at `u64::MAX`.
pub fn extension_count(instance: &Instance) -> u64 {
    let ell = instance.ell() as u64;
    let free = instance.precoloring.uncolored_count() as u32;
    ell.checked_pow(free).unwrap_or(u64::MAX)
}

pub(crate) fn check_budget(instance: &Instance, budget: u64) -> Result<u64> {
    let count = extension_count(instance);
    if count > budget {
        return Err(HappyError::ResourceLimit(format!(
            "{}^{} = {} extensions exceed the enumeration budget {}",
            instance.ell(),
            instance.precoloring.uncolored_count(),
            if count == u64::MAX {
                "more than 2^64".to_string()
            } else {
                count.to_string()
            },
            budget
        )));
    }
    Ok(count)
}

/// Visits every extension of the instance precoloring in lexicographic
/// order of the uncolored vertices' colors.
pub fn for_each_extension(instance: &Instance, mut visit: impl FnMut(&Coloring)) {
    let free: Vec<Vertex> = instance.precoloring.uncolored_vertices();
    let ell: Color = instance.ell();
    let mut colors: Vec<Color> = instance
        .precoloring
        .slots()
        .iter()
        .map(|c| c.unwrap_or(1))
        .collect();
    loop {
        let coloring = Coloring::from_vec(colors);
        visit(&coloring);
        colors = coloring.into_vec();
        // odometer over the uncolored vertices, last one fastest
        let mut i = free.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            let slot = &mut colors[free[i] - 1];
            if *slot < ell {
                *slot += 1;
                break;
            }
            *slot = 1;
        }
    }
}

/// Exhaustive optimum over all extensions; shared by the MHV and MHE oracles.
pub(crate) fn brute_force(instance: &Instance, budget: u64) -> Result<SolveResult> {
    let start = std::time::Instant::now();
    check_budget(instance, budget)?;
    let mut best: Option<(u64, Coloring)> = None;
    let mut calls = 0u64;
    for_each_extension(instance, |c| {
        calls += 1;
        let v = objective(instance, c);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, c.clone()));
        }
    });
    let (value, certificate) = best.expect("at least one extension exists");
    Ok(SolveResult {
        outcome: Outcome::Optimum(value),
        certificate: Some(certificate),
        value: Some(value),
        stats: SolveStats {
            calls,
            depth: 0,
            elapsed: start.elapsed(),
            seed: None,
        },
    })
}
