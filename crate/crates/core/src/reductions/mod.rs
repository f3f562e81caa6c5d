//! Hardness constructions as instance transformations, with mappers that
//! carry gadget solutions back to the source problem.

mod gadgets;
pub mod sets;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{HappyError, Result};
use crate::happy::{happy_vertices, objective};
use crate::mhe::mhe_optimum;
use crate::mhv::mhv_happy_subset_search;
use crate::model::{Color, Coloring, Graph, Instance, ProblemKind, Vertex};
use crate::solve::Limits;

pub use gadgets::{
    build_set_partitioning_gadget, reduce_any_set_partitioning_to_mhe, reduce_brds_to_mhe,
    reduce_colored_graph_to_mhv_subdivision, reduce_set_packing_to_mhv,
    reduce_set_partitioning_to_mhe, reduce_x3c_to_mhe_above_guarantee, unique_coloring,
};
pub use sets::{
    eliminate_size_two_sets, eliminate_size_two_sets_traced, find_partition, is_independent,
    is_packing, is_partition, max_independent_set, max_set_packing, Elimination, SetSystem,
};

/// The source instance a gadget was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    SetPacking {
        system: SetSystem,
        k: u64,
    },
    Brds {
        system: SetSystem,
        k: u64,
    },
    IndependentSet {
        graph: Graph,
        coloring: Vec<Color>,
        k: u64,
    },
    X3c {
        n: usize,
        sets: Vec<Vec<usize>>,
        /// Whether an even `n` was padded by one block of three elements.
        padded: bool,
    },
    SetPartitioning {
        original: SetSystem,
        /// Family the gadget was built from (two-element sets eliminated).
        reduced: SetSystem,
        /// Indices into `original` forming each set of `reduced`.
        origins: Vec<Vec<usize>>,
    },
}

impl Source {
    pub fn source_kind(&self) -> &'static str {
        match self {
            Source::SetPacking { .. } => "set-packing",
            Source::Brds { .. } => "brds",
            Source::IndependentSet { .. } => "independent-set",
            Source::X3c { .. } => "x3c",
            Source::SetPartitioning { .. } => "set-partitioning",
        }
    }
}

/// Gadget vertices of each source object. Unused tables stay empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Mapper {
    /// `elements[i - 1]` is the vertex of universe element `i`.
    pub elements: Vec<Vertex>,
    /// `sets[j]` lists the copies standing for set `j` (color `j + 1`).
    pub sets: Vec<Vec<Vertex>>,
    pub guards: Vec<Vertex>,
    /// `originals[v - 1]` is the gadget vertex of source vertex `v`.
    pub originals: Vec<Vertex>,
    /// `(u, v, w)`: source edge `(u, v)` is subdivided by gadget vertex `w`.
    pub subdivisions: Vec<(Vertex, Vertex, Vertex)>,
}

/// Value reached by a trivial extension with `color`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Guarantee {
    pub color: Color,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub instance: Instance,
    pub source: Source,
    pub mapper: Mapper,
    pub guarantee: Guarantee,
}

impl ReductionOutput {
    pub fn source_kind(&self) -> &'static str {
        self.source.source_kind()
    }

    /// JSON sidecar describing the mapping.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": 1,
            "source_kind": self.source_kind(),
            "kind": self.instance.kind,
            "n": self.instance.n(),
            "ell": self.instance.ell(),
            "k": self.instance.k,
            "guarantee": self.guarantee,
            "mapper": self.mapper,
        })
    }
}

/// A solution of the source problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum SourceCertificate {
    /// 0-based indices into the source set family.
    Sets(Vec<usize>),
    IndependentSet(BTreeSet<Vertex>),
}

/// Sets whose element vertices all carry the set's color.
fn monochromatic_sets(sets: &[Vec<usize>], mapper: &Mapper, coloring: &Coloring) -> Vec<usize> {
    (0..sets.len())
        .filter(|&j| {
            let color = (j + 1) as Color;
            sets[j]
                .iter()
                .all(|&e| coloring.get(mapper.elements[e - 1]) == color)
        })
        .collect()
}

fn reduction_bug(what: &str) -> HappyError {
    HappyError::Internal(format!(
        "gadget coloring meets its target but the mapped {what} fails verification"
    ))
}

/// Reads a source certificate off a gadget coloring that meets the gadget's
/// target, and verifies it against the source instance.
pub fn map_solution_back(
    output: &ReductionOutput,
    coloring: &Coloring,
) -> Result<SourceCertificate> {
    let instance = &output.instance;
    instance.check_extension(coloring)?;
    let value = objective(instance, coloring);
    if value < instance.k {
        return Err(HappyError::ContractViolation(format!(
            "coloring reaches {value}, below the target {}",
            instance.k
        )));
    }
    let mapper = &output.mapper;
    match &output.source {
        Source::SetPacking { system, k } => {
            let chosen = monochromatic_sets(&system.sets, mapper, coloring);
            let weight: u64 = chosen.iter().map(|&j| system.weight(j)).sum();
            if !is_packing(system, &chosen) || weight < *k {
                return Err(reduction_bug("set packing"));
            }
            Ok(SourceCertificate::Sets(chosen))
        }
        Source::Brds { system, k } => {
            let chosen = monochromatic_sets(&system.sets, mapper, coloring);
            if !is_partition(system, &chosen) || (chosen.len() as u64) != *k {
                return Err(reduction_bug("disjoint subfamily"));
            }
            Ok(SourceCertificate::Sets(chosen))
        }
        Source::IndependentSet { graph, k, .. } => {
            let happy = happy_vertices(&instance.graph, coloring);
            let chosen: BTreeSet<Vertex> = (1..=graph.n())
                .filter(|&v| happy.contains(&mapper.originals[v - 1]))
                .collect();
            if !is_independent(graph, &chosen) || (chosen.len() as u64) < *k {
                return Err(reduction_bug("independent set"));
            }
            Ok(SourceCertificate::IndependentSet(chosen))
        }
        Source::X3c { n, sets, padded } => {
            let mut all = sets.clone();
            if *padded {
                let base = 3 * n;
                all.push(vec![base + 1, base + 2, base + 3]);
            }
            let chosen: Vec<usize> = monochromatic_sets(&all, mapper, coloring)
                .into_iter()
                .filter(|&j| j < sets.len())
                .collect();
            let system = SetSystem::new(3 * n, sets.clone())?;
            if !is_partition(&system, &chosen) {
                return Err(reduction_bug("exact cover"));
            }
            Ok(SourceCertificate::Sets(chosen))
        }
        Source::SetPartitioning {
            original,
            reduced,
            origins,
        } => {
            let chosen = monochromatic_sets(&reduced.sets, mapper, coloring);
            if !is_partition(reduced, &chosen) {
                return Err(reduction_bug("partition"));
            }
            let mut mapped: Vec<usize> = chosen
                .iter()
                .flat_map(|&j| origins[j].iter().copied())
                .collect();
            mapped.sort_unstable();
            if !is_partition(original, &mapped) {
                return Err(reduction_bug("partition"));
            }
            Ok(SourceCertificate::Sets(mapped))
        }
    }
}

/// Both-side answers for one reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    pub source_yes: bool,
    pub gadget_yes: bool,
    pub gadget_optimum: u64,
    /// Back-mapped certificate when the gadget meets its target.
    pub certificate: Option<SourceCertificate>,
}

impl Equivalence {
    pub fn agrees(&self) -> bool {
        self.source_yes == self.gadget_yes
    }
}

/// Answers the source instance and the gadget with exact oracles, and maps
/// an optimal gadget coloring back when it meets the target. Fails with a
/// resource-limit error when either side is too large.
pub fn verify_equivalence(output: &ReductionOutput, limits: &Limits) -> Result<Equivalence> {
    let budget = limits.enumeration_budget;
    let source_yes = match &output.source {
        Source::SetPacking { system, k } => max_set_packing(system, budget)?.0 >= *k,
        Source::Brds { system, .. } => find_partition(system, budget)?.is_some(),
        Source::IndependentSet { graph, k, .. } => {
            max_independent_set(graph, budget)?.len() as u64 >= *k
        }
        Source::X3c { n, sets, .. } => {
            find_partition(&SetSystem::new(3 * n, sets.clone())?, budget)?.is_some()
        }
        Source::SetPartitioning { original, .. } => find_partition(original, budget)?.is_some(),
    };
    let instance = &output.instance;
    let solved = match instance.kind {
        ProblemKind::Mhv => mhv_happy_subset_search(instance, budget)?,
        ProblemKind::Mhe => mhe_optimum(instance, limits)?,
    };
    let gadget_optimum = solved.value.expect("exact solvers certify");
    let gadget_yes = gadget_optimum >= instance.k;
    let certificate = match (gadget_yes, &solved.certificate) {
        (true, Some(c)) => Some(map_solution_back(output, c)?),
        _ => None,
    };
    Ok(Equivalence {
        source_yes,
        gadget_yes,
        gadget_optimum,
        certificate,
    })
}
