//! Gadget constructions turning source instances into precolored graphs.

use crate::error::{HappyError, Result};
use crate::happy::{objective, trivial_extension};
use crate::model::{Color, Graph, Instance, Precoloring, ProblemKind, Vertex};

use super::sets::{eliminate_size_two_sets_traced, SetSystem};
use super::{Guarantee, Mapper, ReductionOutput, Source};

/// Incremental vertex/edge list.
#[derive(Default)]
struct Builder {
    pre: Vec<Option<Color>>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Builder {
    fn vertex(&mut self, color: Option<Color>) -> Vertex {
        self.pre.push(color);
        self.pre.len()
    }

    fn edge(&mut self, u: Vertex, v: Vertex) {
        self.edges.push((u, v));
    }

    fn clique(&mut self, vs: &[Vertex]) {
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                self.edge(a, b);
            }
        }
    }

    fn finish(self, kind: ProblemKind, ell: Color, k: u64) -> Result<Instance> {
        let n = self.pre.len();
        let graph = Graph::new(n, self.edges)?;
        let pairs = self
            .pre
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|c| (i + 1, c)));
        let precoloring = Precoloring::new(n, ell, pairs)?;
        Instance::new(kind, graph, precoloring, k)
    }
}

fn color_of(j: usize) -> Color {
    Color::try_from(j + 1).expect("set count fits in a color index")
}

/// Best trivial extension, lowest color on ties.
fn best_trivial(instance: &Instance) -> Result<Guarantee> {
    let mut best = Guarantee { color: 1, value: 0 };
    for color in 1..=instance.ell() {
        let value = objective(instance, &trivial_extension(instance, color)?);
        if color == 1 || value > best.value {
            best = Guarantee { color, value };
        }
    }
    Ok(best)
}

/// Element vertices `u_i` (uncolored, `1..=n`), then per set `copies(j)`
/// vertices precolored `j + 1` joined to the returned element lists.
fn element_and_set_blocks(
    b: &mut Builder,
    system: &SetSystem,
    copies: impl Fn(usize) -> usize,
) -> (Vec<Vertex>, Vec<Vec<Vertex>>) {
    let elements: Vec<Vertex> = (0..system.universe_size).map(|_| b.vertex(None)).collect();
    let sets = (0..system.m())
        .map(|j| {
            (0..copies(j))
                .map(|_| b.vertex(Some(color_of(j))))
                .collect()
        })
        .collect();
    (elements, sets)
}

/// Set packing to MHV. Each element becomes an uncolored vertex, each set
/// (weight-many copies of) a vertex precolored with the set's own color, and
/// two guards precolored 1 and 2 keep every element vertex unhappy.
pub fn reduce_set_packing_to_mhv(system: &SetSystem, k: u64) -> Result<ReductionOutput> {
    let mut b = Builder::default();
    let (elements, sets) = element_and_set_blocks(&mut b, system, |j| system.weight(j) as usize);
    for (j, set) in system.sets.iter().enumerate() {
        for &e in set {
            for &s in &sets[j] {
                b.edge(elements[e - 1], s);
            }
        }
    }
    let t1 = b.vertex(Some(1));
    let t2 = b.vertex(Some(2));
    b.edge(t1, t2);
    for &u in &elements {
        b.edge(u, t1);
        b.edge(u, t2);
    }
    let ell = (system.m() as Color).max(2);
    let instance = b.finish(ProblemKind::Mhv, ell, k)?;
    let guarantee = best_trivial(&instance)?;
    Ok(ReductionOutput {
        instance,
        source: Source::SetPacking {
            system: system.clone(),
            k,
        },
        mapper: Mapper {
            elements,
            sets,
            guards: vec![t1, t2],
            ..Mapper::default()
        },
        guarantee,
    })
}

fn choose2(d: u64) -> u64 {
    d * d.saturating_sub(1) / 2
}

/// Bounded rank disjoint sets (all sets of size `d`, universe `k * d`) to
/// MHE with target `n^2 + k * C(d, 2)`.
pub fn reduce_brds_to_mhe(system: &SetSystem, k: u64) -> Result<ReductionOutput> {
    let n = system.universe_size;
    let Some(first) = system.sets.first() else {
        return Err(HappyError::invalid("the set family is empty"));
    };
    let d = first.len();
    if let Some(j) = system.sets.iter().position(|s| s.len() != d) {
        return Err(HappyError::invalid(format!(
            "set {} has size {} but set 1 has size {d}",
            j + 1,
            system.sets[j].len()
        )));
    }
    if k == 0 || (d as u64) * k != n as u64 {
        return Err(HappyError::invalid(format!(
            "universe size {n} must equal k * d = {k} * {d} with k >= 1"
        )));
    }
    if let Some(e) = system.first_uncovered() {
        return Err(HappyError::invalid(format!(
            "element {e} is not covered by any set"
        )));
    }
    let mut b = Builder::default();
    let (elements, sets) = element_and_set_blocks(&mut b, system, |_| n);
    for (j, set) in system.sets.iter().enumerate() {
        for &e in set {
            for &s in &sets[j] {
                b.edge(elements[e - 1], s);
            }
        }
    }
    b.clique(&elements);
    let n64 = n as u64;
    let target = n64 * n64 + k * choose2(d as u64);
    let instance = b.finish(ProblemKind::Mhe, system.m() as Color, target)?;
    let guarantee = best_trivial(&instance)?;
    Ok(ReductionOutput {
        instance,
        source: Source::Brds {
            system: system.clone(),
            k,
        },
        mapper: Mapper {
            elements,
            sets,
            ..Mapper::default()
        },
        guarantee,
    })
}

/// Every vertex of a properly colored graph keeps its color, every edge is
/// subdivided by an uncolored vertex. A vertex set is independent in the
/// source iff it can be happy simultaneously in the gadget.
pub fn reduce_colored_graph_to_mhv_subdivision(
    source: &Graph,
    proper_coloring: &[Color],
    k: u64,
) -> Result<ReductionOutput> {
    let n = source.n();
    if proper_coloring.len() != n {
        return Err(HappyError::invalid(format!(
            "coloring has {} entries for {n} vertices",
            proper_coloring.len()
        )));
    }
    if proper_coloring.contains(&0) {
        return Err(HappyError::invalid("colors are 1-based"));
    }
    if let Some(&(u, v)) = source
        .edges()
        .iter()
        .find(|&&(u, v)| proper_coloring[u - 1] == proper_coloring[v - 1])
    {
        return Err(HappyError::invalid(format!(
            "coloring is not proper: edge ({u}, {v}) has both ends colored {}",
            proper_coloring[u - 1]
        )));
    }
    let mut b = Builder::default();
    let originals: Vec<Vertex> = proper_coloring.iter().map(|&c| b.vertex(Some(c))).collect();
    let mut subdivisions = Vec::with_capacity(source.m());
    for &(u, v) in source.edges() {
        let e = b.vertex(None);
        b.edge(originals[u - 1], e);
        b.edge(e, originals[v - 1]);
        subdivisions.push((u, v, e));
    }
    let ell = proper_coloring.iter().copied().max().unwrap_or(1);
    let instance = b.finish(ProblemKind::Mhv, ell, k)?;
    let guarantee = best_trivial(&instance)?;
    Ok(ReductionOutput {
        instance,
        source: Source::IndependentSet {
            graph: source.clone(),
            coloring: proper_coloring.to_vec(),
            k,
        },
        mapper: Mapper {
            originals,
            subdivisions,
            ..Mapper::default()
        },
        guarantee,
    })
}

/// `p(v) = v`: the proper coloring with a private color per vertex.
pub fn unique_coloring(n: usize) -> Vec<Color> {
    (1..=n).map(|v| v as Color).collect()
}

/// Exact 3-cover over `[3n]` to MHE above the trivial guarantee. The gadget
/// reaches `9n^2 + 3n - 1` happy edges by trivially extending with the guard
/// color, and one more edge exactly when an exact cover exists.
pub fn reduce_x3c_to_mhe_above_guarantee(n: usize, sets: &[Vec<usize>]) -> Result<ReductionOutput> {
    if n == 0 {
        return Err(HappyError::invalid("n must be positive"));
    }
    let original = SetSystem::new(3 * n, sets.to_vec())?;
    if let Some(j) = original.sets.iter().position(|s| s.len() != 3) {
        return Err(HappyError::invalid(format!(
            "set {} has {} elements, exact 3-cover needs 3",
            j + 1,
            original.sets[j].len()
        )));
    }
    if let Some(e) = original.first_uncovered() {
        return Err(HappyError::invalid(format!(
            "element {e} is not covered by any set"
        )));
    }
    let mut padded = original.clone();
    let mut big_n = n;
    if n.is_multiple_of(2) {
        let base = 3 * n;
        big_n = n + 1;
        padded.universe_size = 3 * big_n;
        padded.sets.push(vec![base + 1, base + 2, base + 3]);
    }
    let m = padded.m();
    let mut b = Builder::default();
    let (elements, set_blocks) = element_and_set_blocks(&mut b, &padded, |_| 3 * big_n);
    b.clique(&elements);
    for (j, set) in padded.sets.iter().enumerate() {
        for &e in set {
            for &s in &set_blocks[j] {
                b.edge(elements[e - 1], s);
            }
        }
    }
    let guard_color = color_of(m);
    let guards: Vec<Vertex> = (0..3 * (big_n + 1) / 2)
        .map(|_| b.vertex(Some(guard_color)))
        .collect();
    for (gi, &w) in guards.iter().enumerate() {
        for (ui, &u) in elements.iter().enumerate() {
            if gi == 0 && ui == 0 {
                continue;
            }
            b.edge(w, u);
        }
    }
    let nn = big_n as u64;
    let base = 9 * nn * nn + 3 * nn - 1;
    let instance = b.finish(ProblemKind::Mhe, guard_color, base + 1)?;
    let value = objective(&instance, &trivial_extension(&instance, guard_color)?);
    if value != base {
        return Err(HappyError::Internal(format!(
            "guard-color extension gives {value} happy edges, expected {base}"
        )));
    }
    Ok(ReductionOutput {
        instance,
        source: Source::X3c {
            n,
            sets: original.sets,
            padded: n != big_n,
        },
        mapper: Mapper {
            elements,
            sets: set_blocks,
            guards,
            ..Mapper::default()
        },
        guarantee: Guarantee {
            color: guard_color,
            value: base,
        },
    })
}

/// Builds the set-partitioning gadget without checking coverage: a clique on
/// the elements, `n^2 - floor((d-1)/2)` copies per set of size `d`; odd sets
/// join every element to every copy, even sets join their first half to
/// every copy and their second half to all copies but the last. Target
/// `n^3`.
pub fn build_set_partitioning_gadget(system: &SetSystem) -> Result<(Instance, Mapper)> {
    let n = system.universe_size;
    if n <= 2 {
        return Err(HappyError::invalid(format!(
            "universe size {n} must exceed 2"
        )));
    }
    if system.m() == 0 {
        return Err(HappyError::invalid("the set family is empty"));
    }
    if let Some(j) = system.sets.iter().position(|s| s.len() == 2) {
        return Err(HappyError::invalid(format!(
            "set {} has two elements; eliminate size-two sets first",
            j + 1
        )));
    }
    let copies = |j: usize| n * n - (system.sets[j].len() - 1) / 2;
    let mut b = Builder::default();
    let (elements, set_blocks) = element_and_set_blocks(&mut b, system, copies);
    b.clique(&elements);
    for (j, set) in system.sets.iter().enumerate() {
        let d = set.len();
        let block = &set_blocks[j];
        for (pos, &e) in set.iter().enumerate() {
            let reach = if d % 2 == 0 && pos >= d / 2 {
                block.len() - 1
            } else {
                block.len()
            };
            for &s in &block[..reach] {
                b.edge(elements[e - 1], s);
            }
        }
    }
    let n64 = n as u64;
    let instance = b.finish(ProblemKind::Mhe, system.m() as Color, n64 * n64 * n64)?;
    let mapper = Mapper {
        elements,
        sets: set_blocks,
        ..Mapper::default()
    };
    Ok((instance, mapper))
}

/// Set partitioning (no two-element sets) to MHE with target `n^3`.
pub fn reduce_set_partitioning_to_mhe(system: &SetSystem) -> Result<ReductionOutput> {
    if let Some(e) = system.first_uncovered() {
        return Err(HappyError::invalid(format!(
            "element {e} is not covered by any set"
        )));
    }
    let (instance, mapper) = build_set_partitioning_gadget(system)?;
    let guarantee = best_trivial(&instance)?;
    Ok(ReductionOutput {
        instance,
        source: Source::SetPartitioning {
            original: system.clone(),
            reduced: system.clone(),
            origins: (0..system.m()).map(|j| vec![j]).collect(),
        },
        mapper,
        guarantee,
    })
}

/// Eliminates two-element sets when present, then builds the gadget. The
/// back-mapping reports indices into `system`.
pub fn reduce_any_set_partitioning_to_mhe(system: &SetSystem) -> Result<ReductionOutput> {
    let elim = eliminate_size_two_sets_traced(system)?;
    let mut out = reduce_set_partitioning_to_mhe(&elim.system)?;
    out.source = Source::SetPartitioning {
        original: system.clone(),
        reduced: elim.system,
        origins: elim.origins,
    };
    Ok(out)
}
