//! Maximum Happy Edges: the uncolored-component reduction rule, the
//! resulting kernel with fewer uncolored vertices than the target, and an
//! exact dynamic program over subsets of uncolored vertices.

use std::collections::VecDeque;
use std::time::Instant;

use crate::error::{HappyError, Result};
use crate::happy::objective;
use crate::model::{Color, Coloring, Instance, Precoloring, ProblemKind, Vertex};
use crate::solve::{brute_force, Limits, Outcome, SolveResult, SolveStats};

fn require_mhe(instance: &Instance) -> Result<()> {
    if instance.kind != ProblemKind::Mhe {
        return Err(HappyError::invalid(format!(
            "solver handles mhe instances only, got {}",
            instance.kind
        )));
    }
    Ok(())
}

/// Exhaustive optimum over all `ell^{n'}` extensions.
pub fn mhe_brute_force(instance: &Instance, budget: u64) -> Result<SolveResult> {
    require_mhe(instance)?;
    brute_force(instance, budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovedComponent {
    /// Vertices in the original numbering.
    pub vertices: Vec<Vertex>,
    pub edges: u64,
}

/// The instance left after removing every all-uncolored component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleApplication {
    /// Remaining graph, renumbered densely; its `k` is `max(0, k')`.
    pub reduced: Instance,
    /// `kept[i]` is the original vertex behind reduced vertex `i + 1`.
    pub kept: Vec<Vertex>,
    pub removed: Vec<RemovedComponent>,
    /// Edges credited against the target.
    pub credited: u64,
    /// `k - credited`, may be negative.
    pub remaining_target: i64,
}

impl RuleApplication {
    /// Lifts a coloring of the reduced instance back to the original one,
    /// painting every removed component with color 1.
    pub fn lift(&self, original: &Instance, reduced_coloring: &Coloring) -> Coloring {
        let mut colors = vec![1; original.n()];
        for (i, &v) in self.kept.iter().enumerate() {
            colors[v - 1] = reduced_coloring.get(i + 1);
        }
        Coloring::from_vec(colors)
    }
}

/// Applies the reduction rule exhaustively. One pass suffices: deleting a
/// component never merges or splits the others.
pub fn apply_component_rule(instance: &Instance) -> RuleApplication {
    let graph = &instance.graph;
    let pre = &instance.precoloring;
    let mut removed = Vec::new();
    let mut drop = vec![false; graph.n()];
    for comp in graph.components() {
        if comp.iter().all(|&v| pre.get(v).is_none()) {
            let edges = comp.iter().map(|&v| graph.degree(v) as u64).sum::<u64>() / 2;
            for &v in &comp {
                drop[v - 1] = true;
            }
            removed.push(RemovedComponent {
                vertices: comp,
                edges,
            });
        }
    }
    let kept: Vec<Vertex> = graph.vertices().filter(|&v| !drop[v - 1]).collect();
    let credited: u64 = removed.iter().map(|c| c.edges).sum();
    let remaining_target = instance.k as i64 - credited as i64;
    let reduced_graph = graph.induced(&kept);
    let slots = kept.iter().map(|&v| pre.get(v)).collect();
    let reduced = Instance::new(
        instance.kind,
        reduced_graph,
        Precoloring::from_slots(pre.ell(), slots),
        remaining_target.max(0) as u64,
    )
    .expect("reduced instance is consistent");
    RuleApplication {
        reduced,
        kept,
        removed,
        credited,
        remaining_target,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelStatus {
    /// The rule output is a yes-instance; the certificate colors the
    /// original instance.
    ResolvedYes { certificate: Coloring },
    /// The reduced instance has fewer uncolored vertices than its target.
    Reduced,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelResult {
    pub status: KernelStatus,
    pub application: RuleApplication,
}

impl KernelResult {
    pub fn reduced_instance(&self) -> Option<&Instance> {
        match self.status {
            KernelStatus::Reduced => Some(&self.application.reduced),
            KernelStatus::ResolvedYes { .. } => None,
        }
    }

    pub fn k_reduction(&self) -> u64 {
        self.application.credited
    }
}

/// Colors each uncolored vertex with the color of an already colored
/// neighbour, breadth-first from the precolored vertices. Every uncolored
/// vertex reached this way adds one happy edge. Vertices in all-uncolored
/// components are left at color 1.
pub fn greedy_propagation(instance: &Instance) -> Coloring {
    let graph = &instance.graph;
    let mut colors: Vec<Option<Color>> = instance.precoloring.slots().to_vec();
    let mut queue: VecDeque<Vertex> = instance.precoloring.assigned().map(|(v, _)| v).collect();
    while let Some(v) = queue.pop_front() {
        let c = colors[v - 1];
        for &u in graph.neighbors(v) {
            if colors[u - 1].is_none() {
                colors[u - 1] = c;
                queue.push_back(u);
            }
        }
    }
    Coloring::from_vec(colors.into_iter().map(|c| c.unwrap_or(1)).collect())
}

/// Runs the reduction rule and decides whether the result is already a
/// yes-instance (target used up, or at least as many uncolored vertices as
/// remaining target).
pub fn kernelize_mhe(instance: &Instance) -> Result<KernelResult> {
    require_mhe(instance)?;
    let application = apply_component_rule(instance);
    let uncolored = application.reduced.precoloring.uncolored_count() as i64;
    let k_rem = application.remaining_target;
    let status = if k_rem <= 0 || uncolored >= k_rem {
        let reduced_cert = greedy_propagation(&application.reduced);
        let certificate = application.lift(instance, &reduced_cert);
        let value = objective(instance, &certificate);
        if value < instance.k {
            return Err(HappyError::Internal(format!(
                "greedy kernel certificate reaches {value} < k = {}",
                instance.k
            )));
        }
        KernelStatus::ResolvedYes { certificate }
    } else {
        KernelStatus::Reduced
    };
    Ok(KernelResult {
        status,
        application,
    })
}

/// Subset-DP tables for one instance.
struct SubsetDp {
    /// Uncolored vertices; bit `i` of a mask stands for `free[i]`.
    free: Vec<Vertex>,
    /// `best[T]`: happy edges inside `T` plus edges from `T` to the best
    /// single precolor class when all of `T` takes that color.
    best: Vec<u32>,
    /// `f[S]`: optimal happy-edge count attributable to `S`.
    f: Vec<u32>,
}

impl SubsetDp {
    fn build(instance: &Instance) -> (Self, u64) {
        let graph = &instance.graph;
        let pre = &instance.precoloring;
        let free = pre.uncolored_vertices();
        let w = free.len();
        let full = 1usize << w;
        let mut index = vec![usize::MAX; graph.n()];
        for (i, &v) in free.iter().enumerate() {
            index[v - 1] = i;
        }
        let mut adj_mask = vec![0usize; w];
        // (color, count) of precolored neighbours per uncolored vertex
        let mut color_counts: Vec<Vec<(Color, u32)>> = vec![Vec::new(); w];
        for (i, &v) in free.iter().enumerate() {
            for &u in graph.neighbors(v) {
                match pre.get(u) {
                    None => adj_mask[i] |= 1 << index[u - 1],
                    Some(c) => match color_counts[i].iter_mut().find(|(d, _)| *d == c) {
                        Some(entry) => entry.1 += 1,
                        None => color_counts[i].push((c, 1)),
                    },
                }
            }
        }
        let mut colors: Vec<Color> = color_counts.iter().flatten().map(|&(c, _)| c).collect();
        colors.sort_unstable();
        colors.dedup();

        let mut best = vec![0u32; full];
        for t in 1..full {
            let low = t.trailing_zeros() as usize;
            let rest = t & (t - 1);
            best[t] = best[rest] + (adj_mask[low] & rest).count_ones();
        }
        // add max over colors of edges into that precolor class
        {
            let mut gain = vec![0u32; full];
            let mut acc = vec![0u32; full];
            for &c in &colors {
                let per_vertex: Vec<u32> = color_counts
                    .iter()
                    .map(|cc| cc.iter().find(|(d, _)| *d == c).map_or(0, |e| e.1))
                    .collect();
                for t in 1..full {
                    let low = t.trailing_zeros() as usize;
                    acc[t] = acc[t & (t - 1)] + per_vertex[low];
                    if acc[t] > gain[t] {
                        gain[t] = acc[t];
                    }
                }
            }
            for t in 0..full {
                best[t] += gain[t];
            }
        }

        let mut f = vec![0u32; full];
        let mut calls = 0u64;
        for s in 1..full {
            let low = s & s.wrapping_neg();
            let rest = s ^ low;
            // every T ⊆ S containing the lowest element of S
            let mut sub = rest;
            let mut top = 0u32;
            loop {
                let t = sub | low;
                calls += 1;
                let v = best[t] + f[s ^ t];
                if v > top {
                    top = v;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            f[s] = top;
        }
        (SubsetDp { free, best, f }, calls)
    }

    /// Partition of all uncolored vertices realising `f[full]`. Among optimal
    /// parts containing the lowest remaining vertex, the numerically smallest
    /// mask wins.
    fn partition(&self) -> Vec<usize> {
        let mut parts = Vec::new();
        let mut s = (1usize << self.free.len()) - 1;
        while s != 0 {
            let low = s & s.wrapping_neg();
            let rest = s ^ low;
            let mut choice = None;
            // ascending enumeration of submasks of `rest`
            let mut sub = 0usize;
            loop {
                let t = sub | low;
                if self.best[t] + self.f[s ^ t] == self.f[s] {
                    choice = Some(t);
                    break;
                }
                if sub == rest {
                    break;
                }
                sub = (sub.wrapping_sub(rest)) & rest;
            }
            let t = choice.expect("optimal part exists");
            parts.push(t);
            s ^= t;
        }
        parts
    }
}

/// Exact MHE optimum via dynamic programming over subsets of the uncolored
/// vertices, `O(3^{n'})` time.
pub fn mhe_subset_dp(instance: &Instance, max_width: usize) -> Result<SolveResult> {
    require_mhe(instance)?;
    let start = Instant::now();
    let width = instance.precoloring.uncolored_count();
    if width > max_width {
        return Err(HappyError::ResourceLimit(format!(
            "{width} uncolored vertices exceed the subset DP width limit {max_width}"
        )));
    }
    let graph = &instance.graph;
    let pre = &instance.precoloring;
    let fixed: u64 = graph
        .edges()
        .iter()
        .filter(|&&(u, v)| matches!((pre.get(u), pre.get(v)), (Some(a), Some(b)) if a == b))
        .count() as u64;

    let (dp, calls) = SubsetDp::build(instance);
    let optimum = fixed + dp.f[(1usize << width) - 1] as u64;

    let mut colors: Vec<Color> = pre.slots().iter().map(|c| c.unwrap_or(0)).collect();
    for part in dp.partition() {
        let members: Vec<Vertex> = (0..width)
            .filter(|&i| part >> i & 1 == 1)
            .map(|i| dp.free[i])
            .collect();
        let color = best_color_for(instance, &members);
        for v in members {
            colors[v - 1] = color;
        }
    }
    let certificate = Coloring::from_vec(colors);
    let value = objective(instance, &certificate);
    if value != optimum {
        return Err(HappyError::Internal(format!(
            "subset DP certificate reaches {value}, table says {optimum}"
        )));
    }
    Ok(SolveResult {
        outcome: Outcome::Optimum(optimum),
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

/// Color maximising edges from `members` into precolored vertices; lowest
/// color on ties.
fn best_color_for(instance: &Instance, members: &[Vertex]) -> Color {
    let mut count = vec![0u32; instance.ell() as usize + 1];
    for &v in members {
        for &u in instance.graph.neighbors(v) {
            if let Some(c) = instance.precoloring.get(u) {
                count[c as usize] += 1;
            }
        }
    }
    let mut best = 1;
    for c in 2..=instance.ell() {
        if count[c as usize] > count[best as usize] {
            best = c;
        }
    }
    best
}

/// Decision pipeline: kernelize, then (unless resolved) solve the reduced
/// instance with the subset DP and lift its certificate back.
pub fn mhe_solve(instance: &Instance, limits: &Limits) -> Result<SolveResult> {
    require_mhe(instance)?;
    let start = Instant::now();
    let kernel = kernelize_mhe(instance)?;
    let app = &kernel.application;
    match kernel.status {
        KernelStatus::ResolvedYes { certificate } => {
            let value = objective(instance, &certificate);
            Ok(SolveResult {
                outcome: Outcome::Decision(true),
                certificate: Some(certificate),
                value: Some(value),
                stats: SolveStats {
                    calls: 0,
                    depth: 0,
                    elapsed: start.elapsed(),
                    seed: None,
                },
            })
        }
        KernelStatus::Reduced => {
            let inner = mhe_subset_dp(&app.reduced, limits.max_dp_width)?;
            let reduced_cert = inner.certificate.expect("dp always certifies");
            let certificate = app.lift(instance, &reduced_cert);
            let optimum = inner.value.expect("dp always certifies") + app.credited;
            let value = objective(instance, &certificate);
            if value != optimum {
                return Err(HappyError::Internal(format!(
                    "lifted certificate reaches {value}, expected {optimum}"
                )));
            }
            Ok(SolveResult {
                outcome: Outcome::Optimum(optimum),
                certificate: Some(certificate),
                value: Some(value),
                stats: SolveStats {
                    calls: inner.stats.calls,
                    depth: 0,
                    elapsed: start.elapsed(),
                    seed: None,
                },
            })
        }
    }
}

/// Exact optimum through the rule and the subset DP, never stopping early
/// at the kernel's yes-resolution.
pub fn mhe_optimum(instance: &Instance, limits: &Limits) -> Result<SolveResult> {
    require_mhe(instance)?;
    let start = Instant::now();
    let app = apply_component_rule(instance);
    let inner = mhe_subset_dp(&app.reduced, limits.max_dp_width)?;
    let certificate = app.lift(instance, inner.certificate.as_ref().expect("dp certifies"));
    let value = objective(instance, &certificate);
    Ok(SolveResult {
        outcome: Outcome::Optimum(value),
        certificate: Some(certificate),
        value: Some(value),
        stats: SolveStats {
            calls: inner.stats.calls,
            depth: 0,
            elapsed: start.elapsed(),
            seed: None,
        },
    })
}
