//! Stand-alone oracles for the integration tests. They read instances only
//! through their raw edge list and precolor slots and recompute everything
//! else from scratch.

#![allow(dead_code)]

use happy_core::{Graph, Instance, Precoloring, ProblemKind};

/// `(n, edges, slots, ell)` of an instance, 0-based vertices.
pub struct Raw {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub slots: Vec<Option<u32>>,
    pub ell: u32,
    pub kind: ProblemKind,
}

impl Raw {
    pub fn of(instance: &Instance) -> Raw {
        Raw {
            n: instance.n(),
            edges: instance
                .graph
                .edges()
                .iter()
                .map(|&(u, v)| (u - 1, v - 1))
                .collect(),
            slots: instance.precoloring.slots().to_vec(),
            ell: instance.ell(),
            kind: instance.kind,
        }
    }

    /// Happy vertices as a bitmap over `0..n`.
    pub fn happy_vertices(&self, colors: &[u32]) -> Vec<bool> {
        let mut happy = vec![true; self.n];
        for &(u, v) in &self.edges {
            if colors[u] != colors[v] {
                happy[u] = false;
                happy[v] = false;
            }
        }
        happy
    }

    pub fn happy_edges(&self, colors: &[u32]) -> u64 {
        self.edges
            .iter()
            .filter(|&&(u, v)| colors[u] == colors[v])
            .count() as u64
    }

    pub fn value(&self, colors: &[u32]) -> u64 {
        match self.kind {
            ProblemKind::Mhv => self.happy_vertices(colors).iter().filter(|&&h| h).count() as u64,
            ProblemKind::Mhe => self.happy_edges(colors),
        }
    }

    /// Calls `visit` on every extension of the precoloring.
    pub fn for_each_extension(&self, mut visit: impl FnMut(&[u32])) {
        let free: Vec<usize> = (0..self.n).filter(|&v| self.slots[v].is_none()).collect();
        let mut colors: Vec<u32> = self.slots.iter().map(|c| c.unwrap_or(1)).collect();
        let total = (self.ell as u64).pow(free.len() as u32);
        for mut code in 0..total {
            for &v in &free {
                colors[v] = (code % self.ell as u64) as u32 + 1;
                code /= self.ell as u64;
            }
            visit(&colors);
        }
    }

    pub fn optimum(&self) -> u64 {
        let mut best = 0;
        self.for_each_extension(|c| best = best.max(self.value(c)));
        best
    }

    pub fn trivial_value(&self, color: u32) -> u64 {
        let colors: Vec<u32> = self.slots.iter().map(|c| c.unwrap_or(color)).collect();
        self.value(&colors)
    }

    /// Vertices whose closed neighbourhood carries exactly one distinct
    /// precolor.
    pub fn anchored(&self) -> Vec<usize> {
        let mut seen: Vec<Vec<u32>> = (0..self.n)
            .map(|v| self.slots[v].into_iter().collect())
            .collect();
        for &(u, v) in &self.edges {
            if let Some(c) = self.slots[v] {
                seen[u].push(c);
            }
            if let Some(c) = self.slots[u] {
                seen[v].push(c);
            }
        }
        (0..self.n)
            .filter(|&v| {
                let mut s = seen[v].clone();
                s.sort_unstable();
                s.dedup();
                s.len() == 1
            })
            .collect()
    }

    pub fn extension_count(&self) -> u64 {
        let free = self.slots.iter().filter(|s| s.is_none()).count() as u32;
        (self.ell as u64).saturating_pow(free)
    }
}

/// Instance from 1-based edges and precolor pairs.
pub fn instance(
    kind: ProblemKind,
    n: usize,
    ell: u32,
    edges: &[(usize, usize)],
    colors: &[(usize, u32)],
    k: u64,
) -> Instance {
    let g = Graph::new(n, edges.iter().copied()).unwrap();
    let p = Precoloring::new(n, ell, colors.iter().copied()).unwrap();
    Instance::new(kind, g, p, k).unwrap()
}

fn masks(sets: &[Vec<usize>]) -> Vec<u64> {
    sets.iter()
        .map(|s| s.iter().fold(0u64, |m, &e| m | 1 << (e - 1)))
        .collect()
}

/// Maximum total weight of pairwise disjoint sets, by subfamily enumeration.
pub fn packing_optimum(sets: &[Vec<usize>], weights: Option<&[u64]>) -> u64 {
    let ms = masks(sets);
    let mut best = 0;
    for family in 0u64..1 << sets.len() {
        let mut used = 0u64;
        let mut weight = 0;
        let mut ok = true;
        for (j, &m) in ms.iter().enumerate() {
            if family >> j & 1 == 1 {
                ok &= used & m == 0;
                used |= m;
                weight += weights.map_or(1, |w| w[j]);
            }
        }
        if ok {
            best = best.max(weight);
        }
    }
    best
}

/// Whether some subfamily partitions `[n]`.
pub fn has_partition(n: usize, sets: &[Vec<usize>]) -> bool {
    let ms = masks(sets);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0u64..1 << sets.len()).any(|family| {
        let mut used = 0u64;
        for (j, &m) in ms.iter().enumerate() {
            if family >> j & 1 == 1 {
                if used & m != 0 {
                    return false;
                }
                used |= m;
            }
        }
        used == full
    })
}

/// Independence number by subset enumeration (1-based edges).
pub fn independence_number(n: usize, edges: &[(usize, usize)]) -> u64 {
    (0u64..1 << n)
        .filter(|s| {
            edges
                .iter()
                .all(|&(u, v)| s >> (u - 1) & 1 == 0 || s >> (v - 1) & 1 == 0)
        })
        .map(|s| s.count_ones() as u64)
        .max()
        .unwrap_or(0)
}

/// All `size`-element subsets of `[n]`, ascending.
pub fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (1..=n).filter(|&e| m >> (e - 1) & 1 == 1).collect())
        .collect()
}

/// All non-empty subsets of `[n]`.
pub fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1..=n).flat_map(|s| subsets_of_size(n, s)).collect()
}

/// Every way to pick `m` items from `pool` with repetition (non-decreasing
/// index sequences).
pub fn multisets<T: Clone>(pool: &[T], m: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(pool: &[T], m: usize, from: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in from..pool.len() {
            cur.push(pool[i].clone());
            go(pool, m, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, m, 0, &mut Vec::new(), &mut out);
    out
}

/// Every way to pick `m` distinct items from `pool`.
pub fn combinations<T: Clone>(pool: &[T], m: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(pool: &[T], m: usize, from: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in from..pool.len() {
            cur.push(pool[i].clone());
            go(pool, m, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, m, 0, &mut Vec::new(), &mut out);
    out
}

pub fn covers(n: usize, sets: &[Vec<usize>]) -> bool {
    (1..=n).all(|e| sets.iter().any(|s| s.contains(&e)))
}
