//! Set systems, the size-two elimination step, and small exhaustive solvers
//! for the source problems (packing, partitioning, independent set).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{HappyError, Result};
use crate::model::{Graph, Vertex};

/// A family of non-empty subsets of the universe `[n] = {1, ..., n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetSystem {
    pub universe_size: usize,
    /// Each set sorted ascending, without repeated elements.
    pub sets: Vec<Vec<usize>>,
    /// Optional positive weight per set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u64>>,
}

impl SetSystem {
    pub fn new(universe_size: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(sets.len());
        for (j, mut set) in sets.into_iter().enumerate() {
            if set.is_empty() {
                return Err(HappyError::invalid(format!("set {} is empty", j + 1)));
            }
            set.sort_unstable();
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(HappyError::invalid(format!(
                    "set {} repeats an element",
                    j + 1
                )));
            }
            if let Some(&e) = set.iter().find(|&&e| e == 0 || e > universe_size) {
                return Err(HappyError::invalid(format!(
                    "element {e} of set {} outside universe 1..={universe_size}",
                    j + 1
                )));
            }
            normalized.push(set);
        }
        Ok(SetSystem {
            universe_size,
            sets: normalized,
            weights: None,
        })
    }

    pub fn with_weights(mut self, weights: Vec<u64>) -> Result<Self> {
        if weights.len() != self.sets.len() {
            return Err(HappyError::invalid(format!(
                "{} weights for {} sets",
                weights.len(),
                self.sets.len()
            )));
        }
        if let Some(j) = weights.iter().position(|&w| w == 0) {
            return Err(HappyError::invalid(format!(
                "weight of set {} must be positive",
                j + 1
            )));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn weight(&self, j: usize) -> u64 {
        self.weights.as_ref().map_or(1, |w| w[j])
    }

    /// First element of the universe contained in no set.
    pub fn first_uncovered(&self) -> Option<usize> {
        let mut covered = vec![false; self.universe_size + 1];
        for set in &self.sets {
            for &e in set {
                covered[e] = true;
            }
        }
        (1..=self.universe_size).find(|&e| !covered[e])
    }

    fn masks(&self) -> Result<Vec<u128>> {
        if self.universe_size > 128 {
            return Err(HappyError::ResourceLimit(format!(
                "universe of {} elements is too large for the exhaustive source solvers",
                self.universe_size
            )));
        }
        Ok(self
            .sets
            .iter()
            .map(|s| s.iter().fold(0u128, |acc, &e| acc | 1 << (e - 1)))
            .collect())
    }

    fn full_mask(&self) -> u128 {
        if self.universe_size == 128 {
            u128::MAX
        } else {
            (1u128 << self.universe_size) - 1
        }
    }
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_err())
}

fn union_of(parts: &[&[usize]]) -> Vec<usize> {
    let mut out: Vec<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    out.sort_unstable();
    out
}

/// Result of removing two-element sets, with provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub system: SetSystem,
    /// Indices of the input sets whose disjoint union forms each output set.
    pub origins: Vec<Vec<usize>>,
}

/// Replaces every two-element set by its disjoint unions with other input
/// sets (two-element ones included) and by disjoint triples of two-element
/// sets. Partitionability of the universe is unchanged. Weights are dropped.
pub fn eliminate_size_two_sets(system: &SetSystem) -> Result<SetSystem> {
    Ok(eliminate_size_two_sets_traced(system)?.system)
}

pub fn eliminate_size_two_sets_traced(system: &SetSystem) -> Result<Elimination> {
    if system.universe_size <= 2 {
        return Err(HappyError::invalid(format!(
            "universe size {} must exceed 2",
            system.universe_size
        )));
    }
    let sets = &system.sets;
    let pairs: Vec<usize> = (0..sets.len()).filter(|&j| sets[j].len() == 2).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut origins: Vec<Vec<usize>> = Vec::new();
    for (j, s) in sets.iter().enumerate() {
        if s.len() != 2 {
            out.push(s.clone());
            origins.push(vec![j]);
        }
    }
    let mut seen: BTreeSet<Vec<usize>> = out.iter().cloned().collect();
    let mut push = |set: Vec<usize>, from: Vec<usize>, out: &mut Vec<Vec<usize>>| {
        if seen.insert(set.clone()) {
            out.push(set);
            origins.push(from);
        }
    };
    for (i, s) in sets.iter().enumerate() {
        for &j in &pairs {
            if i != j && disjoint(s, &sets[j]) {
                push(union_of(&[s, &sets[j]]), vec![i, j], &mut out);
            }
        }
    }
    for (a, &x) in pairs.iter().enumerate() {
        for (b, &y) in pairs.iter().enumerate().skip(a + 1) {
            if !disjoint(&sets[x], &sets[y]) {
                continue;
            }
            for &z in &pairs[b + 1..] {
                if disjoint(&sets[x], &sets[z]) && disjoint(&sets[y], &sets[z]) {
                    push(
                        union_of(&[&sets[x], &sets[y], &sets[z]]),
                        vec![x, y, z],
                        &mut out,
                    );
                }
            }
        }
    }
    Ok(Elimination {
        system: SetSystem {
            universe_size: system.universe_size,
            sets: out,
            weights: None,
        },
        origins,
    })
}

fn check_family_budget(m: usize, budget: u64) -> Result<()> {
    if m >= 64 || (1u64 << m) > budget {
        return Err(HappyError::ResourceLimit(format!(
            "2^{m} set subfamilies exceed the enumeration budget {budget}"
        )));
    }
    Ok(())
}

/// Pairwise disjoint subfamily of maximum total weight (count when
/// unweighted). Returns the weight and the chosen indices.
pub fn max_set_packing(system: &SetSystem, budget: u64) -> Result<(u64, Vec<usize>)> {
    check_family_budget(system.m(), budget)?;
    let masks = system.masks()?;
    fn go(
        j: usize,
        used: u128,
        acc: u64,
        masks: &[u128],
        system: &SetSystem,
        chosen: &mut Vec<usize>,
        best: &mut (u64, Vec<usize>),
    ) {
        if acc > best.0 {
            *best = (acc, chosen.clone());
        }
        if j == masks.len() {
            return;
        }
        if masks[j] & used == 0 {
            chosen.push(j);
            go(
                j + 1,
                used | masks[j],
                acc + system.weight(j),
                masks,
                system,
                chosen,
                best,
            );
            chosen.pop();
        }
        go(j + 1, used, acc, masks, system, chosen, best);
    }
    let mut best = (0, Vec::new());
    go(0, 0, 0, &masks, system, &mut Vec::new(), &mut best);
    Ok(best)
}

/// Some family of pairwise disjoint sets whose union is the whole universe.
pub fn find_partition(system: &SetSystem, budget: u64) -> Result<Option<Vec<usize>>> {
    check_family_budget(system.m(), budget)?;
    let masks = system.masks()?;
    let full = system.full_mask();
    fn go(covered: u128, full: u128, masks: &[u128], chosen: &mut Vec<usize>) -> bool {
        if covered == full {
            return true;
        }
        let low = (!covered & full).trailing_zeros();
        for (j, &m) in masks.iter().enumerate() {
            if m >> low & 1 == 1 && m & covered == 0 {
                chosen.push(j);
                if go(covered | m, full, masks, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    Ok(go(0, full, &masks, &mut chosen).then_some(chosen))
}

pub fn is_partition(system: &SetSystem, chosen: &[usize]) -> bool {
    let mut hit = vec![0u32; system.universe_size + 1];
    for &j in chosen {
        match system.sets.get(j) {
            Some(s) => s.iter().for_each(|&e| hit[e] += 1),
            None => return false,
        }
    }
    (1..=system.universe_size).all(|e| hit[e] == 1)
}

pub fn is_packing(system: &SetSystem, chosen: &[usize]) -> bool {
    let mut hit = vec![false; system.universe_size + 1];
    let mut distinct = BTreeSet::new();
    for &j in chosen {
        let Some(s) = system.sets.get(j) else {
            return false;
        };
        if !distinct.insert(j) {
            return false;
        }
        for &e in s {
            if std::mem::replace(&mut hit[e], true) {
                return false;
            }
        }
    }
    true
}

/// Maximum independent set by include/exclude branching.
pub fn max_independent_set(graph: &Graph, budget: u64) -> Result<BTreeSet<Vertex>> {
    let n = graph.n();
    if n >= 64 || (1u64 << n) > budget {
        return Err(HappyError::ResourceLimit(format!(
            "2^{n} vertex subsets exceed the enumeration budget {budget}"
        )));
    }
    fn go(
        v: usize,
        graph: &Graph,
        blocked: &mut Vec<u32>,
        current: &mut Vec<Vertex>,
        best: &mut Vec<Vertex>,
    ) {
        if current.len() + (graph.n() + 1 - v) <= best.len() {
            return;
        }
        if v > graph.n() {
            *best = current.clone();
            return;
        }
        if blocked[v - 1] == 0 {
            current.push(v);
            for &u in graph.neighbors(v) {
                blocked[u - 1] += 1;
            }
            go(v + 1, graph, blocked, current, best);
            for &u in graph.neighbors(v) {
                blocked[u - 1] -= 1;
            }
            current.pop();
        }
        go(v + 1, graph, blocked, current, best);
    }
    let mut best = Vec::new();
    go(1, graph, &mut vec![0; n], &mut Vec::new(), &mut best);
    Ok(best.into_iter().collect())
}

pub fn is_independent(graph: &Graph, set: &BTreeSet<Vertex>) -> bool {
    set.iter()
        .all(|&v| v >= 1 && v <= graph.n() && graph.neighbors(v).iter().all(|u| !set.contains(u)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, sets: &[&[usize]]) -> SetSystem {
        SetSystem::new(n, sets.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(SetSystem::new(3, vec![vec![]]).is_err());
        assert!(SetSystem::new(3, vec![vec![4]]).is_err());
        assert!(SetSystem::new(3, vec![vec![1, 1]]).is_err());
        assert!(sys(3, &[&[1]]).with_weights(vec![0]).is_err());
        assert_eq!(sys(3, &[&[3, 1]]).sets, vec![vec![1, 3]]);
        assert_eq!(sys(3, &[&[1, 2]]).first_uncovered(), Some(3));
    }

    #[test]
    fn elimination_examples() {
        let e = eliminate_size_two_sets(&sys(4, &[&[1, 2], &[3, 4]])).unwrap();
        assert_eq!(e.sets, vec![vec![1, 2, 3, 4]]);
        assert!(find_partition(&e, 1 << 20).unwrap().is_some());

        let same = sys(4, &[&[1, 2, 3], &[4]]);
        assert_eq!(eliminate_size_two_sets(&same).unwrap().sets, same.sets);

        let e = eliminate_size_two_sets(&sys(3, &[&[1, 2], &[1, 3]])).unwrap();
        assert!(e.sets.is_empty());

        assert!(eliminate_size_two_sets(&sys(2, &[&[1, 2]])).is_err());
    }

    #[test]
    fn elimination_triples_and_origins() {
        let e = eliminate_size_two_sets_traced(&sys(6, &[&[1, 2], &[3, 4], &[5, 6]])).unwrap();
        assert!(e.system.sets.iter().all(|s| s.len() != 2));
        let full = e.system.sets.iter().position(|s| s.len() == 6).unwrap();
        assert_eq!(e.origins[full], vec![0, 1, 2]);
        for (s, o) in e.system.sets.iter().zip(&e.origins) {
            let mut u: Vec<usize> = o.iter().flat_map(|&j| e_sets()[j].clone()).collect();
            u.sort_unstable();
            assert_eq!(&u, s);
        }
        fn e_sets() -> Vec<Vec<usize>> {
            vec![vec![1, 2], vec![3, 4], vec![5, 6]]
        }
    }

    #[test]
    fn packing_and_partition() {
        let s = sys(4, &[&[1, 2], &[2, 3], &[3, 4]]);
        let (v, chosen) = max_set_packing(&s, 1 << 20).unwrap();
        assert_eq!(v, 2);
        assert!(is_packing(&s, &chosen));
        assert_eq!(find_partition(&s, 1 << 20).unwrap(), Some(vec![0, 2]));
        let w = s.clone().with_weights(vec![1, 5, 1]).unwrap();
        assert_eq!(max_set_packing(&w, 1 << 20).unwrap().0, 5);
        assert_eq!(
            find_partition(&sys(3, &[&[1, 2], &[2, 3]]), 1 << 20).unwrap(),
            None
        );
        assert!(!is_partition(&s, &[0, 1]));
        assert!(!is_packing(&s, &[0, 0]));
    }

    #[test]
    fn independent_sets() {
        let tri = Graph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(max_independent_set(&tri, 1 << 20).unwrap().len(), 1);
        let path = Graph::new(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        let is = max_independent_set(&path, 1 << 20).unwrap();
        assert_eq!(is.len(), 2);
        assert!(is_independent(&path, &is));
        assert!(!is_independent(&path, &BTreeSet::from([1, 2])));
    }
}
