//! Maximum Happy Vertices: the randomized `guess_answer` procedure with its
//! repetition wrapper, the best trivial extension, and two exact oracles.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{HappyError, Result};
use crate::happy::{
    coloring_for_happy_set, compute_happy_sets, happy_sets_on, objective, trivial_extension,
    Potential,
};
use crate::model::{Coloring, Instance, ProblemKind, Vertex};
use crate::solve::{brute_force, Outcome, SolveResult, SolveStats};

fn require_mhv(instance: &Instance) -> Result<()> {
    if instance.kind != ProblemKind::Mhv {
        return Err(HappyError::invalid(format!(
            "solver handles mhv instances only, got {}",
            instance.kind
        )));
    }
    Ok(())
}

/// Exhaustive optimum over all `ell^{n'}` extensions.
pub fn mhv_brute_force(instance: &Instance, budget: u64) -> Result<SolveResult> {
    require_mhv(instance)?;
    brute_force(instance, budget)
}

/// Exact optimum by searching subsets of the potentially happy vertices for
/// the largest simultaneously satisfiable one. Costs `2^h` satisfiability
/// checks instead of `ell^{n'}` evaluations, which is what makes gadgets with
/// many colors but few potentially happy vertices tractable.
pub fn mhv_happy_subset_search(instance: &Instance, budget: u64) -> Result<SolveResult> {
    require_mhv(instance)?;
    let start = Instant::now();
    let candidates: Vec<Vertex> = compute_happy_sets(&instance.graph, &instance.precoloring)
        .potentially_happy()
        .into_iter()
        .collect();
    let h = candidates.len();
    if h >= 64 || (1u64 << h) > budget {
        return Err(HappyError::ResourceLimit(format!(
            "2^{h} candidate subsets exceed the enumeration budget {budget}"
        )));
    }
    let mut best_size = 0usize;
    let mut best_set = BTreeSet::new();
    let mut calls = 0u64;
    for mask in 1u64..(1u64 << h) {
        let size = mask.count_ones() as usize;
        if size <= best_size {
            continue;
        }
        calls += 1;
        let set: BTreeSet<Vertex> = (0..h)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| candidates[i])
            .collect();
        if crate::happy::forced_colors(instance, &set).is_some() {
            best_size = size;
            best_set = set;
        }
    }
    let certificate = coloring_for_happy_set(instance, &best_set)
        .ok_or_else(|| HappyError::Internal("satisfiable set lost its coloring".into()))?;
    let value = objective(instance, &certificate);
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

/// Output of one run of the guess procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guess {
    /// Vertices that can be happy simultaneously.
    pub happy: BTreeSet<Vertex>,
    /// Anchored vertices picked at random, in pick order.
    pub picks: Vec<Vertex>,
}

/// One run of the randomized guess procedure.
///
/// Works on a copy of `(G, p)`: while the target exceeds the free set `U`,
/// pick a uniformly random anchored vertex `v` (anchored to color `i`),
/// delete it, force every remaining neighbour to `i`, and decrement the
/// target. Stops with `U` added once the target fits, or with nothing added
/// once no anchored vertex is left.
pub fn guess_answer<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Guess {
    let graph = &instance.graph;
    let ell = instance.ell();
    let mut slots = instance.precoloring.slots().to_vec();
    let mut active = vec![true; graph.n()];
    let mut target = instance.k;
    let mut picks = Vec::new();
    loop {
        let sets = happy_sets_on(graph, &slots, ell, &active);
        let free = sets.free();
        if target <= free.len() as u64 {
            let mut happy: BTreeSet<Vertex> = picks.iter().copied().collect();
            happy.extend(free);
            return Guess { happy, picks };
        }
        let anchored: Vec<Vertex> = sets.anchored().into_iter().collect();
        if anchored.is_empty() {
            let happy = picks.iter().copied().collect();
            return Guess { happy, picks };
        }
        let v = anchored[rng.gen_range(0..anchored.len())];
        let Potential::Anchored(color) = sets.status(v) else {
            unreachable!("anchored vertex without a color");
        };
        slots[v - 1] = None;
        active[v - 1] = false;
        for &u in graph.neighbors(v) {
            if active[u - 1] {
                debug_assert!(slots[u - 1].is_none_or(|c| c == color));
                slots[u - 1] = Some(color);
            }
        }
        picks.push(v);
        target -= 1;
    }
}

/// Turns a set produced by [`guess_answer`] into a coloring extending the
/// precoloring under which all of its vertices are happy.
pub fn reconstruct_coloring(instance: &Instance, happy_set: &BTreeSet<Vertex>) -> Result<Coloring> {
    coloring_for_happy_set(instance, happy_set).ok_or_else(|| {
        HappyError::Internal(format!(
            "vertex set {happy_set:?} cannot be happy simultaneously"
        ))
    })
}

/// `ceil(3 * ell^k)`, saturating.
pub fn default_repetitions(ell: u32, k: u64) -> u64 {
    let k = u32::try_from(k).unwrap_or(u32::MAX);
    (ell as u64)
        .checked_pow(k)
        .and_then(|p| p.checked_mul(3))
        .unwrap_or(u64::MAX)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomizedConfig {
    pub seed: u64,
    /// `None` means [`default_repetitions`].
    pub repetitions: Option<u64>,
    /// Run repetitions on the rayon pool. The answer does not depend on it.
    pub parallel: bool,
}

impl RandomizedConfig {
    pub fn new(seed: u64) -> Self {
        RandomizedConfig {
            seed,
            repetitions: None,
            parallel: false,
        }
    }

    pub fn with_repetitions(mut self, reps: u64) -> Self {
        self.repetitions = Some(reps);
        self
    }

    pub fn effective_repetitions(&self, instance: &Instance) -> Result<u64> {
        let reps = self
            .repetitions
            .unwrap_or_else(|| default_repetitions(instance.ell(), instance.k));
        if reps == 0 {
            return Err(HappyError::invalid("repetitions must be at least 1"));
        }
        Ok(reps)
    }
}

/// Generator for repetition `rep`: the ChaCha stream `rep` under `seed`.
pub fn repetition_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

struct Attempt {
    success: Option<(Coloring, u64)>,
    depth: u64,
}

fn attempt(instance: &Instance, seed: u64, rep: u64) -> Result<Attempt> {
    let guess = guess_answer(instance, &mut repetition_rng(seed, rep));
    let coloring = reconstruct_coloring(instance, &guess.happy)?;
    let value = objective(instance, &coloring);
    Ok(Attempt {
        success: (value >= instance.k).then_some((coloring, value)),
        depth: guess.picks.len() as u64,
    })
}

/// Repeats [`guess_answer`] and answers yes on the first repetition whose
/// reconstructed coloring reaches `k`. A yes always carries a verified
/// certificate, so no-instances are never accepted.
pub fn mhv_randomized(instance: &Instance, config: &RandomizedConfig) -> Result<SolveResult> {
    require_mhv(instance)?;
    let start = Instant::now();
    let reps = config.effective_repetitions(instance)?;
    let seed = config.seed;

    let (found, calls, depth) = if config.parallel {
        let found = (0..reps)
            .into_par_iter()
            .map(|rep| attempt(instance, seed, rep).map(|a| (rep, a)))
            .find_map_first(|r| match r {
                Ok((rep, a)) => a.success.map(|s| Ok((rep, s, a.depth))),
                Err(e) => Some(Err(e)),
            })
            .transpose()?;
        match found {
            Some((rep, s, depth)) => (Some(s), rep + 1, depth),
            None => (None, reps, 0),
        }
    } else {
        let mut depth = 0;
        let mut found = None;
        let mut calls = 0;
        for rep in 0..reps {
            calls += 1;
            let a = attempt(instance, seed, rep)?;
            depth = depth.max(a.depth);
            if let Some(s) = a.success {
                found = Some(s);
                break;
            }
        }
        (found, calls, depth)
    };

    let stats = SolveStats {
        calls,
        depth,
        elapsed: start.elapsed(),
        seed: Some(seed),
    };
    Ok(match found {
        Some((coloring, value)) => SolveResult {
            outcome: Outcome::Decision(true),
            certificate: Some(coloring),
            value: Some(value),
            stats,
        },
        None => SolveResult {
            outcome: Outcome::Decision(false),
            certificate: None,
            value: None,
            stats,
        },
    })
}

/// Best of the `ell` trivial extensions, lowest color on ties. Works for
/// both problem kinds.
pub fn best_trivial_extension(instance: &Instance) -> Result<SolveResult> {
    let start = Instant::now();
    let mut best: Option<(u64, Coloring)> = None;
    for color in 1..=instance.ell() {
        let c = trivial_extension(instance, color)?;
        let v = objective(instance, &c);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, c));
        }
    }
    let (value, certificate) = best.expect("palette is non-empty");
    Ok(SolveResult {
        outcome: Outcome::Achieved(value),
        certificate: Some(certificate),
        value: Some(value),
        stats: SolveStats {
            calls: instance.ell() as u64,
            depth: 0,
            elapsed: start.elapsed(),
            seed: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Graph, Precoloring};

    fn star(k: u64) -> Instance {
        let g = Graph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        let p = Precoloring::new(4, 2, [(1, 1)]).unwrap();
        Instance::new(ProblemKind::Mhv, g, p, k).unwrap()
    }

    fn conflicting_edge(k: u64) -> Instance {
        let g = Graph::new(2, [(1, 2)]).unwrap();
        let p = Precoloring::new(2, 2, [(1, 1), (2, 2)]).unwrap();
        Instance::new(ProblemKind::Mhv, g, p, k).unwrap()
    }

    fn split_path() -> Instance {
        let g = Graph::new(3, [(1, 2), (2, 3)]).unwrap();
        let p = Precoloring::new(3, 2, [(1, 1), (3, 2)]).unwrap();
        Instance::new(ProblemKind::Mhv, g, p, 1).unwrap()
    }

    #[test]
    fn brute_force_examples() {
        let r = mhv_brute_force(&star(4), 1000).unwrap();
        assert_eq!(r.optimum(), Some(4));
        assert_eq!(r.stats.calls, 8);
        assert_eq!(
            mhv_brute_force(&conflicting_edge(1), 1000)
                .unwrap()
                .optimum(),
            Some(0)
        );
        assert!(mhv_brute_force(&star(4).with_kind(ProblemKind::Mhe), 1000).is_err());
    }

    #[test]
    fn subset_search_matches_brute_force_on_examples() {
        for inst in [star(4), conflicting_edge(1), split_path()] {
            let a = mhv_brute_force(&inst, 1000).unwrap();
            let b = mhv_happy_subset_search(&inst, 1000).unwrap();
            assert_eq!(a.optimum(), b.optimum());
        }
    }

    #[test]
    fn star_guess_always_succeeds() {
        let inst = star(4);
        for seed in 0..50 {
            let g = guess_answer(&inst, &mut repetition_rng(seed, 0));
            assert_eq!(g.happy, BTreeSet::from([1, 2, 3, 4]));
        }
    }

    #[test]
    fn zero_target_returns_free_set() {
        let g = Graph::new(3, [(1, 2)]).unwrap();
        let p = Precoloring::new(3, 2, [(1, 1)]).unwrap();
        let inst = Instance::new(ProblemKind::Mhv, g, p, 0).unwrap();
        let guess = guess_answer(&inst, &mut repetition_rng(1, 0));
        assert_eq!(guess.happy, BTreeSet::from([3]));
        assert!(guess.picks.is_empty());
    }

    #[test]
    fn empty_anchor_set_returns_nothing() {
        // no potentially happy vertex at all: P and U are empty
        let guess = guess_answer(&conflicting_edge(1), &mut repetition_rng(3, 0));
        assert!(guess.happy.is_empty());
    }

    #[test]
    fn reconstruct_examples() {
        let inst = star(4);
        let c = reconstruct_coloring(&inst, &BTreeSet::new()).unwrap();
        assert!(inst.check_extension(&c).is_ok());
        let c = reconstruct_coloring(&inst, &BTreeSet::from([1, 2, 3, 4])).unwrap();
        assert_eq!(c.as_slice(), &[1, 1, 1, 1]);
        let c = reconstruct_coloring(&split_path(), &BTreeSet::from([1])).unwrap();
        assert_eq!(c.as_slice(), &[1, 1, 2]);
        assert!(matches!(
            reconstruct_coloring(&split_path(), &BTreeSet::from([1, 3])),
            Err(HappyError::Internal(_))
        ));
    }

    #[test]
    fn randomized_examples() {
        for seed in 0..10 {
            let r = mhv_randomized(&conflicting_edge(1), &RandomizedConfig::new(seed)).unwrap();
            assert_eq!(r.outcome, Outcome::Decision(false));
            assert!(r.certificate.is_none());
        }
        let r = mhv_randomized(&star(4), &RandomizedConfig::new(7)).unwrap();
        assert_eq!(r.outcome, Outcome::Decision(true));
        assert_eq!(r.value, Some(4));
        let r = mhv_randomized(&star(0), &RandomizedConfig::new(7)).unwrap();
        assert!(r.is_yes(0));
        assert!(r.certificate.is_some());
        assert!(mhv_randomized(&star(1), &RandomizedConfig::new(0).with_repetitions(0)).is_err());
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let inst = split_path();
        for seed in 0..20 {
            let seq = mhv_randomized(&inst, &RandomizedConfig::new(seed)).unwrap();
            let par = mhv_randomized(
                &inst,
                &RandomizedConfig {
                    parallel: true,
                    ..RandomizedConfig::new(seed)
                },
            )
            .unwrap();
            assert_eq!(seq.outcome, par.outcome);
            assert_eq!(seq.certificate, par.certificate);
            assert_eq!(seq.stats.calls, par.stats.calls);
        }
    }

    #[test]
    fn default_repetition_count() {
        assert_eq!(default_repetitions(2, 4), 48);
        assert_eq!(default_repetitions(3, 0), 3);
        assert_eq!(default_repetitions(3, 100), u64::MAX);
    }

    #[test]
    fn trivial_extension_examples() {
        let g = Graph::new(3, [(1, 2), (2, 3)]).unwrap();
        let inst = Instance::new(
            ProblemKind::Mhv,
            g,
            Precoloring::uncolored(3, 2).unwrap(),
            0,
        )
        .unwrap();
        assert_eq!(best_trivial_extension(&inst).unwrap().value, Some(3));

        let r = best_trivial_extension(&star(4)).unwrap();
        assert_eq!(r.value, Some(4));
        assert_eq!(r.certificate.unwrap().as_slice(), &[1, 1, 1, 1]);

        assert_eq!(
            best_trivial_extension(&split_path()).unwrap().value,
            Some(1)
        );
    }
}
