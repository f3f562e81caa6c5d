//! Happiness bookkeeping: happy vertices and edges under a full coloring,
//! potentially happy vertices under a precoloring, and trivial extensions.

use std::collections::BTreeSet;

use crate::error::{HappyError, Result};
use crate::model::{Color, Coloring, Graph, Instance, Precoloring, ProblemKind, Vertex};

/// Vertices `v` whose neighbours all share `c(v)`. Isolated vertices are
/// always happy.
pub fn happy_vertices(graph: &Graph, coloring: &Coloring) -> BTreeSet<Vertex> {
    graph
        .vertices()
        .filter(|&v| is_happy_vertex(graph, coloring, v))
        .collect()
}

pub fn is_happy_vertex(graph: &Graph, coloring: &Coloring, v: Vertex) -> bool {
    let c = coloring.get(v);
    graph.neighbors(v).iter().all(|&u| coloring.get(u) == c)
}

pub fn count_happy_vertices(graph: &Graph, coloring: &Coloring) -> u64 {
    graph
        .vertices()
        .filter(|&v| is_happy_vertex(graph, coloring, v))
        .count() as u64
}

/// Edges whose endpoints share a color, in canonical edge order.
pub fn happy_edges(graph: &Graph, coloring: &Coloring) -> Vec<(Vertex, Vertex)> {
    graph
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| coloring.get(u) == coloring.get(v))
        .collect()
}

pub fn count_happy_edges(graph: &Graph, coloring: &Coloring) -> u64 {
    graph
        .edges()
        .iter()
        .filter(|&&(u, v)| coloring.get(u) == coloring.get(v))
        .count() as u64
}

/// Classification of a vertex with respect to a precoloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Potential {
    /// Two distinct precolors meet in the closed neighbourhood.
    Unhappy,
    /// Potentially happy, no precolor in the closed neighbourhood.
    Free,
    /// Potentially happy, and happy only when colored with this color.
    Anchored(Color),
}

/// The sets `H(G,p)`, `H_i(G,p)`, `P` and `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HappySets {
    ell: Color,
    status: Vec<Potential>,
}

impl HappySets {
    pub fn status(&self, v: Vertex) -> Potential {
        self.status[v - 1]
    }

    pub fn ell(&self) -> Color {
        self.ell
    }

    pub fn is_potentially_happy(&self, v: Vertex) -> bool {
        self.status[v - 1] != Potential::Unhappy
    }

    pub fn potentially_happy(&self) -> BTreeSet<Vertex> {
        self.select(|s| s != Potential::Unhappy)
    }

    /// `H_i(G,p)`: potentially happy vertices whose closed neighbourhood
    /// contains a vertex precolored `color`.
    pub fn per_color(&self, color: Color) -> BTreeSet<Vertex> {
        self.select(|s| s == Potential::Anchored(color))
    }

    /// `P`, the union of all `H_i`.
    pub fn anchored(&self) -> BTreeSet<Vertex> {
        self.select(|s| matches!(s, Potential::Anchored(_)))
    }

    /// `U = H(G,p) \ P`.
    pub fn free(&self) -> BTreeSet<Vertex> {
        self.select(|s| s == Potential::Free)
    }

    /// `h = |H(G,p)|`.
    pub fn h(&self) -> usize {
        self.status
            .iter()
            .filter(|&&s| s != Potential::Unhappy)
            .count()
    }

    fn select(&self, pred: impl Fn(Potential) -> bool) -> BTreeSet<Vertex> {
        self.status
            .iter()
            .enumerate()
            .filter(|(_, &s)| pred(s))
            .map(|(i, _)| i + 1)
            .collect()
    }
}

pub fn compute_happy_sets(graph: &Graph, precoloring: &Precoloring) -> HappySets {
    let active = vec![true; graph.n()];
    happy_sets_on(graph, precoloring.slots(), precoloring.ell(), &active)
}

/// Same as [`compute_happy_sets`] restricted to the subgraph induced by the
/// `active` vertices. Inactive vertices are reported as `Unhappy`.
pub(crate) fn happy_sets_on(
    graph: &Graph,
    slots: &[Option<Color>],
    ell: Color,
    active: &[bool],
) -> HappySets {
    let status = graph
        .vertices()
        .map(|v| {
            if !active[v - 1] {
                return Potential::Unhappy;
            }
            let mut seen: Option<Color> = slots[v - 1];
            for &u in graph.neighbors(v) {
                if !active[u - 1] {
                    continue;
                }
                if let Some(c) = slots[u - 1] {
                    match seen {
                        None => seen = Some(c),
                        Some(s) if s != c => return Potential::Unhappy,
                        Some(_) => {}
                    }
                }
            }
            match seen {
                Some(c) => Potential::Anchored(c),
                None => Potential::Free,
            }
        })
        .collect();
    HappySets { ell, status }
}

/// Extends the precoloring by giving every uncolored vertex `color`.
pub fn trivial_extension(instance: &Instance, color: Color) -> Result<Coloring> {
    if color == 0 || color > instance.ell() {
        return Err(HappyError::invalid(format!(
            "extension color {color} outside palette 1..={}",
            instance.ell()
        )));
    }
    Ok(Coloring::from_vec(
        instance
            .precoloring
            .slots()
            .iter()
            .map(|c| c.unwrap_or(color))
            .collect(),
    ))
}

/// Objective value of `coloring`: happy vertices for MHV, happy edges for MHE.
pub fn evaluate(instance: &Instance, coloring: &Coloring) -> Result<u64> {
    instance.check_extension(coloring)?;
    Ok(objective(instance, coloring))
}

/// [`evaluate`] without the extension check.
pub(crate) fn objective(instance: &Instance, coloring: &Coloring) -> u64 {
    match instance.kind {
        ProblemKind::Mhv => count_happy_vertices(&instance.graph, coloring),
        ProblemKind::Mhe => count_happy_edges(&instance.graph, coloring),
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

/// Colors forced by requiring every vertex of `set` to be happy.
///
/// Each closed neighbourhood `N[v]`, `v` in `set`, must be monochromatic, so
/// the vertices they touch fall into classes that share one color. The set is
/// simultaneously satisfiable iff no class holds two distinct precolors.
/// Returns `None` in that case, otherwise per-vertex forced colors, where
/// `Some(None)` marks a constrained class with no precolor (any single color
/// works) and `None` marks an unconstrained vertex.
pub(crate) fn forced_colors(
    instance: &Instance,
    set: &BTreeSet<Vertex>,
) -> Option<Vec<Option<Option<Color>>>> {
    let n = instance.n();
    let graph = &instance.graph;
    let mut dsu = Dsu::new(n);
    let mut touched = vec![false; n];
    for &v in set {
        touched[v - 1] = true;
        for &u in graph.neighbors(v) {
            touched[u - 1] = true;
            dsu.union(v - 1, u - 1);
        }
    }
    let mut class_color: Vec<Option<Color>> = vec![None; n];
    for (i, &p) in instance.precoloring.slots().iter().enumerate() {
        if !touched[i] {
            continue;
        }
        if let Some(c) = p {
            let r = dsu.find(i);
            match class_color[r] {
                None => class_color[r] = Some(c),
                Some(d) if d != c => return None,
                Some(_) => {}
            }
        }
    }
    Some(
        (0..n)
            .map(|i| touched[i].then(|| class_color[dsu.find(i)]))
            .collect(),
    )
}

/// A coloring under which every vertex of `set` is happy, or `None` when the
/// set cannot be happy simultaneously. Vertices not pinned by `set` receive a
/// single filler color chosen to maximise the objective (lowest on ties).
pub fn coloring_for_happy_set(instance: &Instance, set: &BTreeSet<Vertex>) -> Option<Coloring> {
    let forced = forced_colors(instance, set)?;
    let mut best: Option<(u64, Coloring)> = None;
    for filler in 1..=instance.ell() {
        let colors = forced
            .iter()
            .zip(instance.precoloring.slots())
            .map(|(f, p)| match (p, f) {
                (Some(c), _) => *c,
                (None, Some(Some(c))) => *c,
                _ => filler,
            })
            .collect();
        let coloring = Coloring::from_vec(colors);
        let value = objective(instance, &coloring);
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, coloring));
        }
    }
    best.map(|(_, c)| c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProblemKind;

    fn coloring(c: &[Color]) -> Coloring {
        Coloring::from_vec(c.to_vec())
    }

    fn triangle() -> Graph {
        Graph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    fn path3() -> Graph {
        Graph::new(3, [(1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn happy_vertex_examples() {
        assert_eq!(
            happy_vertices(&triangle(), &coloring(&[1, 1, 1])),
            BTreeSet::from([1, 2, 3])
        );
        let edge = Graph::new(2, [(1, 2)]).unwrap();
        assert!(happy_vertices(&edge, &coloring(&[1, 2])).is_empty());
        assert_eq!(
            happy_vertices(&path3(), &coloring(&[1, 1, 2])),
            BTreeSet::from([1])
        );
        // isolated vertex is happy whatever its color
        let g = Graph::new(2, []).unwrap();
        assert_eq!(happy_vertices(&g, &coloring(&[1, 2])).len(), 2);
    }

    #[test]
    fn happy_edge_examples() {
        assert_eq!(happy_edges(&triangle(), &coloring(&[1, 1, 1])).len(), 3);
        let edge = Graph::new(2, [(1, 2)]).unwrap();
        assert!(happy_edges(&edge, &coloring(&[1, 2])).is_empty());
        assert_eq!(happy_edges(&path3(), &coloring(&[1, 1, 2])), vec![(1, 2)]);
    }

    #[test]
    fn happy_sets_path_with_two_precolors() {
        let p = Precoloring::new(3, 2, [(1, 1), (3, 2)]).unwrap();
        let hs = compute_happy_sets(&path3(), &p);
        assert_eq!(hs.potentially_happy(), BTreeSet::from([1, 3]));
        assert_eq!(hs.per_color(1), BTreeSet::from([1]));
        assert_eq!(hs.per_color(2), BTreeSet::from([3]));
        assert!(hs.free().is_empty());
        assert_eq!(hs.h(), 2);
    }

    #[test]
    fn happy_sets_uncolored_triangle() {
        let p = Precoloring::uncolored(3, 2).unwrap();
        let hs = compute_happy_sets(&triangle(), &p);
        assert_eq!(hs.potentially_happy(), BTreeSet::from([1, 2, 3]));
        assert!(hs.per_color(1).is_empty() && hs.per_color(2).is_empty());
        assert_eq!(hs.free(), BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn happy_sets_star() {
        let star = Graph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        let p = Precoloring::new(4, 2, [(1, 1)]).unwrap();
        let hs = compute_happy_sets(&star, &p);
        assert_eq!(hs.h(), 4);
        assert_eq!(hs.per_color(1), BTreeSet::from([1, 2, 3, 4]));
        assert!(hs.free().is_empty());
    }

    #[test]
    fn precolored_vertex_with_conflicting_neighbour() {
        let edge = Graph::new(2, [(1, 2)]).unwrap();
        let p = Precoloring::new(2, 2, [(1, 1), (2, 2)]).unwrap();
        assert_eq!(compute_happy_sets(&edge, &p).h(), 0);
    }

    fn star_instance() -> Instance {
        let star = Graph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        let p = Precoloring::new(4, 2, [(1, 1)]).unwrap();
        Instance::new(ProblemKind::Mhv, star, p, 4).unwrap()
    }

    #[test]
    fn trivial_extension_examples() {
        let inst = star_instance();
        assert_eq!(
            trivial_extension(&inst, 1).unwrap().as_slice(),
            &[1, 1, 1, 1]
        );
        assert_eq!(
            trivial_extension(&inst, 2).unwrap().as_slice(),
            &[1, 2, 2, 2]
        );
        assert!(matches!(
            trivial_extension(&inst, 3),
            Err(HappyError::InvalidArgument(_))
        ));
        assert!(trivial_extension(&inst, 0).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let tri = Instance::new(
            ProblemKind::Mhv,
            triangle(),
            Precoloring::uncolored(3, 1).unwrap(),
            0,
        )
        .unwrap();
        assert_eq!(evaluate(&tri, &coloring(&[1, 1, 1])).unwrap(), 3);

        let edge = Instance::new(
            ProblemKind::Mhe,
            Graph::new(2, [(1, 2)]).unwrap(),
            Precoloring::uncolored(2, 2).unwrap(),
            0,
        )
        .unwrap();
        assert_eq!(evaluate(&edge, &coloring(&[1, 2])).unwrap(), 0);

        let path = Instance::new(
            ProblemKind::Mhv,
            path3(),
            Precoloring::uncolored(3, 2).unwrap(),
            0,
        )
        .unwrap();
        assert_eq!(evaluate(&path, &coloring(&[1, 1, 2])).unwrap(), 1);

        let star = star_instance();
        assert!(matches!(
            evaluate(&star, &coloring(&[2, 2, 2, 2])),
            Err(HappyError::ContractViolation(_))
        ));
    }

    #[test]
    fn happy_set_coloring() {
        let inst = star_instance();
        let c = coloring_for_happy_set(&inst, &BTreeSet::from([1, 2, 3, 4])).unwrap();
        assert_eq!(c.as_slice(), &[1, 1, 1, 1]);

        let p = Precoloring::new(3, 2, [(1, 1), (3, 2)]).unwrap();
        let inst = Instance::new(ProblemKind::Mhv, path3(), p, 1).unwrap();
        let c = coloring_for_happy_set(&inst, &BTreeSet::from([1])).unwrap();
        assert_eq!(c.as_slice(), &[1, 1, 2]);
        assert!(coloring_for_happy_set(&inst, &BTreeSet::from([1, 3])).is_none());
        assert!(coloring_for_happy_set(&inst, &BTreeSet::from([2])).is_none());
    }
}
