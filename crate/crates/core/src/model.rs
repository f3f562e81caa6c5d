//! Precolored graphs and problem instances.
//!
//! Vertices are dense 1-based indices `1..=n` and colors are 1-based
//! indices `1..=ell`. Every type here is immutable once built; the
//! constructors reject anything that breaks an invariant.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HappyError, Result};

/// 1-based vertex index.
pub type Vertex = usize;
/// 1-based color index.
pub type Color = u32;

/// Simple undirected graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted, each pair stored as `(u, v)` with `u < v`.
    edges: Vec<(Vertex, Vertex)>,
    /// `adj[v - 1]` holds the sorted neighbours of `v`.
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and
    /// out-of-range endpoints. Endpoint order within a pair is irrelevant.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(HappyError::invalid(format!("self-loop at vertex {a}")));
            }
            for x in [a, b] {
                if x == 0 || x > n {
                    return Err(HappyError::invalid(format!(
                        "vertex {x} out of range 1..={n}"
                    )));
                }
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(HappyError::invalid(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u - 1].push(v);
            adj[v - 1].push(u);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: list,
            adj,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v - 1].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        1..=self.n
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v
            && u >= 1
            && u <= self.n
            && v >= 1
            && v <= self.n
            && self.adj[u - 1].binary_search(&v).is_ok()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 1..=self.n {
            if seen[s - 1] {
                continue;
            }
            seen[s - 1] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &u in self.neighbors(v) {
                    if !seen[u - 1] {
                        seen[u - 1] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on `keep` (must be sorted and distinct). Vertex
    /// `keep[i]` becomes `i + 1`.
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut index = vec![0usize; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v - 1] = i + 1;
        }
        let edges = self.edges.iter().filter_map(|&(u, v)| {
            let (a, b) = (index[u - 1], index[v - 1]);
            (a != 0 && b != 0).then_some((a, b))
        });
        Graph::new(keep.len(), edges).expect("induced subgraph of a simple graph is simple")
    }
}

/// Partial map vertex -> color over a palette of `ell` colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precoloring {
    ell: Color,
    assigned: Vec<Option<Color>>,
}

impl Precoloring {
    pub fn new(
        n: usize,
        ell: Color,
        pairs: impl IntoIterator<Item = (Vertex, Color)>,
    ) -> Result<Self> {
        if ell == 0 {
            return Err(HappyError::invalid("palette size must be at least 1"));
        }
        let mut assigned = vec![None; n];
        for (v, c) in pairs {
            if v == 0 || v > n {
                return Err(HappyError::invalid(format!(
                    "precolored vertex {v} out of range 1..={n}"
                )));
            }
            if c == 0 || c > ell {
                return Err(HappyError::invalid(format!(
                    "color {c} of vertex {v} out of palette 1..={ell}"
                )));
            }
            if assigned[v - 1].is_some() {
                return Err(HappyError::invalid(format!("vertex {v} precolored twice")));
            }
            assigned[v - 1] = Some(c);
        }
        Ok(Precoloring { ell, assigned })
    }

    pub fn uncolored(n: usize, ell: Color) -> Result<Self> {
        Precoloring::new(n, ell, std::iter::empty())
    }

    pub(crate) fn from_slots(ell: Color, assigned: Vec<Option<Color>>) -> Self {
        debug_assert!(assigned.iter().flatten().all(|&c| c >= 1 && c <= ell));
        Precoloring { ell, assigned }
    }

    pub fn ell(&self) -> Color {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.assigned.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assigned.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Option<Color> {
        self.assigned[v - 1]
    }

    pub fn slots(&self) -> &[Option<Color>] {
        &self.assigned
    }

    /// Precolored vertices in ascending order, with their colors.
    pub fn assigned(&self) -> impl Iterator<Item = (Vertex, Color)> + '_ {
        self.assigned
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|c| (i + 1, c)))
    }

    pub fn uncolored_vertices(&self) -> Vec<Vertex> {
        self.assigned
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_none())
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Number of uncolored vertices (n').
    pub fn uncolored_count(&self) -> usize {
        self.assigned.iter().filter(|c| c.is_none()).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// Maximum Happy Vertices.
    Mhv,
    /// Maximum Happy Edges.
    Mhe,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Mhv => "mhv",
            ProblemKind::Mhe => "mhe",
        })
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = HappyError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mhv" => Ok(ProblemKind::Mhv),
            "mhe" => Ok(ProblemKind::Mhe),
            other => Err(HappyError::invalid(format!(
                "unknown problem kind `{other}` (expected mhv or mhe)"
            ))),
        }
    }
}

/// A decision instance `(kind, G, p, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub kind: ProblemKind,
    pub graph: Graph,
    pub precoloring: Precoloring,
    pub k: u64,
}

impl Instance {
    pub fn new(kind: ProblemKind, graph: Graph, precoloring: Precoloring, k: u64) -> Result<Self> {
        if precoloring.len() != graph.n() {
            return Err(HappyError::invalid(format!(
                "precoloring covers {} vertices but the graph has {}",
                precoloring.len(),
                graph.n()
            )));
        }
        Ok(Instance {
            kind,
            graph,
            precoloring,
            k,
        })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn ell(&self) -> Color {
        self.precoloring.ell()
    }

    pub fn with_k(&self, k: u64) -> Instance {
        Instance { k, ..self.clone() }
    }

    pub fn with_kind(&self, kind: ProblemKind) -> Instance {
        Instance {
            kind,
            ..self.clone()
        }
    }

    /// Checks that `coloring` is total, inside the palette and agrees with
    /// the precoloring.
    pub fn check_extension(&self, coloring: &Coloring) -> Result<()> {
        if coloring.len() != self.n() {
            return Err(HappyError::ContractViolation(format!(
                "coloring has {} entries, instance has {} vertices",
                coloring.len(),
                self.n()
            )));
        }
        for v in self.graph.vertices() {
            let c = coloring.get(v);
            if c == 0 || c > self.ell() {
                return Err(HappyError::ContractViolation(format!(
                    "vertex {v} has color {c} outside 1..={}",
                    self.ell()
                )));
            }
            if let Some(p) = self.precoloring.get(v) {
                if p != c {
                    return Err(HappyError::ContractViolation(format!(
                        "vertex {v} is precolored {p} but colored {c}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Total coloring `V(G) -> [ell]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    /// `colors[i]` is the color of vertex `i + 1`.
    pub fn from_vec(colors: Vec<Color>) -> Self {
        Coloring { colors }
    }

    pub fn get(&self, v: Vertex) -> Color {
        self.colors[v - 1]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.colors
    }

    pub fn into_vec(self) -> Vec<Color> {
        self.colors
    }
}
