//! Solvers, kernelization and hardness gadgets for Maximum Happy Vertices
//! and Maximum Happy Edges on precolored graphs.

pub mod bench;
pub mod cli;
pub mod error;
pub mod happy;
pub mod io;
pub mod mhe;
pub mod mhv;
pub mod model;
pub mod reductions;
pub mod runner;
pub mod solve;

pub use error::{HappyError, Result};
pub use happy::{
    compute_happy_sets, count_happy_edges, count_happy_vertices, evaluate, happy_edges,
    happy_vertices, trivial_extension, HappySets, Potential,
};
pub use mhe::{kernelize_mhe, mhe_brute_force, mhe_optimum, mhe_solve, mhe_subset_dp};
pub use mhv::{
    guess_answer, mhv_brute_force, mhv_happy_subset_search, mhv_randomized, RandomizedConfig,
};
pub use model::{Color, Coloring, Graph, Instance, Precoloring, ProblemKind, Vertex};
pub use solve::{Limits, Outcome, SolveResult, SolveStats};
