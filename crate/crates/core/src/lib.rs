//! Group closeness maximization on unweighted, undirected graphs.
//!
//! The main entry points are [`greedy::greedy_pp`] (pruned BFS gains with
//! lazy candidate skipping) and [`bitgreedy::bit_greedy_pp`] (gains from
//! level bit vectors). Both return a group whose closeness is within a
//! factor `1 - 1/e` of the optimum; [`exact`] provides the optimum for small
//! instances and an LP export for external solvers.

pub mod baselines;
pub mod bitgreedy;
pub mod closeness;
pub mod error;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod greedy;

pub use baselines::{degree_group, greedy_reference, overlap_percent, overlap_report, topk_group, OverlapReport};
pub use bitgreedy::{bit_greedy_pp, BitGreedyOptions, BitLevelState};
pub use closeness::{bfs_cut, closeness, top_k_closeness, Closeness, CutOutcome, TopK};
pub use error::{GcmError, Result};
pub use exact::{approximation_ratio, exact_group_enumeration, export_ilp, ExactResult};
pub use graph::{
    bfs_distances, largest_connected_component, load_edge_list, DistanceArray, Graph, IngestReport, LoadOptions,
};
pub use greedy::{greedy_pp, group_closeness, pruned_sssp_gain, DistanceToSet, GreedyOptions, GroupResult};
