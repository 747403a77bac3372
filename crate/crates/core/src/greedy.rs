//! Greedy group closeness maximization with pruned BFS gains and lazy
//! (submodular) candidate skipping.
//!
//! The objective is tracked as the integer distance sum
//! `sum_{v not in S} d(S, v)`; the closeness of the group is
//! `(n - |S|) / distance_sum`. For a fixed group size, maximizing closeness
//! and maximizing the distance-sum reduction ("gain") pick the same node.
//!
//! Node selection is deterministic: the candidate with the largest gain
//! wins, ties going to the smallest node id. Lazy skipping only discards
//! candidates that provably cannot win under that rule, so lazy and eager
//! runs, and runs with any thread count, select identical groups.

use std::cmp::Reverse;

use serde::Serialize;

use crate::closeness::{top_k_closeness, NodeScore};
use crate::error::{GcmError, Result};
use crate::graph::{multi_source_bfs, require_connected, Graph, UNREACHABLE};

/// Current distance from every node to a growing group.
#[derive(Clone, Debug)]
pub struct DistanceToSet {
    dist: Vec<u32>,
    total: u64,
    members: Vec<usize>,
}

impl DistanceToSet {
    /// Distances to `members` via one multi-source BFS.
    pub fn new(g: &Graph, members: &[usize]) -> Result<Self> {
        if members.is_empty() {
            return Err(GcmError::UndefinedMeasure("group must not be empty"));
        }
        let mut seen = vec![false; g.n()];
        let mut unique = Vec::with_capacity(members.len());
        for &s in members {
            g.check_node(s)?;
            if !seen[s] {
                seen[s] = true;
                unique.push(s);
            }
        }
        let dist = multi_source_bfs(g, &unique);
        if dist.contains(&UNREACHABLE) {
            return Err(GcmError::Disconnected {
                components: crate::graph::connected_components(g).0,
            });
        }
        let total = dist.iter().map(|&d| d as u64).sum();
        Ok(DistanceToSet {
            dist,
            total,
            members: unique,
        })
    }

    pub fn dist(&self) -> &[u32] {
        &self.dist
    }

    /// Sum of distances of all non-members to the group.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, u: usize) -> bool {
        self.dist[u] == 0
    }

    /// Adds `s` to the group with one full BFS from `s`. Returns the gain.
    pub fn augment(&mut self, g: &Graph, s: usize) -> Result<u64> {
        g.check_node(s)?;
        if self.contains(s) {
            return Err(GcmError::AlreadyMember(s));
        }
        let from_s = multi_source_bfs(g, &[s]);
        let mut gain = 0u64;
        for (cur, &d) in self.dist.iter_mut().zip(&from_s) {
            if d < *cur {
                gain += (*cur - d) as u64;
                *cur = d;
            }
        }
        self.total -= gain;
        self.members.push(s);
        Ok(gain)
    }
}

/// Distance sum and closeness of a fixed group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupScore {
    pub n: usize,
    pub size: usize,
    pub distance_sum: u64,
}

impl GroupScore {
    pub fn score(&self) -> f64 {
        (self.n - self.size) as f64 / self.distance_sum as f64
    }
}

pub fn group_closeness(g: &Graph, group: &[usize]) -> Result<GroupScore> {
    let ds = DistanceToSet::new(g, group)?;
    if ds.members.len() == g.n() {
        return Err(GcmError::UndefinedMeasure("group must not contain every node"));
    }
    Ok(GroupScore {
        n: g.n(),
        size: ds.members.len(),
        distance_sum: ds.total,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrunedGain {
    /// Reduction of the group distance sum if the candidate joined.
    pub gain: u64,
    /// Nodes dequeued by the pruned BFS.
    pub visited: u64,
}

/// Scratch buffers for pruned BFS runs.
pub(crate) struct PrunedBfs {
    mark: Vec<u32>,
    stamp: u32,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl PrunedBfs {
    pub(crate) fn new(n: usize) -> Self {
        PrunedBfs {
            mark: vec![0; n],
            stamp: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    /// BFS from `u` that does not expand any node `w` with
    /// `d(u, w) >= dist[w]`: no node below it in the BFS tree can be closer
    /// to `u` than to the group.
    pub(crate) fn gain(&mut self, g: &Graph, u: usize, dist: &[u32]) -> PrunedGain {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.fill(0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        self.frontier.clear();
        self.frontier.push(u as u32);
        self.mark[u] = stamp;

        let mut gain = 0u64;
        let mut visited = 0u64;
        let mut depth = 0u32;
        while !self.frontier.is_empty() {
            self.next.clear();
            for &w in &self.frontier {
                visited += 1;
                let dw = dist[w as usize];
                if depth >= dw {
                    continue;
                }
                gain += (dw - depth) as u64;
                for &x in g.neighbors(w as usize) {
                    if self.mark[x as usize] != stamp {
                        self.mark[x as usize] = stamp;
                        self.next.push(x);
                    }
                }
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
            depth += 1;
        }
        PrunedGain { gain, visited }
    }
}

/// Gain of adding `u` to the group, computed by a pruned BFS from `u`.
pub fn pruned_sssp_gain(g: &Graph, u: usize, ds: &DistanceToSet) -> Result<PrunedGain> {
    g.check_node(u)?;
    if ds.contains(u) {
        return Err(GcmError::AlreadyMember(u));
    }
    Ok(PrunedBfs::new(g.n()).gain(g, u, &ds.dist))
}

#[derive(Clone, Copy, Debug)]
pub struct GreedyOptions {
    pub lazy: bool,
    pub threads: usize,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions {
            lazy: true,
            threads: 1,
        }
    }
}

/// Per-iteration record of a greedy run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IterationTrace {
    pub node: usize,
    /// Distance-sum reduction achieved by `node`; `None` for the seed, which
    /// is the top closeness node.
    pub gain: Option<u64>,
    /// Candidates whose gain was (re)computed this iteration.
    pub evaluated: u64,
    /// Candidates skipped this iteration (lazy skips or top-k cuts).
    pub skipped: u64,
    /// Nodes reached by the gain traversals of this iteration (pruned BFS,
    /// level-wise top-k BFS for the seed, or vector updates for the
    /// bit-parallel solver). The full BFS that adds the chosen node is not
    /// counted.
    pub visited: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupResult {
    pub n: usize,
    pub group: Vec<usize>,
    pub distance_sum: u64,
    pub gain_trace: Vec<IterationTrace>,
    /// Peak memory of the level bit vectors, for the bit-parallel solver.
    pub peak_vector_bytes: Option<u64>,
}

impl GroupResult {
    pub fn k(&self) -> usize {
        self.group.len()
    }

    pub fn score(&self) -> f64 {
        (self.n - self.group.len()) as f64 / self.distance_sum as f64
    }

    pub fn total_visited(&self) -> u64 {
        self.gain_trace.iter().map(|t| t.visited).sum()
    }

    pub fn total_evaluated(&self) -> u64 {
        self.gain_trace.iter().map(|t| t.evaluated).sum()
    }

    pub fn total_skipped(&self) -> u64 {
        self.gain_trace.iter().map(|t| t.skipped).sum()
    }
}

/// Previous-iteration gains. By submodularity a node's gain never grows,
/// so `prev_gain[u]` bounds its current gain from above.
#[derive(Clone, Debug)]
pub struct GainCache {
    pub prev_gain: Vec<u64>,
    /// Iteration in which `prev_gain` was last refreshed (0 = never).
    pub stamp: Vec<u32>,
}

impl GainCache {
    fn new(n: usize) -> Self {
        GainCache {
            prev_gain: vec![u64::MAX; n],
            stamp: vec![0; n],
        }
    }

    /// Candidates in evaluation order: largest cached gain first, then id.
    fn order(&self, ds: &DistanceToSet) -> Vec<usize> {
        let mut cand: Vec<usize> = (0..ds.dist.len()).filter(|&u| !ds.contains(u)).collect();
        cand.sort_by_key(|&u| (Reverse(self.prev_gain[u]), u));
        cand
    }
}

/// Best `(gain, node)` so far under "larger gain, then smaller id".
#[derive(Clone, Copy, Debug)]
pub(crate) struct Best {
    pub gain: u64,
    pub node: usize,
}

impl Best {
    pub(crate) fn offer(best: &mut Option<Best>, gain: u64, node: usize) {
        match best {
            Some(b) if gain < b.gain || (gain == b.gain && node > b.node) => {}
            _ => *best = Some(Best { gain, node }),
        }
    }

    /// True if a candidate with gain at most `bound` cannot win.
    pub(crate) fn dominates(best: Option<Best>, bound: u64, node: usize) -> bool {
        match best {
            Some(b) => bound < b.gain || (bound == b.gain && node > b.node),
            None => false,
        }
    }
}

pub(crate) fn check_k(g: &Graph, k: usize) -> Result<()> {
    let n = g.n();
    if n < 2 || k == 0 || k >= n {
        return Err(GcmError::InvalidK {
            k,
            min: 1,
            max: n.saturating_sub(1),
        });
    }
    Ok(())
}

/// Seeds the group with the top closeness node.
pub(crate) fn seed(g: &Graph) -> Result<(DistanceToSet, IterationTrace)> {
    let top = top_k_closeness(g, 1)?;
    let s0 = top.ranking[0].0;
    let cut = top.state.scores.iter().filter(|s| **s == NodeScore::Cut).count() as u64;
    let ds = DistanceToSet::new(g, &[s0])?;
    let trace = IterationTrace {
        node: s0,
        gain: None,
        evaluated: g.n() as u64 - cut,
        skipped: cut,
        visited: top.visits,
    };
    Ok((ds, trace))
}

/// Greedy group closeness maximization ("Greedy++").
///
/// The first member is the node of maximum closeness. Each further round
/// evaluates candidates by pruned BFS, in decreasing order of their previous
/// gain, and with `lazy` stops as soon as no remaining candidate can beat
/// the best gain found. The chosen node then joins via one full BFS.
pub fn greedy_pp(g: &Graph, k: usize, options: GreedyOptions) -> Result<GroupResult> {
    check_k(g, k)?;
    require_connected(g)?;
    let (mut ds, seed_trace) = seed(g)?;
    let mut trace = vec![seed_trace];
    let mut cache = GainCache::new(g.n());
    let mut evaluator = Evaluator::new(g, options.threads)?;

    for round in 1..k as u32 {
        let order = cache.order(&ds);
        let (best, stats) = evaluator.round(g, &ds, &order, &mut cache, round, options.lazy);
        let best = best.expect("at least one candidate remains");
        let gain = ds.augment(g, best.node)?;
        debug_assert_eq!(gain, best.gain);
        trace.push(IterationTrace {
            node: best.node,
            gain: Some(gain),
            evaluated: stats.evaluated,
            skipped: stats.skipped,
            visited: stats.visited,
        });
    }

    Ok(GroupResult {
        n: g.n(),
        group: ds.members.clone(),
        distance_sum: ds.total,
        gain_trace: trace,
        peak_vector_bytes: None,
    })
}

#[derive(Default)]
struct RoundStats {
    evaluated: u64,
    skipped: u64,
    visited: u64,
}

/// Candidates per parallel batch. The lazy threshold is refreshed between
/// batches, so results do not depend on the thread count.
#[cfg(feature = "parallel")]
const PARALLEL_BATCH: usize = 512;

// one evaluator per run, so the size gap between variants is harmless
#[allow(clippy::large_enum_variant)]
enum Evaluator {
    Sequential(PrunedBfs),
    #[cfg(feature = "parallel")]
    Parallel {
        pool: rayon::ThreadPool,
        scratch: thread_local::ThreadLocal<std::cell::RefCell<PrunedBfs>>,
    },
}

impl Evaluator {
    fn new(g: &Graph, threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(GcmError::InvalidArgument("threads must be at least 1".into()));
        }
        #[cfg(feature = "parallel")]
        if threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| GcmError::Io(std::io::Error::other(e)))?;
            return Ok(Evaluator::Parallel {
                pool,
                scratch: thread_local::ThreadLocal::new(),
            });
        }
        Ok(Evaluator::Sequential(PrunedBfs::new(g.n())))
    }

    fn round(
        &mut self,
        g: &Graph,
        ds: &DistanceToSet,
        order: &[usize],
        cache: &mut GainCache,
        round: u32,
        lazy: bool,
    ) -> (Option<Best>, RoundStats) {
        let mut best: Option<Best> = None;
        let mut stats = RoundStats::default();
        match self {
            Evaluator::Sequential(bfs) => {
                for (i, &u) in order.iter().enumerate() {
                    if lazy && Best::dominates(best, cache.prev_gain[u], u) {
                        stats.skipped += (order.len() - i) as u64;
                        break;
                    }
                    let r = bfs.gain(g, u, &ds.dist);
                    cache.prev_gain[u] = r.gain;
                    cache.stamp[u] = round;
                    stats.evaluated += 1;
                    stats.visited += r.visited;
                    Best::offer(&mut best, r.gain, u);
                }
            }
            #[cfg(feature = "parallel")]
            Evaluator::Parallel { pool, scratch } => {
                use rayon::prelude::*;
                let n = g.n();
                let mut pos = 0;
                while pos < order.len() {
                    let first = order[pos];
                    if lazy && Best::dominates(best, cache.prev_gain[first], first) {
                        stats.skipped += (order.len() - pos) as u64;
                        break;
                    }
                    let end = (pos + PARALLEL_BATCH).min(order.len());
                    let threshold = best;
                    let prev = &cache.prev_gain;
                    let results: Vec<Option<PrunedGain>> = pool.install(|| {
                        order[pos..end]
                            .par_iter()
                            .map(|&u| {
                                if lazy && Best::dominates(threshold, prev[u], u) {
                                    return None;
                                }
                                let cell = scratch.get_or(|| std::cell::RefCell::new(PrunedBfs::new(n)));
                                Some(cell.borrow_mut().gain(g, u, &ds.dist))
                            })
                            .collect()
                    });
                    for (&u, r) in order[pos..end].iter().zip(results) {
                        match r {
                            Some(r) => {
                                cache.prev_gain[u] = r.gain;
                                cache.stamp[u] = round;
                                stats.evaluated += 1;
                                stats.visited += r.visited;
                                Best::offer(&mut best, r.gain, u);
                            }
                            None => stats.skipped += 1,
                        }
                    }
                    pos = end;
                }
            }
        }
        (best, stats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{path, star};

    #[test]
    fn group_closeness_examples() {
        let p3 = group_closeness(&path(3), &[1]).unwrap();
        assert_eq!((p3.distance_sum, p3.score()), (2, 1.0));
        let p5 = group_closeness(&path(5), &[1, 3]).unwrap();
        assert_eq!((p5.distance_sum, p5.score()), (3, 1.0));
        let p5 = group_closeness(&path(5), &[2, 0]).unwrap();
        assert_eq!((p5.distance_sum, p5.score()), (4, 0.75));
    }

    #[test]
    fn group_closeness_rejects_empty_and_full() {
        assert!(matches!(group_closeness(&path(3), &[]), Err(GcmError::UndefinedMeasure(_))));
        assert!(matches!(
            group_closeness(&path(3), &[0, 1, 2]),
            Err(GcmError::UndefinedMeasure(_))
        ));
    }

    #[test]
    fn pruned_gain_on_path() {
        let g = path(5);
        let ds = DistanceToSet::new(&g, &[2]).unwrap();
        assert_eq!(ds.total(), 6);
        assert_eq!(pruned_sssp_gain(&g, 0, &ds).unwrap(), PrunedGain { gain: 2, visited: 2 });
        // dist to {2} is [2,1,0,1,2]; {1,2} gives [1,0,0,1,2], so 6 -> 4
        let r = pruned_sssp_gain(&g, 1, &ds).unwrap();
        assert_eq!(r.gain, 2);
        assert!(r.visited <= 3);
    }

    #[test]
    fn pruned_gain_neighbor_of_group() {
        // node 1 hangs off the center of a star; every neighbor is in S
        let g = star(5);
        let ds = DistanceToSet::new(&g, &[0]).unwrap();
        assert_eq!(pruned_sssp_gain(&g, 1, &ds).unwrap(), PrunedGain { gain: 1, visited: 2 });
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let ds = DistanceToSet::new(&g, &[1]).unwrap();
        let r = pruned_sssp_gain(&g, 0, &ds).unwrap();
        assert_eq!(r.gain, 1);
    }

    #[test]
    fn pruned_gain_rejects_member() {
        let g = path(3);
        let ds = DistanceToSet::new(&g, &[1]).unwrap();
        assert!(matches!(pruned_sssp_gain(&g, 1, &ds), Err(GcmError::AlreadyMember(1))));
    }

    #[test]
    fn augment_examples() {
        let g = path(5);
        let mut ds = DistanceToSet::new(&g, &[2]).unwrap();
        ds.augment(&g, 0).unwrap();
        assert_eq!(ds.dist(), &[0, 1, 0, 1, 2]);
        assert_eq!(ds.total(), 4);
        assert!(matches!(ds.augment(&g, 2), Err(GcmError::AlreadyMember(2))));

        let g = path(3);
        let mut ds = DistanceToSet::new(&g, &[0]).unwrap();
        ds.augment(&g, 2).unwrap();
        assert_eq!((ds.dist(), ds.total()), (&[0u32, 1, 0][..], 1));
    }

    #[test]
    fn augment_total_drops_by_gain() {
        // a leaf next to the center improves only itself
        let g = star(4);
        let mut ds = DistanceToSet::new(&g, &[0]).unwrap();
        let gain = ds.augment(&g, 1).unwrap();
        assert_eq!((gain, ds.total()), (1, 2));
    }

    #[test]
    fn greedy_examples() {
        let r = greedy_pp(&path(5), 2, GreedyOptions::default()).unwrap();
        assert_eq!(r.group[0], 2);
        assert!(r.group[1] == 0 || r.group[1] == 4);
        assert_eq!(r.distance_sum, 4);
        assert_eq!(r.score(), 0.75);

        let r = greedy_pp(&star(4), 1, GreedyOptions::default()).unwrap();
        assert_eq!((r.group.clone(), r.distance_sum, r.score()), (vec![0], 3, 1.0));
    }

    #[test]
    fn greedy_k_bounds() {
        let g = path(4);
        assert!(matches!(greedy_pp(&g, 0, GreedyOptions::default()), Err(GcmError::InvalidK { .. })));
        assert!(matches!(greedy_pp(&g, 4, GreedyOptions::default()), Err(GcmError::InvalidK { .. })));
        let r = greedy_pp(&g, 3, GreedyOptions::default()).unwrap();
        assert_eq!(r.distance_sum, 1);
        assert_eq!(r.score(), 1.0);
    }

    #[test]
    fn greedy_rejects_disconnected() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]);
        assert!(matches!(
            greedy_pp(&g, 2, GreedyOptions::default()),
            Err(GcmError::Disconnected { .. })
        ));
    }

    #[test]
    fn zero_threads_rejected() {
        let opts = GreedyOptions { lazy: true, threads: 0 };
        assert!(greedy_pp(&path(4), 2, opts).is_err());
    }
}
