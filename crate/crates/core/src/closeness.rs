//! Exact single-node closeness and top-k closeness ranking with level-wise
//! BFS cutoffs.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{GcmError, Result};
use crate::graph::{connected_components, require_connected, Graph};

/// A closeness value `reach / farness` kept as an exact ratio.
///
/// `reach` is the number of other nodes (n - 1) and `farness` the sum of
/// their distances. Ordering compares the ratios exactly.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Closeness {
    pub reach: u64,
    pub farness: u64,
}

impl Closeness {
    pub const ZERO: Closeness = Closeness { reach: 0, farness: 1 };

    pub fn new(reach: u64, farness: u64) -> Self {
        debug_assert!(farness > 0);
        Closeness { reach, farness }
    }

    pub fn value(self) -> f64 {
        self.reach as f64 / self.farness as f64
    }
}

impl Ord for Closeness {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.reach as u128 * other.farness as u128;
        let rhs = other.reach as u128 * self.farness as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Closeness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Closeness {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Closeness {}

impl fmt::Display for Closeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.reach, self.farness)
    }
}

/// Exact closeness of `v`. Fails when `n < 2` or `v` cannot reach every node.
pub fn closeness(g: &Graph, v: usize) -> Result<Closeness> {
    g.check_node(v)?;
    if g.n() < 2 {
        return Err(GcmError::UndefinedMeasure("closeness needs at least two nodes"));
    }
    let dist = crate::graph::bfs_distances(g, v)?;
    if dist.dist.contains(&crate::graph::UNREACHABLE) {
        return Err(GcmError::Disconnected {
            components: connected_components(g).0,
        });
    }
    Ok(Closeness::new(g.n() as u64 - 1, dist.sum()))
}

/// Result of a BFS that may stop early.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutOutcome {
    Exact(Closeness),
    Cut,
}

#[derive(Clone, Copy, Debug)]
pub struct BfsCut {
    pub outcome: CutOutcome,
    /// Nodes discovered before the BFS finished or was cut.
    pub visited: u64,
}

/// Reusable buffers for repeated level-wise BFS runs.
struct LevelBfs {
    mark: Vec<u32>,
    stamp: u32,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl LevelBfs {
    fn new(n: usize) -> Self {
        LevelBfs {
            mark: vec![0; n],
            stamp: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    /// Runs a BFS from `v`, calling `stop(bound, discovered)` after each
    /// completed level. Returns the exact closeness if the BFS completes
    /// without `stop` returning true.
    fn run(
        &mut self,
        g: &Graph,
        v: usize,
        mut stop: impl FnMut(Closeness) -> bool,
    ) -> BfsCut {
        let n = g.n() as u64;
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.fill(0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        self.frontier.clear();
        self.frontier.push(v as u32);
        self.mark[v] = stamp;

        let mut reached = 1u64;
        let mut sum = 0u64;
        let mut depth = 0u64;
        loop {
            let remaining = n - reached;
            let bound = Closeness::new(n - 1, sum + remaining * (depth + 1));
            if stop(bound) {
                return BfsCut {
                    outcome: CutOutcome::Cut,
                    visited: reached,
                };
            }
            if remaining == 0 || self.frontier.is_empty() {
                break;
            }
            self.next.clear();
            for &u in &self.frontier {
                for &w in g.neighbors(u as usize) {
                    if self.mark[w as usize] != stamp {
                        self.mark[w as usize] = stamp;
                        self.next.push(w);
                    }
                }
            }
            depth += 1;
            reached += self.next.len() as u64;
            sum += self.next.len() as u64 * depth;
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
        // an empty frontier with nodes left means a disconnected graph; the
        // bound then equals the value with every unreached node at depth + 1
        BfsCut {
            outcome: CutOutcome::Exact(Closeness::new(n - 1, sum.max(1))),
            visited: reached,
        }
    }
}

/// Level-wise BFS from `v` that gives up once `x_k >= ` the optimistic bound
/// `(n-1) / (s_d + (n - r_d)(d + 1))` after some level `d`, where `r_d`
/// nodes with distance sum `s_d` have been reached.
pub fn bfs_cut(g: &Graph, v: usize, x_k: Closeness) -> Result<BfsCut> {
    g.check_node(v)?;
    if g.n() < 2 {
        return Err(GcmError::UndefinedMeasure("closeness needs at least two nodes"));
    }
    Ok(LevelBfs::new(g.n()).run(g, v, |bound| x_k >= bound))
}

/// The optimistic bound after every BFS level from `v`, ending with the
/// exact closeness.
pub fn level_bounds(g: &Graph, v: usize) -> Result<Vec<Closeness>> {
    g.check_node(v)?;
    let mut bounds = Vec::new();
    LevelBfs::new(g.n()).run(g, v, |b| {
        bounds.push(b);
        false
    });
    Ok(bounds)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeScore {
    Pending,
    Exact(Closeness),
    Cut,
}

/// Bookkeeping of one top-k run.
#[derive(Clone, Debug)]
pub struct TopKState {
    pub k: usize,
    /// k-th best exact closeness after the run (zero if fewer than k exact).
    pub x_k: Closeness,
    pub scores: Vec<NodeScore>,
    /// `x_k` after each processed node, in processing order.
    pub threshold_trace: Vec<Closeness>,
}

#[derive(Clone, Debug)]
pub struct TopK {
    /// Best k nodes, by closeness descending then id ascending.
    pub ranking: Vec<(usize, Closeness)>,
    pub state: TopKState,
    /// Total nodes discovered across all BFS runs.
    pub visits: u64,
}

/// Exact top-k closeness.
///
/// Nodes are processed by decreasing degree (ties by id). Each one runs a
/// level-wise BFS that stops as soon as its bound can no longer place it in
/// the current top k. A node whose bound only ties the current k-th entry is
/// cut only if it would also lose the id tie-break, so the result equals
/// the brute-force ranking including node identities.
pub fn top_k_closeness(g: &Graph, k: usize) -> Result<TopK> {
    let n = g.n();
    if n < 2 {
        return Err(GcmError::UndefinedMeasure("closeness needs at least two nodes"));
    }
    if k == 0 || k > n {
        return Err(GcmError::InvalidK { k, min: 1, max: n });
    }
    require_connected(g)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| (Reverse(g.degree(u)), u));

    let mut best: BTreeSet<(Reverse<Closeness>, usize)> = BTreeSet::new();
    let mut scores = vec![NodeScore::Pending; n];
    let mut trace = Vec::with_capacity(n);
    let mut bfs = LevelBfs::new(n);
    let mut visits = 0u64;

    for v in order {
        let kth = if best.len() == k {
            best.last().map(|&(Reverse(c), id)| (c, id))
        } else {
            None
        };
        let run = bfs.run(g, v, |bound| match kth {
            Some((x_k, kth_id)) => bound < x_k || (bound == x_k && v > kth_id),
            None => false,
        });
        visits += run.visited;
        match run.outcome {
            CutOutcome::Cut => scores[v] = NodeScore::Cut,
            CutOutcome::Exact(c) => {
                scores[v] = NodeScore::Exact(c);
                best.insert((Reverse(c), v));
                if best.len() > k {
                    best.pop_last();
                }
            }
        }
        trace.push(if best.len() == k {
            best.last().unwrap().0 .0
        } else {
            Closeness::ZERO
        });
    }

    let ranking: Vec<(usize, Closeness)> = best.iter().map(|&(Reverse(c), v)| (v, c)).collect();
    let x_k = ranking.last().map(|&(_, c)| c).unwrap_or(Closeness::ZERO);
    Ok(TopK {
        ranking,
        state: TopKState {
            k,
            x_k,
            scores,
            threshold_trace: trace,
        },
        visits,
    })
}
