//! Bit-parallel marginal gains.
//!
//! `B_i(u)` holds bit `j` iff `d(u, j) <= i`, and `B_i(S)` bit `j` iff
//! `d(S, j) <= i`. A node `w` closer to `u` than to `S` is counted in
//! `|B_i(u) & !B_i(S)|` exactly for `d(u, w) <= i < d(S, w)`, so summing
//! those popcounts over all levels yields the distance-sum gain of `u`.
//!
//! Level vectors come from `B_i(u) = B_{i-1}(u) | OR_{v in N(u)} B_{i-1}(v)`.
//! Once `B_i(u)` is covered by `B_i(S)` the node is inactive: its vector is
//! frozen, and every bit a frozen vector misses is already inside the group
//! vector at every later level, so masked counts of its neighbors are
//! unaffected.

use std::cmp::Reverse;

use crate::error::{GcmError, Result};
use crate::graph::{require_connected, Graph};
use crate::greedy::{check_k, seed, Best, DistanceToSet, GroupResult, IterationTrace};

/// Default limit on level-vector memory: 8 GiB.
pub const DEFAULT_MEMORY_CAP: u64 = 8 << 30;

/// Bytes needed for two level sets of `n` vectors of `n` bits plus the
/// group vector.
pub fn required_vector_bytes(n: usize) -> u128 {
    let words = n.div_ceil(64) as u128;
    (2 * n as u128 * words + words) * 8
}

fn check_memory(n: usize, cap: u64) -> Result<()> {
    let required = required_vector_bytes(n);
    if required > cap as u128 {
        return Err(GcmError::Capacity {
            what: "level bit vectors (bytes)",
            required,
            cap: cap as u128,
        });
    }
    Ok(())
}

/// Level vectors of every node at the current radius.
pub struct BitLevelState {
    n: usize,
    words: usize,
    level: u32,
    node_vecs: Vec<u64>,
    spare: Vec<u64>,
    group_vec: Vec<u64>,
    group_dist: Option<Vec<u32>>,
    active: Vec<bool>,
}

impl BitLevelState {
    /// Level-0 state. Without a group every node stays active.
    pub fn new(g: &Graph, group: Option<&DistanceToSet>, memory_cap: u64) -> Result<Self> {
        let n = g.n();
        check_memory(n, memory_cap)?;
        let words = n.div_ceil(64);
        let mut state = BitLevelState {
            n,
            words,
            level: 0,
            node_vecs: vec![0; n * words],
            spare: vec![0; n * words],
            group_vec: vec![0; words],
            group_dist: None,
            active: vec![true; n],
        };
        state.reset(group.map(|ds| ds.dist()));
        Ok(state)
    }

    fn reset(&mut self, group_dist: Option<&[u32]>) {
        self.level = 0;
        self.node_vecs.fill(0);
        for u in 0..self.n {
            self.node_vecs[u * self.words + u / 64] |= 1 << (u % 64);
        }
        self.group_dist = group_dist.map(<[u32]>::to_vec);
        self.refresh_group();
        for u in 0..self.n {
            self.active[u] = self.masked_count(u) > 0;
        }
    }

    fn refresh_group(&mut self) {
        self.group_vec.fill(0);
        if let Some(dist) = &self.group_dist {
            for (j, &d) in dist.iter().enumerate() {
                if d <= self.level {
                    self.group_vec[j / 64] |= 1 << (j % 64);
                }
            }
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn node_vec(&self, u: usize) -> &[u64] {
        &self.node_vecs[u * self.words..(u + 1) * self.words]
    }

    pub fn group_vec(&self) -> &[u64] {
        &self.group_vec
    }

    pub fn is_active(&self, u: usize) -> bool {
        self.active[u]
    }

    pub fn bytes(&self) -> u64 {
        ((self.node_vecs.len() + self.spare.len() + self.group_vec.len()) * 8) as u64
    }

    /// `|B_i(u) & !B_i(S)|` at the current level.
    pub fn masked_count(&self, u: usize) -> u64 {
        self.node_vec(u)
            .iter()
            .zip(&self.group_vec)
            .map(|(a, b)| (a & !b).count_ones() as u64)
            .sum()
    }

    /// Moves every active node from radius `i - 1` to `i`. Returns the number
    /// of node vectors recomputed.
    pub fn advance_levels(&mut self, g: &Graph) -> u64 {
        let words = self.words;
        let cur = &self.node_vecs;
        let active = &self.active;
        let step = |u: usize, out: &mut [u64]| {
            out.copy_from_slice(&cur[u * words..(u + 1) * words]);
            if !active[u] {
                return;
            }
            for &v in g.neighbors(u) {
                let v = v as usize;
                for (o, x) in out.iter_mut().zip(&cur[v * words..(v + 1) * words]) {
                    *o |= x;
                }
            }
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            self.spare
                .par_chunks_mut(words.max(1))
                .enumerate()
                .for_each(|(u, out)| step(u, out));
        }
        #[cfg(not(feature = "parallel"))]
        for (u, out) in self.spare.chunks_mut(words.max(1)).enumerate() {
            step(u, out);
        }
        let advanced = self.active.iter().filter(|&&a| a).count() as u64;
        std::mem::swap(&mut self.node_vecs, &mut self.spare);
        self.level += 1;
        self.refresh_group();
        for u in 0..self.n {
            if self.active[u] && self.masked_count(u) == 0 {
                self.active[u] = false;
            }
        }
        advanced
    }
}

/// Gain of every node w.r.t. the group (0 for members), from level
/// popcounts.
pub fn bit_marginal_gains(g: &Graph, ds: &DistanceToSet, memory_cap: u64) -> Result<Vec<u64>> {
    let mut state = BitLevelState::new(g, Some(ds), memory_cap)?;
    let mut gains: Vec<u64> = (0..g.n()).map(|u| state.masked_count(u)).collect();
    while state.active.iter().any(|&a| a) {
        state.advance_levels(g);
        for (u, gain) in gains.iter_mut().enumerate() {
            if state.active[u] {
                *gain += state.masked_count(u);
            }
        }
    }
    Ok(gains)
}

pub fn bit_marginal_gain(g: &Graph, u: usize, ds: &DistanceToSet, memory_cap: u64) -> Result<u64> {
    g.check_node(u)?;
    if ds.contains(u) {
        return Err(GcmError::AlreadyMember(u));
    }
    Ok(bit_marginal_gains(g, ds, memory_cap)?[u])
}

#[derive(Clone, Copy, Debug)]
pub struct BitGreedyOptions {
    pub lazy: bool,
    pub memory_cap: u64,
}

impl Default for BitGreedyOptions {
    fn default() -> Self {
        BitGreedyOptions {
            lazy: true,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

/// Greedy group closeness with gains from level bit vectors
/// ("bitGreedy++"). Selects exactly the same nodes as
/// [`crate::greedy::greedy_pp`].
///
/// With `lazy`, all candidates are accumulated level by level and a
/// candidate is dropped once its previous-round gain falls below the best
/// partial sum seen so far; levels stop once no remaining candidate is
/// still growing.
pub fn bit_greedy_pp(g: &Graph, k: usize, options: BitGreedyOptions) -> Result<GroupResult> {
    check_k(g, k)?;
    check_memory(g.n(), options.memory_cap)?;
    require_connected(g)?;
    let n = g.n();
    let (mut ds, seed_trace) = seed(g)?;
    let mut trace = vec![seed_trace];
    let mut prev_gain = vec![u64::MAX; n];
    let mut state = BitLevelState::new(g, Some(&ds), options.memory_cap)?;
    let mut partial = vec![0u64; n];

    for _ in 1..k {
        state.reset(Some(ds.dist()));
        let mut contending: Vec<usize> = (0..n).filter(|&u| !ds.contains(u)).collect();
        contending.sort_by_key(|&u| (Reverse(prev_gain[u]), u));
        let candidates = contending.len() as u64;
        let mut finished: Vec<usize> = Vec::new();
        let mut vectors = 0u64;
        for &u in &contending {
            partial[u] = state.masked_count(u);
        }
        loop {
            if options.lazy {
                let floor = contending
                    .iter()
                    .chain(&finished)
                    .map(|&u| partial[u])
                    .max()
                    .unwrap_or(0);
                contending.retain(|&u| prev_gain[u] >= floor);
            }
            contending.retain(|&u| {
                if state.is_active(u) {
                    true
                } else {
                    finished.push(u);
                    false
                }
            });
            if contending.is_empty() {
                break;
            }
            vectors += state.advance_levels(g);
            for &u in &contending {
                if state.is_active(u) {
                    partial[u] += state.masked_count(u);
                }
            }
        }

        let mut best: Option<Best> = None;
        for &u in &finished {
            prev_gain[u] = partial[u];
            Best::offer(&mut best, partial[u], u);
        }
        let best = best.expect("at least one candidate remains");
        let gain = ds.augment(g, best.node)?;
        debug_assert_eq!(gain, best.gain);
        trace.push(IterationTrace {
            node: best.node,
            gain: Some(gain),
            evaluated: finished.len() as u64,
            skipped: candidates - finished.len() as u64,
            visited: vectors,
        });
    }

    Ok(GroupResult {
        n,
        group: ds.members().to_vec(),
        distance_sum: ds.total(),
        gain_trace: trace,
        peak_vector_bytes: Some(state.bytes()),
    })
}
