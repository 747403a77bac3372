//! Reference greedy with full distance matrices, degree and top-k groups,
//! and group overlap percentages.

use std::cmp::Reverse;
use std::collections::HashSet;

use serde::Serialize;

use crate::closeness::top_k_closeness;
use crate::error::{GcmError, Result};
use crate::graph::{multi_source_bfs, require_connected, Graph};
use crate::greedy::{check_k, greedy_pp, GreedyOptions, GroupResult, IterationTrace};

/// Default node limit for [`greedy_reference`] (two n x n matrices).
pub const DEFAULT_REFERENCE_MAX_NODES: usize = 2000;

/// Textbook greedy over two `n x n` matrices: `d` holds all pairwise
/// distances, `m[u][w]` holds `d(S + u, w)`. Every round rescans every
/// candidate row. Only meant as an oracle for small graphs.
pub fn greedy_reference(g: &Graph, k: usize, max_nodes: usize) -> Result<GroupResult> {
    let n = g.n();
    if n > max_nodes {
        return Err(GcmError::Capacity {
            what: "nodes for the matrix greedy",
            required: n as u128,
            cap: max_nodes as u128,
        });
    }
    check_k(g, k)?;
    require_connected(g)?;

    let mut d = vec![0u32; n * n];
    for u in 0..n {
        d[u * n..(u + 1) * n].copy_from_slice(&multi_source_bfs(g, &[u]));
    }
    let mut m = d.clone();
    let mut in_group = vec![false; n];

    let row_sum = |m: &[u32], u: usize, in_group: &[bool]| -> u64 {
        (0..n)
            .filter(|&w| !in_group[w])
            .map(|w| m[u * n + w] as u64)
            .sum()
    };

    // first member: smallest farness, ties to the lowest id
    let first = (0..n)
        .min_by_key(|&u| (row_sum(&d, u, &in_group), u))
        .unwrap();
    let mut current = row_sum(&d, first, &in_group);
    let mut group = vec![first];
    in_group[first] = true;
    let mut trace = vec![IterationTrace {
        node: first,
        gain: None,
        evaluated: n as u64,
        skipped: 0,
        visited: (n * n) as u64,
    }];
    let mut last = first;

    while group.len() < k {
        for u in (0..n).filter(|&u| !in_group[u]) {
            for w in 0..n {
                let via = d[last * n + w];
                if m[u * n + w] > via {
                    m[u * n + w] = via;
                }
            }
        }
        // distance sum of S + u over nodes outside S + u
        let (sum, s) = (0..n)
            .filter(|&u| !in_group[u])
            .map(|u| (row_sum(&m, u, &in_group), u))
            .min()
            .unwrap();
        let gain = current - sum;
        current = sum;
        group.push(s);
        in_group[s] = true;
        trace.push(IterationTrace {
            node: s,
            gain: Some(gain),
            evaluated: (n - group.len() + 1) as u64,
            skipped: 0,
            visited: ((n - group.len() + 1) * n) as u64,
        });
        last = s;
    }

    Ok(GroupResult {
        n,
        group,
        distance_sum: current,
        gain_trace: trace,
        peak_vector_bytes: None,
    })
}

/// The `k` nodes of largest degree, ties to the lowest id.
pub fn degree_group(g: &Graph, k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > g.n() {
        return Err(GcmError::InvalidK { k, min: 1, max: g.n() });
    }
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&u| (Reverse(g.degree(u)), u));
    order.truncate(k);
    Ok(order)
}

/// The `k` nodes of largest individual closeness.
pub fn topk_group(g: &Graph, k: usize) -> Result<Vec<usize>> {
    Ok(top_k_closeness(g, k)?
        .ranking
        .into_iter()
        .map(|(v, _)| v)
        .collect())
}

/// `100 * |a ∩ b| / k`.
pub fn overlap_percent(a: &[usize], b: &[usize], k: usize) -> Result<f64> {
    if a.len() != k || b.len() != k {
        return Err(GcmError::SizeMismatch(format!(
            "overlap needs two sets of size {k}, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let a: HashSet<usize> = a.iter().copied().collect();
    let common = b.iter().filter(|v| a.contains(v)).count();
    Ok(100.0 * common as f64 / k as f64)
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapReport {
    pub k: usize,
    pub overlap_topk_pct: f64,
    pub overlap_degree_pct: f64,
    pub group: Vec<usize>,
    pub topk: Vec<usize>,
    pub degree: Vec<usize>,
}

/// Compares the greedy group with the top-k closeness and top-k degree sets.
pub fn overlap_report(g: &Graph, k: usize, options: GreedyOptions) -> Result<OverlapReport> {
    let group = greedy_pp(g, k, options)?.group;
    let topk = topk_group(g, k)?;
    let degree = degree_group(g, k)?;
    Ok(OverlapReport {
        k,
        overlap_topk_pct: overlap_percent(&group, &topk, k)?,
        overlap_degree_pct: overlap_percent(&group, &degree, k)?,
        group,
        topk,
        degree,
    })
}
