//! Exact optimum by exhaustive enumeration, and an LP-format export of the
//! group closeness integer program.

use std::io::Write;

use serde::Serialize;

use crate::error::{GcmError, Result};
use crate::graph::{multi_source_bfs, require_connected, Graph};
use crate::greedy::GroupResult;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactResult {
    pub n: usize,
    /// Optimal group; lexicographically smallest among ties.
    pub group: Vec<usize>,
    pub distance_sum: u64,
    pub subsets_evaluated: u64,
}

impl ExactResult {
    pub fn score(&self) -> f64 {
        (self.n - self.group.len()) as f64 / self.distance_sum as f64
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Advances `comb` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn subset_sum(g: &Graph, group: &[usize]) -> u64 {
    multi_source_bfs(g, group).iter().map(|&d| d as u64).sum()
}

/// Best subset among those starting with `first`, scanned lexicographically.
fn best_with_first(g: &Graph, k: usize, first: usize) -> Option<(u64, Vec<usize>, u64)> {
    let n = g.n();
    if first + k > n {
        return None;
    }
    let mut comb: Vec<usize> = (first..first + k).collect();
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut evaluated = 0u64;
    loop {
        let sum = subset_sum(g, &comb);
        evaluated += 1;
        if best.as_ref().is_none_or(|(b, _)| sum < *b) {
            best = Some((sum, comb.clone()));
        }
        // the tail walks the (k-1)-subsets of first+1..n
        if k == 1 || !next_combination(&mut comb[1..], n) {
            break;
        }
    }
    best.map(|(s, c)| (s, c, evaluated))
}

/// Minimum distance sum over all `k`-subsets, with a fresh multi-source BFS
/// per subset. Fails with a capacity error if `C(n, k) > budget`.
pub fn exact_group_enumeration(g: &Graph, k: usize, budget: u128) -> Result<ExactResult> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(GcmError::InvalidK { k, min: 1, max: n });
    }
    let subsets = binomial(n, k);
    if subsets > budget {
        return Err(GcmError::Capacity {
            what: "subsets to enumerate",
            required: subsets,
            cap: budget,
        });
    }
    require_connected(g)?;

    let per_first = |first: usize| best_with_first(g, k, first);
    #[cfg(feature = "parallel")]
    let parts: Vec<_> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(per_first).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<_> = (0..n).map(per_first).collect();

    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut evaluated = 0u64;
    // parts are ordered by first element, so strict < keeps the
    // lexicographically smallest optimum
    for (sum, comb, count) in parts.into_iter().flatten() {
        evaluated += count;
        if best.as_ref().is_none_or(|(b, _)| sum < *b) {
            best = Some((sum, comb));
        }
    }
    let (distance_sum, group) = best.expect("k <= n gives at least one subset");
    Ok(ExactResult {
        n,
        group,
        distance_sum,
        subsets_evaluated: evaluated,
    })
}

/// Default node limit for [`exact_group_branch_and_bound`] (an n x n
/// distance matrix is kept).
pub const DEFAULT_BNB_MAX_NODES: usize = 2000;

struct BranchAndBound<'a> {
    n: usize,
    k: usize,
    d: &'a [u32],
    best_sum: u64,
    best: Option<Vec<usize>>,
    chosen: Vec<usize>,
    leaves: u64,
}

impl BranchAndBound<'_> {
    /// Visits the subsets extending `chosen` with nodes from `start..n`
    /// in lexicographic order. `cur[v]` is the distance of `v` to `chosen`.
    fn search(&mut self, start: usize, cur: &[u32], cur_sum: u64) {
        let n = self.n;
        let left = self.k - self.chosen.len();
        if left == 0 {
            self.leaves += 1;
            if cur_sum < self.best_sum {
                self.best_sum = cur_sum;
                self.best = Some(self.chosen.clone());
            }
            return;
        }
        if n - start < left {
            return;
        }
        // the gain of adding a set is at most the sum of its members' gains
        let gains: Vec<u64> = (start..n)
            .map(|j| {
                let row = &self.d[j * n..(j + 1) * n];
                cur.iter()
                    .zip(row)
                    .map(|(&c, &dj)| c.saturating_sub(dj) as u64)
                    .sum()
            })
            .collect();
        // suffix[i]: sum of the `left` largest gains among candidates start+i..n
        let mut suffix = vec![0u64; gains.len() + 1];
        let mut heap = std::collections::BinaryHeap::with_capacity(left + 1);
        let mut heap_sum = 0u64;
        for i in (0..gains.len()).rev() {
            heap.push(std::cmp::Reverse(gains[i]));
            heap_sum += gains[i];
            if heap.len() > left {
                heap_sum -= heap.pop().unwrap().0;
            }
            suffix[i] = heap_sum;
        }
        if cur_sum.saturating_sub(suffix[0]) >= self.best_sum {
            return;
        }
        for j in start..=n - left {
            if cur_sum.saturating_sub(suffix[j - start]) >= self.best_sum {
                // suffix bounds only shrink as j grows
                break;
            }
            let row = &self.d[j * n..(j + 1) * n];
            let next: Vec<u32> = cur.iter().zip(row).map(|(&c, &dj)| c.min(dj)).collect();
            self.chosen.push(j);
            self.search(j + 1, &next, cur_sum - gains[j - start]);
            self.chosen.pop();
        }
    }
}

/// Exact optimum by depth-first branch and bound over subsets in
/// lexicographic order. A branch is dropped when the current sum minus the
/// `r` largest single-node gains (an upper bound on what `r` more nodes can
/// remove, by submodularity) cannot beat the incumbent. Returns the same
/// group as [`exact_group_enumeration`], including the tie-break.
pub fn exact_group_branch_and_bound(g: &Graph, k: usize, max_nodes: usize) -> Result<ExactResult> {
    let n = g.n();
    if n > max_nodes {
        return Err(GcmError::Capacity {
            what: "nodes for branch and bound",
            required: n as u128,
            cap: max_nodes as u128,
        });
    }
    if k == 0 || k > n {
        return Err(GcmError::InvalidK { k, min: 1, max: n });
    }
    require_connected(g)?;
    let mut d = vec![0u32; n * n];
    for u in 0..n {
        d[u * n..(u + 1) * n].copy_from_slice(&multi_source_bfs(g, &[u]));
    }
    // no node yet: every distance counts as "infinitely" far, capped so the
    // first pick's gain is its distance sum subtracted from a common base
    let base = n as u32;
    let cur = vec![base; n];
    // a greedy solution bounds the optimum; +1 keeps equal-sum subsets
    // reachable so the lexicographic tie-break still applies
    let incumbent = if k < n {
        crate::greedy::greedy_pp(g, k, Default::default())?.distance_sum + 1
    } else {
        1
    };
    let mut bnb = BranchAndBound {
        n,
        k,
        d: &d,
        best_sum: incumbent,
        best: None,
        chosen: Vec::with_capacity(k),
        leaves: 0,
    };
    bnb.search(0, &cur, base as u64 * n as u64);
    let group = bnb.best.expect("k <= n gives at least one subset");
    Ok(ExactResult {
        n,
        distance_sum: bnb.best_sum,
        group,
        subsets_evaluated: bnb.leaves,
    })
}

/// `exact_sum / approx_sum`; 1.0 means the approximation is optimal.
pub fn approximation_ratio(exact: &ExactResult, approx: &GroupResult) -> Result<f64> {
    if exact.group.len() != approx.group.len() || exact.n != approx.n {
        return Err(GcmError::SizeMismatch(format!(
            "exact solution has k={} on n={}, approximation has k={} on n={}",
            exact.group.len(),
            exact.n,
            approx.group.len(),
            approx.n
        )));
    }
    if approx.distance_sum == 0 {
        return Ok(1.0);
    }
    Ok(exact.distance_sum as f64 / approx.distance_sum as f64)
}

/// Default node limit for the LP export (the program has n^2 + n binaries).
pub const DEFAULT_ILP_MAX_NODES: usize = 5000;

fn lp_safe(label: &str) -> bool {
    !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.'))
}

/// Variable-name suffix per node: the original labels when they are valid
/// LP identifiers, compact ids otherwise.
fn lp_names(g: &Graph) -> Vec<String> {
    let labels: Vec<String> = (0..g.n()).map(|u| g.label(u)).collect();
    if labels.iter().all(|l| lp_safe(l)) {
        labels
    } else {
        (0..g.n()).map(|u| u.to_string()).collect()
    }
}

/// Counts of what [`export_ilp`] writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IlpStats {
    pub constraints: usize,
    pub binaries: usize,
}

/// Writes the p-median style integer program in CPLEX LP format:
///
/// ```text
/// min  sum_ij d(i, j) x_i_j
/// s.t. sum_j x_i_j = 1        for every i
///      sum_j y_j   = k
///      x_i_j - y_j <= 0       for every i, j
///      x, y binary
/// ```
///
/// `x_i_i` has cost 0, which lets group members assign to themselves.
pub fn export_ilp<W: Write>(g: &Graph, k: usize, max_nodes: usize, sink: W) -> Result<IlpStats> {
    let n = g.n();
    if n > max_nodes {
        return Err(GcmError::Capacity {
            what: "nodes for ILP export",
            required: n as u128,
            cap: max_nodes as u128,
        });
    }
    if k == 0 || k > n {
        return Err(GcmError::InvalidK { k, min: 1, max: n });
    }
    require_connected(g)?;
    let names = lp_names(g);
    let x = |i: usize, j: usize| format!("x_{}_{}", names[i], names[j]);
    let y = |j: usize| format!("y_{}", names[j]);
    let mut out = std::io::BufWriter::new(sink);

    // CPLEX caps LP lines at 510 characters
    const TERMS_PER_LINE: usize = 8;

    writeln!(out, "\\ group closeness maximization: n = {n}, k = {k}")?;
    writeln!(out, "Minimize")?;
    write!(out, " obj:")?;
    let mut terms = 0usize;
    for i in 0..n {
        let dist = multi_source_bfs(g, &[i]);
        for (j, &d) in dist.iter().enumerate() {
            if terms > 0 && terms.is_multiple_of(TERMS_PER_LINE) {
                write!(out, "\n     ")?;
            }
            let sep = if terms == 0 { " " } else { " + " };
            write!(out, "{sep}{d} {}", x(i, j))?;
            terms += 1;
        }
    }
    writeln!(out)?;

    writeln!(out, "Subject To")?;
    let mut constraints = 0usize;
    let write_sum = |out: &mut dyn Write, name: String, vars: &mut dyn Iterator<Item = String>, rhs: String| -> std::io::Result<()> {
        write!(out, " {name}:")?;
        for (t, v) in vars.enumerate() {
            if t > 0 && t % TERMS_PER_LINE == 0 {
                write!(out, "\n     ")?;
            }
            write!(out, "{}{v}", if t == 0 { " " } else { " + " })?;
        }
        writeln!(out, " = {rhs}")
    };
    for (i, name) in names.iter().enumerate() {
        write_sum(&mut out, format!("assign_{name}"), &mut (0..n).map(|j| x(i, j)), "1".into())?;
        constraints += 1;
    }
    write_sum(&mut out, "cardinality".into(), &mut (0..n).map(y), k.to_string())?;
    constraints += 1;
    for i in 0..n {
        for j in 0..n {
            writeln!(out, " link_{}_{}: {} - {} <= 0", names[i], names[j], x(i, j), y(j))?;
            constraints += 1;
        }
    }

    writeln!(out, "Binary")?;
    let mut binaries = 0usize;
    for j in 0..n {
        writeln!(out, " {}", y(j))?;
        binaries += 1;
    }
    for i in 0..n {
        for j in 0..n {
            writeln!(out, " {}", x(i, j))?;
            binaries += 1;
        }
    }
    writeln!(out, "End")?;
    out.flush()?;
    Ok(IlpStats {
        constraints,
        binaries,
    })
}
