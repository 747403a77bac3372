//! Compact undirected graph storage, edge-list ingestion and plain BFS.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{GcmError, Result};

/// Distance marker for nodes not reached by a traversal.
pub const UNREACHABLE: u32 = u32::MAX;

/// Immutable undirected graph in compressed sparse row form.
///
/// Nodes are `0..n`. Every neighbor list is sorted ascending and free of
/// duplicates and self-loops; each undirected edge is stored in both
/// directions.
#[derive(Clone, Debug)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph over `n` nodes. Self-loops and repeated edges are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs: Vec<(u32, u32)> = edges
            .into_iter()
            .filter(|(u, v)| u != v)
            .map(|(u, v)| {
                assert!(u < n && v < n, "edge ({u}, {v}) outside 0..{n}");
                (u.min(v) as u32, u.max(v) as u32)
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        Self::from_sorted_pairs(n, &pairs, None)
    }

    fn from_sorted_pairs(n: usize, pairs: &[(u32, u32)], labels: Option<Vec<String>>) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; 2 * pairs.len()];
        for &(u, v) in pairs {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for u in 0..n {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Graph {
            offsets,
            targets,
            labels,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Original input label of `u`, or its compact id when the graph was
    /// built without labels.
    pub fn label(&self, u: usize) -> String {
        match &self.labels {
            Some(labels) => labels[u].clone(),
            None => u.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Iterates every undirected edge once as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub(crate) fn check_node(&self, u: usize) -> Result<()> {
        if u >= self.n() {
            return Err(GcmError::NodeOutOfRange { node: u, n: self.n() });
        }
        Ok(())
    }
}

/// How tokens on an edge-list line are separated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Separator {
    #[default]
    Whitespace,
    Char(char),
}

#[derive(Clone, Debug)]
pub struct LoadOptions {
    /// Lines whose first non-blank character is one of these are skipped.
    pub comment_prefixes: Vec<char>,
    pub separator: Separator,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            comment_prefixes: vec!['#', '%'],
            separator: Separator::Whitespace,
        }
    }
}

/// Counts gathered while reading an edge list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub nodes: usize,
    pub edges: usize,
    pub duplicates_dropped: usize,
    pub self_loops_dropped: usize,
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nodes={} edges={} duplicates_dropped={} self_loops_dropped={}",
            self.nodes, self.edges, self.duplicates_dropped, self.self_loops_dropped
        )
    }
}

/// Reads a SNAP/KONECT style edge list.
///
/// Labels are compacted to `0..n` in order of first appearance. Direction is
/// ignored, so `a b` and `b a` describe the same edge.
pub fn load_edge_list<R: BufRead>(reader: R, options: &LoadOptions) -> Result<(Graph, IngestReport)> {
    let mut ids: HashMap<String, u32> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let mut report = IngestReport::default();

    let mut intern = |token: &str| -> u32 {
        if let Some(&id) = ids.get(token) {
            return id;
        }
        let id = labels.len() as u32;
        labels.push(token.to_owned());
        ids.insert(token.to_owned(), id);
        id
    };

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed
            .chars()
            .next()
            .is_some_and(|c| options.comment_prefixes.contains(&c))
        {
            continue;
        }
        let tokens: Vec<&str> = match options.separator {
            Separator::Whitespace => trimmed.split_whitespace().collect(),
            Separator::Char(c) => trimmed
                .split(c)
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .collect(),
        };
        if tokens.len() != 2 {
            return Err(GcmError::Parse {
                line: idx + 1,
                message: format!("expected 2 tokens, found {}", tokens.len()),
            });
        }
        let u = intern(tokens[0]);
        let v = intern(tokens[1]);
        if u == v {
            report.self_loops_dropped += 1;
            continue;
        }
        pairs.push((u.min(v), u.max(v)));
    }

    if pairs.is_empty() {
        return Err(GcmError::EmptyGraph);
    }
    pairs.sort_unstable();
    let before = pairs.len();
    pairs.dedup();
    report.duplicates_dropped = before - pairs.len();
    report.nodes = labels.len();
    report.edges = pairs.len();

    let n = labels.len();
    Ok((Graph::from_sorted_pairs(n, &pairs, Some(labels)), report))
}

/// Writes one `u v` line per undirected edge using the graph's labels.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", g.label(u), g.label(v))?;
    }
    Ok(())
}

/// Component id per node; components are numbered in order of their
/// smallest node id.
pub fn connected_components(g: &Graph) -> (usize, Vec<u32>) {
    let n = g.n();
    let mut comp = vec![u32::MAX; n];
    let mut count = 0u32;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if comp[s] != u32::MAX {
            continue;
        }
        comp[s] = count;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if comp[v as usize] == u32::MAX {
                    comp[v as usize] = count;
                    queue.push_back(v as usize);
                }
            }
        }
        count += 1;
    }
    (count as usize, comp)
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() > 0 && connected_components(g).0 == 1
}

pub(crate) fn require_connected(g: &Graph) -> Result<()> {
    let (components, _) = connected_components(g);
    if components != 1 {
        return Err(GcmError::Disconnected { components });
    }
    Ok(())
}

fn compare_labels(a: &str, b: &str) -> Ordering {
    match (a.parse::<i128>(), b.parse::<i128>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        _ => a.cmp(b),
    }
}

/// Subgraph induced by the largest connected component.
///
/// Among components of equal size the one holding the smallest original
/// label wins (numeric comparison when both labels are integers). Surviving
/// nodes keep their relative order and their labels.
pub fn largest_connected_component(g: &Graph) -> Graph {
    let (count, comp) = connected_components(g);
    if count <= 1 {
        return g.clone();
    }
    let mut size = vec![0usize; count];
    let mut min_node = vec![usize::MAX; count];
    for (u, &c) in comp.iter().enumerate() {
        let c = c as usize;
        size[c] += 1;
        let better = match min_node[c] {
            usize::MAX => true,
            cur => match &g.labels {
                Some(labels) => compare_labels(&labels[u], &labels[cur]) == Ordering::Less,
                None => u < cur,
            },
        };
        if better {
            min_node[c] = u;
        }
    }
    let smaller_label = |a: usize, b: usize| match &g.labels {
        Some(labels) => compare_labels(&labels[a], &labels[b]),
        None => a.cmp(&b),
    };
    let best = (0..count)
        .min_by(|&a, &b| {
            size[b]
                .cmp(&size[a])
                .then_with(|| smaller_label(min_node[a], min_node[b]))
        })
        .unwrap() as u32;

    let mut new_id = vec![u32::MAX; g.n()];
    let mut kept = 0u32;
    for u in 0..g.n() {
        if comp[u] == best {
            new_id[u] = kept;
            kept += 1;
        }
    }
    let pairs: Vec<(u32, u32)> = g
        .edges()
        .filter(|&(u, _)| comp[u] == best)
        .map(|(u, v)| (new_id[u], new_id[v]))
        .collect();
    let labels = (0..g.n())
        .filter(|&u| comp[u] == best)
        .map(|u| g.label(u))
        .collect();
    let mut pairs = pairs;
    pairs.sort_unstable();
    Graph::from_sorted_pairs(kept as usize, &pairs, Some(labels))
}

/// Hop distances from one source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceArray {
    pub source: usize,
    pub dist: Vec<u32>,
}

impl DistanceArray {
    /// Sum of distances to all reached nodes.
    pub fn sum(&self) -> u64 {
        self.dist
            .iter()
            .filter(|&&d| d != UNREACHABLE)
            .map(|&d| d as u64)
            .sum()
    }

    pub fn eccentricity(&self) -> u32 {
        self.dist.iter().copied().filter(|&d| d != UNREACHABLE).max().unwrap_or(0)
    }
}

pub fn bfs_distances(g: &Graph, s: usize) -> Result<DistanceArray> {
    g.check_node(s)?;
    Ok(DistanceArray {
        source: s,
        dist: multi_source_bfs(g, &[s]),
    })
}

/// Distance from the nearest of `sources` to every node.
pub fn multi_source_bfs(g: &Graph, sources: &[usize]) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = VecDeque::with_capacity(g.n());
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &v in g.neighbors(u) {
            let v = v as usize;
            if dist[v] == UNREACHABLE {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
    dist
}
