//! Small deterministic families and seeded random graphs used by tests,
//! benchmarks and the demo.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}

/// Star with center 0 and leaves `1..n`.
pub fn star(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (0, v)))
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// `rows x cols` grid, node `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, edges)
}

/// Connected random graph: a uniformly shuffled random recursive tree plus
/// every other pair independently with probability `p`.
pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        edges.push((parent, order[i]));
    }
    if p > 0.0 {
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Preferential attachment: each new node links to `m` distinct earlier
/// nodes chosen proportionally to degree. Connected by construction; heavy
/// tailed degrees and a small diameter, like the social graphs in SNAP.
pub fn barabasi_albert<R: Rng>(n: usize, m: usize, rng: &mut R) -> Graph {
    assert!(m >= 1 && n > m);
    let mut edges = Vec::with_capacity(n * m);
    // endpoint pool: a node appears once per incident edge
    let mut pool: Vec<usize> = Vec::with_capacity(2 * n * m);
    for u in 0..=m {
        for v in u + 1..=m {
            edges.push((u, v));
            pool.push(u);
            pool.push(v);
        }
    }
    let mut picked = Vec::with_capacity(m);
    for v in m + 1..n {
        picked.clear();
        while picked.len() < m {
            let t = pool[rng.gen_range(0..pool.len())];
            if !picked.contains(&t) {
                picked.push(t);
            }
        }
        for &t in &picked {
            edges.push((t, v));
            pool.push(t);
            pool.push(v);
        }
    }
    Graph::from_edges(n, edges)
}
