//! Brute-force oracles shared by the integration suites. Nothing here calls
//! into the traversal code under test; distances come from Floyd-Warshall.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::path::PathBuf;

use gcm_core::generators::random_connected;
use gcm_core::graph::{load_edge_list, Graph, IngestReport, LoadOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const INF: u32 = u32::MAX / 4;

/// All-pairs distances by Floyd-Warshall over the edge list.
pub fn apsp(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.n();
    let mut d = vec![vec![INF; n]; n];
    for (u, row) in d.iter_mut().enumerate() {
        row[u] = 0;
    }
    for (u, v) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for m in 0..n {
        for i in 0..n {
            let dim = d[i][m];
            if dim == INF {
                continue;
            }
            let (row_m, row_i) = if i < m {
                let (a, b) = d.split_at_mut(m);
                (&b[0], &mut a[i])
            } else if i > m {
                let (a, b) = d.split_at_mut(i);
                (&a[m], &mut b[0])
            } else {
                continue;
            };
            for (dij, &dmj) in row_i.iter_mut().zip(row_m.iter()) {
                *dij = (*dij).min(dim + dmj);
            }
        }
    }
    d
}

/// `sum_v min_{s in S} d(s, v)`.
pub fn group_sum(d: &[Vec<u32>], group: &[usize]) -> u64 {
    (0..d.len())
        .map(|v| group.iter().map(|&s| d[s][v]).min().unwrap() as u64)
        .sum()
}

/// Exact ratio comparison of `a_num / a_den` vs `b_num / b_den`.
pub fn cmp_ratio(a_num: u64, a_den: u64, b_num: u64, b_den: u64) -> Ordering {
    (a_num as u128 * b_den as u128).cmp(&(b_num as u128 * a_den as u128))
}

/// All nodes ranked by closeness descending, id ascending:
/// `(node, farness)`.
pub fn closeness_ranking(d: &[Vec<u32>]) -> Vec<(usize, u64)> {
    let mut rows: Vec<(usize, u64)> = d
        .iter()
        .enumerate()
        .map(|(v, row)| (v, row.iter().map(|&x| x as u64).sum()))
        .collect();
    // equal numerators, so higher closeness = lower farness
    rows.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    rows
}

/// Plain greedy over the distance matrix: seed with the top closeness
/// node, then repeatedly add the node giving the smallest distance sum,
/// ties to the lowest id.
pub fn greedy_oracle(d: &[Vec<u32>], k: usize) -> (Vec<usize>, u64) {
    let n = d.len();
    let mut group = vec![closeness_ranking(d)[0].0];
    while group.len() < k {
        let best = (0..n)
            .filter(|u| !group.contains(u))
            .map(|u| {
                let mut with = group.clone();
                with.push(u);
                (group_sum(d, &with), u)
            })
            .min()
            .unwrap();
        group.push(best.1);
    }
    let sum = group_sum(d, &group);
    (group, sum)
}

/// Minimum distance sum over all k-subsets (recursive enumeration).
pub fn optimum_oracle(d: &[Vec<u32>], k: usize) -> u64 {
    fn rec(d: &[Vec<u32>], k: usize, start: usize, chosen: &mut Vec<usize>, best: &mut u64) {
        if chosen.len() == k {
            *best = (*best).min(group_sum(d, chosen));
            return;
        }
        for j in start..d.len() {
            chosen.push(j);
            rec(d, k, j + 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = u64::MAX;
    rec(d, k, 0, &mut Vec::new(), &mut best);
    best
}

pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_connected(n, p, &mut rng)
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn load_fixture(name: &str) -> Option<(Graph, IngestReport)> {
    let path = data_path(name);
    let file = std::fs::File::open(path).ok()?;
    Some(load_edge_list(std::io::BufReader::new(file), &LoadOptions::default()).expect("fixture parses"))
}
