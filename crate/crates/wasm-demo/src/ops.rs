use gcm_core::bitgreedy::{bit_greedy_pp, BitGreedyOptions};
use gcm_core::exact::{binomial, exact_group_enumeration};
use gcm_core::greedy::{greedy_pp, GreedyOptions, DistanceToSet};
use gcm_core::{degree_group, overlap_percent, top_k_closeness, GcmError, Graph};
use serde::Serialize;

/// Above this many subsets the hand-picked group is not compared with the
/// optimum.
const OPTIMUM_BUDGET: u128 = 200_000;

/// Bit-parallel vectors are skipped past this size to keep the page light.
const BIT_MEMORY_CAP: u64 = 64 << 20;

#[derive(Debug, Serialize)]
pub struct Step {
    pub node: usize,
    pub gain: Option<u64>,
    pub evaluated: u64,
    pub skipped: u64,
    pub visited: u64,
}

#[derive(Debug, Serialize)]
pub struct GreedySummary {
    pub group: Vec<usize>,
    pub distance_sum: u64,
    pub score: f64,
    pub steps: Vec<Step>,
    /// Distance sum from the bit-parallel solver; equal to `distance_sum`.
    pub bit_distance_sum: Option<u64>,
    pub bit_peak_bytes: Option<u64>,
    pub degree_overlap_pct: f64,
    /// Distance to the nearest group member, per node.
    pub dist: Vec<u32>,
}

pub fn greedy(g: &Graph, k: usize) -> Result<GreedySummary, GcmError> {
    let r = greedy_pp(g, k, GreedyOptions::default())?;
    let bit = bit_greedy_pp(g, k, BitGreedyOptions { lazy: true, memory_cap: BIT_MEMORY_CAP });
    let (bit_distance_sum, bit_peak_bytes) = match bit {
        Ok(b) => (Some(b.distance_sum), b.peak_vector_bytes),
        Err(GcmError::Capacity { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    let degree = degree_group(g, k)?;
    let dist = DistanceToSet::new(g, &r.group)?.dist().to_vec();
    Ok(GreedySummary {
        score: r.score(),
        degree_overlap_pct: overlap_percent(&r.group, &degree, k)?,
        steps: r
            .gain_trace
            .iter()
            .map(|t| Step { node: t.node, gain: t.gain, evaluated: t.evaluated, skipped: t.skipped, visited: t.visited })
            .collect(),
        group: r.group,
        distance_sum: r.distance_sum,
        bit_distance_sum,
        bit_peak_bytes,
        dist,
    })
}

#[derive(Debug, Serialize)]
pub struct Ranked {
    pub node: usize,
    pub closeness: f64,
    pub distance_sum: u64,
}

pub fn top_k(g: &Graph, k: usize) -> Result<Vec<Ranked>, GcmError> {
    Ok(top_k_closeness(g, k)?
        .ranking
        .into_iter()
        .map(|(node, c)| Ranked { node, closeness: c.value(), distance_sum: c.farness })
        .collect())
}

#[derive(Debug, Serialize)]
pub struct Evaluation {
    pub distance_sum: u64,
    pub score: f64,
    pub dist: Vec<u32>,
    /// Greedy distance sum for a group of the same size.
    pub greedy_distance_sum: Option<u64>,
    /// Optimum for the same size when enumeration is cheap.
    pub optimum_distance_sum: Option<u64>,
}

pub fn evaluate(g: &Graph, members: &[usize]) -> Result<Evaluation, GcmError> {
    if members.is_empty() {
        return Err(GcmError::InvalidArgument("pick at least one node".into()));
    }
    let ds = DistanceToSet::new(g, members)?;
    let size = ds.members().len();
    let n = g.n();
    let score = if ds.total() == 0 { 0.0 } else { (n - size) as f64 / ds.total() as f64 };
    let greedy_distance_sum = (size < n)
        .then(|| greedy_pp(g, size, GreedyOptions::default()).map(|r| r.distance_sum))
        .transpose()?;
    let optimum_distance_sum = (binomial(n, size) <= OPTIMUM_BUDGET)
        .then(|| exact_group_enumeration(g, size, OPTIMUM_BUDGET).map(|r| r.distance_sum))
        .transpose()?;
    Ok(Evaluation {
        distance_sum: ds.total(),
        score,
        dist: ds.dist().to_vec(),
        greedy_distance_sum,
        optimum_distance_sum,
    })
}
