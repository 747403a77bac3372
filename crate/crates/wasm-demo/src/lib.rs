//! Browser bindings for the group closeness solvers. The page in `www/`
//! draws the graph and calls three operations: a greedy group, the top-k
//! closeness ranking, and scoring a hand-picked group.
//!
//! The operations live in [`ops`] as plain Rust so they can be tested off
//! the browser; the `Demo` wrapper only converts errors and JSON.

use gcm_core::generators::{barabasi_albert, grid, random_connected};
use gcm_core::graph::{is_connected, largest_connected_component, load_edge_list, LoadOptions};
use gcm_core::{GcmError, Graph};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

pub mod ops;

/// Parses pasted edge-list text and keeps the largest component.
pub fn parse_graph(text: &str) -> Result<Graph, GcmError> {
    let (g, _) = load_edge_list(text.as_bytes(), &LoadOptions::default())?;
    Ok(if is_connected(&g) { g } else { largest_connected_component(&g) })
}

/// `kind` is `ba` (preferential attachment, 2 edges per node), `random`
/// (tree plus sparse extra edges) or `grid` (closest square grid).
pub fn generate_graph(kind: &str, n: usize, seed: u32) -> Result<Graph, GcmError> {
    if !(4..=5000).contains(&n) {
        return Err(GcmError::InvalidArgument(format!("node count {n} outside 4..=5000")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    match kind {
        "ba" => Ok(barabasi_albert(n, 2, &mut rng)),
        "random" => Ok(random_connected(n, 1.5 / n as f64, &mut rng)),
        "grid" => {
            let side = (n as f64).sqrt().round().max(2.0) as usize;
            Ok(grid(side, side))
        }
        other => Err(GcmError::InvalidArgument(format!("unknown graph kind {other:?}"))),
    }
}

fn js<T: serde::Serialize>(r: Result<T, GcmError>) -> Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub struct Demo {
    graph: Graph,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(js_name = fromEdgeList)]
    pub fn from_edge_list(text: &str) -> Result<Demo, JsError> {
        parse_graph(text)
            .map(|graph| Demo { graph })
            .map_err(|e| JsError::new(&e.to_string()))
    }

    pub fn generate(kind: &str, n: usize, seed: u32) -> Result<Demo, JsError> {
        generate_graph(kind, n, seed)
            .map(|graph| Demo { graph })
            .map_err(|e| JsError::new(&e.to_string()))
    }

    #[wasm_bindgen(js_name = nodeCount)]
    pub fn node_count(&self) -> usize {
        self.graph.n()
    }

    /// Edges as a flat `[u0, v0, u1, v1, ...]` array.
    pub fn edges(&self) -> Vec<u32> {
        self.graph.edges().flat_map(|(u, v)| [u as u32, v as u32]).collect()
    }

    /// JSON array of node labels.
    pub fn labels(&self) -> String {
        let labels: Vec<String> = (0..self.graph.n()).map(|u| self.graph.label(u)).collect();
        serde_json::to_string(&labels).expect("strings serialize")
    }

    /// JSON [`ops::GreedySummary`].
    pub fn greedy(&self, k: usize) -> Result<String, JsError> {
        js(ops::greedy(&self.graph, k))
    }

    /// JSON list of [`ops::Ranked`].
    #[wasm_bindgen(js_name = topK)]
    pub fn top_k(&self, k: usize) -> Result<String, JsError> {
        js(ops::top_k(&self.graph, k))
    }

    /// JSON [`ops::Evaluation`] of the given node ids.
    pub fn evaluate(&self, members: Vec<u32>) -> Result<String, JsError> {
        let members: Vec<usize> = members.into_iter().map(|u| u as usize).collect();
        js(ops::evaluate(&self.graph, &members))
    }
}
