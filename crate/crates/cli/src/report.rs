//! Serializable reports and their text/CSV/JSON renderings.

use std::io::Write;

use gcm_core::greedy::IterationTrace;
use gcm_core::Graph;
use serde::Serialize;

use crate::args::Format;
use crate::CliError;

/// Graph counts before and after the connectivity fix-up.
#[derive(Clone, Debug, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub duplicates_dropped: usize,
    pub self_loops_dropped: usize,
    pub lcc_nodes: usize,
    pub lcc_edges: usize,
}

/// One group-closeness run. JSON and CSV carry the same fields.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    #[serde(flatten)]
    pub graph: GraphStats,
    pub algorithm: String,
    pub k: usize,
    pub threads: usize,
    pub lazy: bool,
    pub group: Vec<String>,
    pub distance_sum: u64,
    pub score: f64,
    pub wall_ms: f64,
    pub evaluated: Option<u64>,
    pub skipped: Option<u64>,
    pub visited: Option<u64>,
    pub peak_vector_bytes: Option<u64>,
}

pub const RUN_CSV_HEADER: [&str; 18] = [
    "nodes",
    "edges",
    "duplicates_dropped",
    "self_loops_dropped",
    "lcc_nodes",
    "lcc_edges",
    "algorithm",
    "k",
    "threads",
    "lazy",
    "group",
    "distance_sum",
    "score",
    "wall_ms",
    "evaluated",
    "skipped",
    "visited",
    "peak_vector_bytes",
];

fn opt(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunReport {
    fn csv_row(&self) -> Vec<String> {
        let g = &self.graph;
        vec![
            g.nodes.to_string(),
            g.edges.to_string(),
            g.duplicates_dropped.to_string(),
            g.self_loops_dropped.to_string(),
            g.lcc_nodes.to_string(),
            g.lcc_edges.to_string(),
            self.algorithm.clone(),
            self.k.to_string(),
            self.threads.to_string(),
            self.lazy.to_string(),
            self.group.join(" "),
            self.distance_sum.to_string(),
            self.score.to_string(),
            self.wall_ms.to_string(),
            opt(self.evaluated),
            opt(self.skipped),
            opt(self.visited),
            opt(self.peak_vector_bytes),
        ]
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Json => json_line(self, out),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(RUN_CSV_HEADER)?;
                w.write_record(self.csv_row())?;
                w.flush()?;
                Ok(())
            }
            Format::Text => {
                for (key, value) in RUN_CSV_HEADER.iter().zip(self.csv_row()) {
                    if !value.is_empty() {
                        writeln!(out, "{key:<20} {value}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

pub fn json_line<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// `iteration,node_label,gain,evaluated,skipped,visited`; the seed row has
/// an empty gain.
pub fn write_trace(g: &Graph, trace: &[IterationTrace], out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "node_label", "gain", "evaluated", "skipped", "visited"])?;
    for (i, t) in trace.iter().enumerate() {
        w.write_record([
            i.to_string(),
            g.label(t.node),
            opt(t.gain),
            t.evaluated.to_string(),
            t.skipped.to_string(),
            t.visited.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub node_label: String,
    pub closeness: f64,
    pub distance_sum: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapRow {
    pub k: usize,
    pub overlap_topk_pct: f64,
    pub overlap_degree_pct: f64,
    pub group: Vec<String>,
    pub topk: Vec<String>,
    pub degree: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub algo: String,
    pub k: usize,
    pub threads: usize,
    pub lazy: bool,
    pub wall_ms: f64,
    pub distance_sum: u64,
    pub score: f64,
    pub evaluated: Option<u64>,
    pub skipped: Option<u64>,
    pub visited: Option<u64>,
    pub peak_vector_bytes: Option<u64>,
    /// Wall time of greedy-ref at the same k divided by this row's.
    pub speedup_vs_ref: Option<f64>,
}

/// Writes rows as one CSV table, a JSON array, or aligned text. CSV and
/// text use the listed columns only.
pub fn write_table<T: Serialize>(
    rows: &[T],
    columns: &[&str],
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if format == Format::Json {
        return json_line(&rows, out);
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let value = serde_json::to_value(row).expect("report rows serialize");
            columns
                .iter()
                .map(|c| match &value[*c] {
                    serde_json::Value::Null => String::new(),
                    serde_json::Value::String(s) => s.clone(),
                    v => v.to_string(),
                })
                .collect()
        })
        .collect();
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(columns)?;
        for row in &cells {
            w.write_record(row)?;
        }
        w.flush()?;
        return Ok(());
    }
    let widths: Vec<usize> = (0..columns.len())
        .map(|i| cells.iter().map(|r| r[i].len()).chain([columns[i].len()]).max().unwrap())
        .collect();
    let line = |out: &mut dyn Write, fields: Vec<&str>| -> std::io::Result<()> {
        let padded: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:<w$}")).collect();
        writeln!(out, "{}", padded.join("  ").trim_end())
    };
    line(out, columns.to_vec())?;
    for row in &cells {
        line(out, row.iter().map(String::as_str).collect())?;
    }
    Ok(())
}
