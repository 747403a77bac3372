//! The `gcm` command line: argument handling, graph loading and report
//! output. [`run`] is the whole program minus process exit, so tests can
//! drive it in-process.

pub mod args;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::time::Instant;

use clap::Parser;
use gcm_core::baselines::{degree_group, greedy_reference, overlap_report};
use gcm_core::bitgreedy::{bit_greedy_pp, BitGreedyOptions};
use gcm_core::exact::{approximation_ratio, exact_group_branch_and_bound, exact_group_enumeration, export_ilp};
use gcm_core::graph::{connected_components, largest_connected_component, load_edge_list, LoadOptions, Separator};
use gcm_core::greedy::{greedy_pp, group_closeness, GreedyOptions, IterationTrace};
use gcm_core::{top_k_closeness, GcmError, Graph};
use serde::Serialize;
use thiserror::Error;

use args::*;
use report::*;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_PARSE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] GcmError),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
    #[error("objective mismatch: {0}")]
    Objective(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                GcmError::Capacity { .. } => EXIT_CAPACITY,
                GcmError::Parse { .. } | GcmError::EmptyGraph => EXIT_PARSE,
                GcmError::InvalidK { .. }
                | GcmError::InvalidArgument(_)
                | GcmError::SizeMismatch(_)
                | GcmError::UndefinedMeasure(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            },
            _ => EXIT_FAILURE,
        }
    }
}

/// Parses `argv` and runs the selected subcommand. Returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::GroupCloseness(a) => group_closeness_cmd(a, out, err),
        Command::TopK(a) => top_k_cmd(a, out, err),
        Command::Exact(a) => exact_cmd(a, out, err),
        Command::ExportIlp(a) => export_ilp_cmd(a, out, err),
        Command::Overlap(a) => overlap_cmd(a, out, err),
        Command::Bench(a) => bench_cmd(a, out, err),
    }
}

/// A connected graph ready for the solvers.
pub struct Loaded {
    pub graph: Graph,
    pub stats: GraphStats,
}

/// Reads the edge list and keeps its largest component, warning on `err`
/// when nodes are dropped.
pub fn load(input: &InputArgs, err: &mut dyn Write) -> Result<Loaded, CliError> {
    let reader: Box<dyn BufRead> = if input.input.as_os_str() == "-" {
        Box::new(BufReader::new(io::stdin()))
    } else {
        let file = File::open(&input.input)
            .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", input.input.display())))?;
        Box::new(BufReader::new(file))
    };
    let options = LoadOptions {
        separator: input.delimiter.map_or(Separator::Whitespace, Separator::Char),
        ..LoadOptions::default()
    };
    let (graph, ingest) = load_edge_list(reader, &options)?;
    let (components, _) = connected_components(&graph);
    let graph = if components > 1 {
        let lcc = largest_connected_component(&graph);
        writeln!(
            err,
            "warning: input has {components} components; using the largest ({} of {} nodes)",
            lcc.n(),
            graph.n()
        )?;
        lcc
    } else {
        graph
    };
    let stats = GraphStats {
        nodes: ingest.nodes,
        edges: ingest.edges,
        duplicates_dropped: ingest.duplicates_dropped,
        self_loops_dropped: ingest.self_loops_dropped,
        lcc_nodes: graph.n(),
        lcc_edges: graph.m(),
    };
    Ok(Loaded { graph, stats })
}

/// Solver settings shared by `group-closeness` and `bench`.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub threads: usize,
    pub lazy: bool,
    pub mem_cap: u64,
    pub budget: u128,
}

/// Output of one algorithm call. `wall_ms` covers the call only.
pub struct Solved {
    pub group: Vec<usize>,
    pub distance_sum: u64,
    pub wall_ms: f64,
    pub evaluated: Option<u64>,
    pub skipped: Option<u64>,
    pub visited: Option<u64>,
    pub peak_vector_bytes: Option<u64>,
    pub trace: Option<Vec<IterationTrace>>,
}

pub fn solve(g: &Graph, algo: Algo, k: usize, o: SolveOptions) -> Result<Solved, CliError> {
    let start = Instant::now();
    let elapsed = |start: Instant| start.elapsed().as_secs_f64() * 1e3;
    let from_group = |r: gcm_core::GroupResult, wall_ms: f64| Solved {
        evaluated: Some(r.total_evaluated()),
        skipped: Some(r.total_skipped()),
        visited: Some(r.total_visited()),
        peak_vector_bytes: r.peak_vector_bytes,
        group: r.group,
        distance_sum: r.distance_sum,
        wall_ms,
        trace: Some(r.gain_trace),
    };
    let plain = |group: Vec<usize>, wall_ms: f64| -> Result<Solved, CliError> {
        let distance_sum = group_closeness(g, &group)?.distance_sum;
        Ok(Solved {
            group,
            distance_sum,
            wall_ms,
            evaluated: None,
            skipped: None,
            visited: None,
            peak_vector_bytes: None,
            trace: None,
        })
    };
    match algo {
        Algo::GreedyPp => {
            let r = greedy_pp(g, k, GreedyOptions { lazy: o.lazy, threads: o.threads })?;
            Ok(from_group(r, elapsed(start)))
        }
        Algo::BitGreedyPp => {
            let r = bit_greedy_pp(g, k, BitGreedyOptions { lazy: o.lazy, memory_cap: o.mem_cap })?;
            Ok(from_group(r, elapsed(start)))
        }
        Algo::GreedyRef => {
            let r = greedy_reference(g, k, gcm_core::baselines::DEFAULT_REFERENCE_MAX_NODES)?;
            Ok(from_group(r, elapsed(start)))
        }
        Algo::Exact => {
            let r = exact_group_enumeration(g, k, o.budget)?;
            let wall_ms = elapsed(start);
            Ok(Solved {
                evaluated: Some(r.subsets_evaluated),
                ..plain(r.group, wall_ms)?
            })
        }
        Algo::Degree => {
            let group = degree_group(g, k)?;
            plain(group, elapsed(start))
        }
        Algo::Topk => {
            let top = top_k_closeness(g, k)?;
            let wall_ms = elapsed(start);
            let cut = top
                .state
                .scores
                .iter()
                .filter(|s| **s == gcm_core::closeness::NodeScore::Cut)
                .count() as u64;
            let group = top.ranking.iter().map(|&(v, _)| v).collect();
            Ok(Solved {
                evaluated: Some(g.n() as u64 - cut),
                skipped: Some(cut),
                visited: Some(top.visits),
                ..plain(group, wall_ms)?
            })
        }
    }
}

fn labels(g: &Graph, nodes: &[usize]) -> Vec<String> {
    nodes.iter().map(|&u| g.label(u)).collect()
}

fn score(n: usize, k: usize, distance_sum: u64) -> f64 {
    if distance_sum == 0 {
        0.0
    } else {
        (n - k) as f64 / distance_sum as f64
    }
}

fn group_closeness_cmd(a: GroupArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    if a.trace_csv.is_some() && !a.algo.has_trace() {
        return Err(CliError::Usage(format!("--trace-csv needs a greedy algorithm, not {}", a.algo.name())));
    }
    let Loaded { graph: g, stats } = load(&a.input, err)?;
    let threads = a.threads.resolve();
    let lazy = !a.no_lazy;
    let options = SolveOptions { threads, lazy, mem_cap: a.mem_cap, budget: a.budget };
    let s = solve(&g, a.algo, a.k, options)?;
    if let (Some(path), Some(trace)) = (&a.trace_csv, &s.trace) {
        write_trace(&g, trace, File::create(path)?)?;
    }
    let report = RunReport {
        graph: stats,
        algorithm: a.algo.name().to_string(),
        k: s.group.len(),
        threads,
        lazy,
        group: labels(&g, &s.group),
        distance_sum: s.distance_sum,
        score: score(g.n(), s.group.len(), s.distance_sum),
        wall_ms: s.wall_ms,
        evaluated: s.evaluated,
        skipped: s.skipped,
        visited: s.visited,
        peak_vector_bytes: s.peak_vector_bytes,
    };
    report.write(a.format, out)
}

fn top_k_cmd(a: TopKArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let Loaded { graph: g, .. } = load(&a.input, err)?;
    let top = top_k_closeness(&g, a.k)?;
    let rows: Vec<RankRow> = top
        .ranking
        .iter()
        .enumerate()
        .map(|(i, &(v, c))| RankRow {
            rank: i + 1,
            node_label: g.label(v),
            closeness: c.value(),
            distance_sum: c.farness,
        })
        .collect();
    write_table(&rows, &["rank", "node_label", "closeness", "distance_sum"], a.format, out)
}

#[derive(Serialize)]
struct ExactReport {
    #[serde(flatten)]
    graph: GraphStats,
    method: &'static str,
    k: usize,
    group: Vec<String>,
    distance_sum: u64,
    score: f64,
    subsets_evaluated: u64,
    wall_ms: f64,
    greedy_distance_sum: u64,
    ratio: f64,
}

fn exact_cmd(a: ExactArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let Loaded { graph: g, stats } = load(&a.input, err)?;
    let start = Instant::now();
    let (method, r) = match a.method {
        ExactMethod::Enumerate => ("enumerate", exact_group_enumeration(&g, a.k, a.budget)?),
        ExactMethod::Bnb => ("bnb", exact_group_branch_and_bound(&g, a.k, a.max_nodes)?),
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let greedy = greedy_pp(&g, a.k, GreedyOptions { lazy: true, threads: a.threads.resolve() })?;
    let report = ExactReport {
        graph: stats,
        method,
        k: a.k,
        group: labels(&g, &r.group),
        distance_sum: r.distance_sum,
        score: r.score(),
        subsets_evaluated: r.subsets_evaluated,
        wall_ms,
        greedy_distance_sum: greedy.distance_sum,
        ratio: approximation_ratio(&r, &greedy)?,
    };
    let columns = [
        "method",
        "k",
        "distance_sum",
        "score",
        "subsets_evaluated",
        "wall_ms",
        "greedy_distance_sum",
        "ratio",
    ];
    match a.format {
        Format::Json => json_line(&report, out),
        _ => {
            write_table(std::slice::from_ref(&report), &columns, a.format, out)?;
            if a.format == Format::Text {
                writeln!(out, "group: {}", report.group.join(" "))?;
            }
            Ok(())
        }
    }
}

fn export_ilp_cmd(a: IlpArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let Loaded { graph: g, .. } = load(&a.input, err)?;
    let stats = match &a.output {
        Some(path) => export_ilp(&g, a.k, a.max_nodes, File::create(path)?)?,
        None => export_ilp(&g, a.k, a.max_nodes, &mut *out)?,
    };
    writeln!(
        err,
        "wrote {} constraints and {} binary variables for n={} k={}",
        stats.constraints,
        stats.binaries,
        g.n(),
        a.k
    )?;
    Ok(())
}

fn overlap_cmd(a: OverlapArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let Loaded { graph: g, .. } = load(&a.input, err)?;
    let options = GreedyOptions { lazy: true, threads: a.threads.resolve() };
    let rows = a
        .k
        .iter()
        .map(|&k| {
            let r = overlap_report(&g, k, options)?;
            Ok(OverlapRow {
                k,
                overlap_topk_pct: r.overlap_topk_pct,
                overlap_degree_pct: r.overlap_degree_pct,
                group: labels(&g, &r.group),
                topk: labels(&g, &r.topk),
                degree: labels(&g, &r.degree),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    write_table(&rows, &["k", "overlap_topk_pct", "overlap_degree_pct"], a.format, out)
}

pub const BENCH_COLUMNS: [&str; 12] = [
    "algo",
    "k",
    "threads",
    "lazy",
    "wall_ms",
    "distance_sum",
    "score",
    "evaluated",
    "skipped",
    "visited",
    "peak_vector_bytes",
    "speedup_vs_ref",
];

fn bench_cmd(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let Loaded { graph: g, .. } = load(&a.input, err)?;
    let threads = a.threads.resolve();
    let options = SolveOptions { threads, lazy: !a.no_lazy, mem_cap: a.mem_cap, budget: a.budget };
    let mut rows = Vec::new();
    for &k in &a.ks {
        let first = rows.len();
        for &algo in &a.algos {
            let s = solve(&g, algo, k, options)?;
            rows.push(BenchRow {
                algo: algo.name().to_string(),
                k,
                threads,
                lazy: options.lazy,
                wall_ms: s.wall_ms,
                distance_sum: s.distance_sum,
                score: score(g.n(), k, s.distance_sum),
                evaluated: s.evaluated,
                skipped: s.skipped,
                visited: s.visited,
                peak_vector_bytes: s.peak_vector_bytes,
                speedup_vs_ref: None,
            });
        }
        let this_k = &mut rows[first..];
        if let Some(reference) = this_k.iter().find(|r| r.algo == Algo::GreedyRef.name()).map(|r| r.wall_ms) {
            for row in this_k.iter_mut() {
                row.speedup_vs_ref = Some(reference / row.wall_ms.max(1e-6));
            }
        }
        if a.check_objective {
            let sums: Vec<(&str, u64)> = this_k
                .iter()
                .filter(|r| ["greedy++", "bitgreedy++", "greedy-ref"].contains(&r.algo.as_str()))
                .map(|r| (r.algo.as_str(), r.distance_sum))
                .collect();
            if sums.windows(2).any(|w| w[0].1 != w[1].1) {
                return Err(CliError::Objective(format!("k={k}: {sums:?}")));
            }
        }
    }
    write_table(&rows, &BENCH_COLUMNS, a.format, out)
}
