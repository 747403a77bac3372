//! End-to-end checks against published and derived reference values.
//! Runs without the libtest harness so every PASS/FAIL line is printed;
//! exits non-zero if any check fails.

mod common;

use std::time::Instant;

use common::*;
use gcm_core::bitgreedy::{bit_greedy_pp, required_vector_bytes, BitGreedyOptions, DEFAULT_MEMORY_CAP};
use gcm_core::exact::{approximation_ratio, exact_group_branch_and_bound, exact_group_enumeration, export_ilp};
use gcm_core::generators::{barabasi_albert, path};
use gcm_core::graph::{bfs_distances, is_connected};
use gcm_core::greedy::{greedy_pp, pruned_sssp_gain, DistanceToSet, GreedyOptions};
use gcm_core::{greedy_reference, overlap_percent, overlap_report, top_k_closeness, GcmError, Graph};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ONE_MINUS_INV_E: f64 = 1.0 - 1.0 / std::f64::consts::E;

struct Report {
    failed: Vec<String>,
}

impl Report {
    fn check(&mut self, id: &str, ok: bool, detail: impl AsRef<str>) {
        let status = if ok { "PASS" } else { "FAIL" };
        println!("{status} [{id}] {}", detail.as_ref());
        if !ok {
            self.failed.push(id.to_string());
        }
    }

    fn not_run(&self, id: &str, why: &str) {
        println!("NOT RUN [{id}] {why}");
    }

    fn info(&self, id: &str, detail: impl AsRef<str>) {
        println!("  info [{id}] {}", detail.as_ref());
    }
}

/// A published small graph: fixture file, node and edge counts, and
/// distance sums for (k=2 optimum, k=2 greedy, k=10 greedy).
struct Reference {
    name: &'static str,
    file: &'static str,
    nodes: usize,
    edges: usize,
    k2_exact: u64,
    k2_greedy: u64,
    k10_greedy: u64,
}

const REFERENCES: [Reference; 3] = [
    Reference { name: "karate", file: "karate.txt", nodes: 35, edges: 78, k2_exact: 37, k2_greedy: 37, k10_greedy: 25 },
    Reference { name: "contiguous-usa", file: "contiguous-usa.txt", nodes: 49, edges: 107, k2_exact: 99, k2_greedy: 99, k10_greedy: 41 },
    Reference { name: "jazz", file: "jazz.txt", nodes: 198, edges: 2742, k2_exact: 259, k2_greedy: 261, k10_greedy: 192 },
];

fn ba(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    barabasi_albert(n, 3, &mut rng)
}

fn greedy(g: &Graph, k: usize) -> gcm_core::GroupResult {
    greedy_pp(g, k, GreedyOptions::default()).unwrap()
}

/// Criteria 1 and 2 share this: exact values when the loaded counts match,
/// otherwise a recomputed optimum with ratio >= 0.97 and the greedy bound.
fn small_graph_check(rep: &mut Report, id: &str, r: &Reference, k: usize) {
    let Some((g, ingest)) = load_fixture(r.file) else {
        rep.not_run(id, &format!("{}: tests/data/{} not present", r.name, r.file));
        return;
    };
    let counts_match = ingest.nodes == r.nodes && ingest.edges == r.edges;
    let t = Instant::now();
    let gr = greedy(&g, k);
    let (want_exact, want_greedy) = if k == 2 { (Some(r.k2_exact), r.k2_greedy) } else { (None, r.k10_greedy) };

    if counts_match {
        rep.check(
            id,
            gr.distance_sum == want_greedy,
            format!("{} k={k} greedy distance_sum {} (reference {want_greedy})", r.name, gr.distance_sum),
        );
        if let Some(want) = want_exact {
            let ex = exact_group_enumeration(&g, k, u128::MAX).unwrap();
            rep.check(
                id,
                ex.distance_sum == want,
                format!("{} k={k} optimum distance_sum {} (reference {want})", r.name, ex.distance_sum),
            );
        }
    } else {
        rep.info(
            id,
            format!(
                "{}: loaded {} nodes / {} edges, reference {} / {}; using recomputed optimum",
                r.name, ingest.nodes, ingest.edges, r.nodes, r.edges
            ),
        );
        let ex = if k == 2 {
            exact_group_enumeration(&g, k, u128::MAX).unwrap()
        } else {
            exact_group_branch_and_bound(&g, k, 2000).unwrap()
        };
        let ratio = approximation_ratio(&ex, &gr).unwrap();
        rep.check(
            id,
            ratio >= 0.97 && gr.score() >= ONE_MINUS_INV_E * ex.score(),
            format!(
                "{} k={k} optimum {} greedy {} ratio {ratio:.4} (>= 0.97, >= 1-1/e)",
                r.name, ex.distance_sum, gr.distance_sum
            ),
        );
    }
    rep.info(id, format!("{} k={k} took {:.2?}", r.name, t.elapsed()));
}

/// Structural validation of the exported LP for k=10.
fn lp_check(rep: &mut Report, r: &Reference) {
    let Some((g, _)) = load_fixture(r.file) else {
        rep.not_run("2", &format!("{}: LP export, fixture not present", r.name));
        return;
    };
    let n = g.n();
    let mut buf = Vec::new();
    let stats = export_ilp(&g, 10, 5000, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let order: Vec<usize> = ["Minimize", "Subject To", "Binary", "End"]
        .iter()
        .map(|s| text.lines().position(|l| l.trim() == *s).unwrap_or(usize::MAX))
        .collect();
    let sections_ok = order.windows(2).all(|w| w[0] < w[1]) && order[3] != usize::MAX;
    let cardinality_ok = text.lines().any(|l| l.trim_start().starts_with("cardinality:")) && text.contains("= 10");
    // objective coefficients sum to the total pairwise distance
    let total: u64 = (0..n).map(|s| bfs_distances(&g, s).unwrap().sum()).sum();
    let objective: Vec<&str> = text
        .lines()
        .skip(order[0] + 1)
        .take(order[1] - order[0] - 1)
        .flat_map(|l| l.split_whitespace())
        .collect();
    let objective_terms = objective.iter().filter(|t| t.starts_with("x_")).count();
    let coeff_sum: u64 = objective.iter().filter_map(|t| t.parse::<u64>().ok()).sum();
    let ok = sections_ok
        && stats.constraints == n + 1 + n * n
        && stats.binaries == n * n + n
        && objective_terms == n * n
        && cardinality_ok
        && coeff_sum == total
        && text.lines().all(|l| l.len() <= 510);
    rep.check(
        "2",
        ok,
        format!(
            "{} LP k=10: {} constraints, {} binaries, {} objective terms, coefficient sum {coeff_sum}",
            r.name, stats.constraints, stats.binaries, objective_terms
        ),
    );
}

fn random_suite() -> Vec<(Graph, usize)> {
    let mut out = Vec::new();
    for i in 0..200u64 {
        let n = 8 + (i as usize % 11);
        let p = [0.1, 0.2, 0.35][i as usize % 3];
        let g = random_graph(n, p, 0xacce_0000 + i);
        out.push((g, 2 + (i as usize % 2)));
    }
    out
}

fn criteria_3_4(rep: &mut Report) {
    let t = Instant::now();
    let mut violations = 0;
    let mut log_sum = 0.0;
    let mut min_ratio = f64::INFINITY;
    let suite = random_suite();
    for (g, k) in &suite {
        assert!(is_connected(g));
        let ex = exact_group_enumeration(g, *k, u128::MAX).unwrap();
        let gr = greedy(g, *k);
        if gr.score() < ONE_MINUS_INV_E * ex.score() {
            violations += 1;
        }
        let ratio = approximation_ratio(&ex, &gr).unwrap();
        log_sum += ratio.ln();
        min_ratio = min_ratio.min(ratio);
    }
    rep.check(
        "3",
        violations == 0,
        format!("{} random graphs n in [8,18], k in {{2,3}}: {violations} violations of c(greedy) >= (1-1/e) c(opt)", suite.len()),
    );
    let geo = (log_sum / suite.len() as f64).exp();
    rep.check(
        "4",
        geo >= 0.95 && min_ratio >= 0.75,
        format!("exact/greedy geometric mean {geo:.4} (>= 0.95), minimum {min_ratio:.4} (>= 0.75)"),
    );
    let p5 = path(5);
    let ratio = approximation_ratio(
        &exact_group_enumeration(&p5, 2, u128::MAX).unwrap(),
        &greedy(&p5, 2),
    )
    .unwrap();
    rep.check("4", ratio == 0.75, format!("P5 k=2 exact/greedy = {ratio} (0.75)"));
    rep.info("3-4", format!("took {:.2?}", t.elapsed()));
}

fn criterion_5(rep: &mut Report) {
    let t = Instant::now();

    let mut mismatches = 0;
    for i in 0..100u64 {
        let n = 10 + (i as usize * 7 % 91);
        let g = random_graph(n, 0.05 + 0.1 * (i % 3) as f64, 0x5a00 + i);
        let k = 1 + (i as usize % 5);
        let d = apsp(&g);
        let a = greedy(&g, k).distance_sum;
        let b = greedy_reference(&g, k, 2000).unwrap().distance_sum;
        if a != b || a != greedy_oracle(&d, k).1 {
            mismatches += 1;
        }
    }
    rep.check("5a", mismatches == 0, format!("greedy_pp vs matrix greedy on 100 graphs (n <= 100, k <= 5): {mismatches} mismatches"));

    let mut checked = 0;
    let mut mismatches = 0;
    for i in 0..50u64 {
        let g = random_graph(20 + i as usize * 3, 0.08, 0x5b00 + i);
        let d = apsp(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(i);
        let group = sample(&mut rng, g.n(), 1 + i as usize % 4).into_vec();
        let ds = DistanceToSet::new(&g, &group).unwrap();
        let before = group_sum(&d, &group);
        for u in (0..g.n()).filter(|u| !group.contains(u)) {
            let mut with = group.clone();
            with.push(u);
            checked += 1;
            if pruned_sssp_gain(&g, u, &ds).unwrap().gain != before - group_sum(&d, &with) {
                mismatches += 1;
            }
        }
    }
    rep.check("5b", mismatches == 0, format!("pruned gain vs brute force on {checked} (graph, set, node) cases: {mismatches} mismatches"));

    let mut runs = 0;
    let mut mismatches = 0;
    for i in 0..40u64 {
        let g = random_graph(30 + i as usize * 10, 0.03, 0x5c00 + i);
        for k in [1, 2, 5, 10] {
            for lazy in [false, true] {
                runs += 1;
                let a = bit_greedy_pp(&g, k, BitGreedyOptions { lazy, memory_cap: DEFAULT_MEMORY_CAP }).unwrap();
                if a.distance_sum != greedy(&g, k).distance_sum {
                    mismatches += 1;
                }
            }
        }
    }
    rep.check("5c", mismatches == 0, format!("bit-parallel vs pruned greedy on {runs} runs: {mismatches} mismatches"));

    let mut runs = 0;
    let mut mismatches = 0;
    for i in 0..40u64 {
        let g = random_graph(20 + i as usize * 7, 0.04, 0x5d00 + i);
        let brute = closeness_ranking(&apsp(&g));
        for k in [1, 5, 10] {
            runs += 1;
            let top = top_k_closeness(&g, k).unwrap();
            let mut got: Vec<u64> = top.ranking.iter().map(|(_, c)| c.farness).collect();
            let mut want: Vec<u64> = brute[..k].iter().map(|&(_, f)| f).collect();
            got.sort();
            want.sort();
            if got != want {
                mismatches += 1;
            }
        }
    }
    rep.check("5d", mismatches == 0, format!("top-k closeness vs APSP ranking on {runs} runs: {mismatches} score-multiset mismatches"));
    rep.info("5", format!("took {:.2?}", t.elapsed()));
}

fn criterion_6(rep: &mut Report) {
    let g = ba(10_000, 6);
    let (n, k) = (g.n(), 100);
    let t = Instant::now();
    let r = greedy(&g, k);
    let elapsed = t.elapsed();
    let evaluated: Vec<u64> = r.gain_trace[1..].iter().map(|t| t.evaluated).collect();
    let half = evaluated.len() / 2;
    let mean = |s: &[u64]| s.iter().sum::<u64>() as f64 / s.len() as f64;
    let (early, late) = (mean(&evaluated[..half]), mean(&evaluated[half..]));
    let below_first = evaluated[1..].iter().all(|&e| e < evaluated[0]);
    rep.check(
        "6a",
        below_first && late < early,
        format!(
            "BA n={n} k={k}: round 1 evaluates {}, later rounds at most {}; mean first half {early:.1}, second half {late:.1}",
            evaluated[0],
            evaluated[1..].iter().max().unwrap()
        ),
    );
    let strictly = evaluated.windows(2).all(|w| w[1] < w[0]);
    rep.info("6a", format!("per-round strictly decreasing: {strictly}; lazy skips {}", r.total_skipped()));

    let pruned: u64 = r.gain_trace[1..].iter().map(|t| t.visited).sum();
    let budget = (k * n) as u64 / 10;
    rep.check("6b", pruned < budget, format!("pruned BFS visits {pruned} vs 10% of k*n = {budget}"));
    let unpruned: u64 = (1..k as u64).map(|i| (n as u64 - i) * n as u64).sum();
    rep.info(
        "6b",
        format!(
            "visits are {:.3}% of unpruned eager work {unpruned}; greedy took {elapsed:.2?}",
            100.0 * pruned as f64 / unpruned as f64
        ),
    );
}

fn criterion_7(rep: &mut Report) {
    const LIVE_SETS: f64 = 2.0;
    for n in [2_000usize, 5_000] {
        let g = ba(n, 7);
        let r = bit_greedy_pp(&g, 5, BitGreedyOptions::default()).unwrap();
        let peak = r.peak_vector_bytes.unwrap() as f64;
        let per_set = (n * n) as f64 / 8.0;
        let ratio = peak / (LIVE_SETS * per_set);
        rep.check(
            "7",
            (0.5..=2.0).contains(&ratio),
            format!("BA n={n}: peak {peak} bytes = {ratio:.3} x (2 live sets x n^2/8)"),
        );
        let required = required_vector_bytes(n) as u64;
        let err = bit_greedy_pp(&g, 5, BitGreedyOptions { lazy: true, memory_cap: required - 1 });
        let below_per_set = bit_greedy_pp(&g, 5, BitGreedyOptions { lazy: true, memory_cap: per_set as u64 });
        rep.check(
            "7",
            matches!(err, Err(GcmError::Capacity { .. })) && matches!(below_per_set, Err(GcmError::Capacity { .. })),
            format!("BA n={n}: capacity error with cap {} and cap n^2/8", required - 1),
        );
    }
}

fn criterion_8(rep: &mut Report) {
    // P7 by hand: greedy {3, 0} (0, 1, 5, 6 all leave sum 8, lowest id wins);
    // top-2 closeness {3, 2} (farness 12, 13, 13); top-2 degree {1, 2}
    let p7 = path(7);
    let r = overlap_report(&p7, 2, GreedyOptions::default()).unwrap();
    rep.check(
        "8",
        r.group == [3, 0] && r.topk == [3, 2] && r.degree == [1, 2] && r.overlap_topk_pct == 50.0 && r.overlap_degree_pct == 0.0,
        format!(
            "P7 k=2: group {:?} topk {:?} degree {:?} -> {}% / {}% (hand: 50% / 0%)",
            r.group, r.topk, r.degree, r.overlap_topk_pct, r.overlap_degree_pct
        ),
    );
    let hand = [
        (vec![1, 2, 3], vec![2, 3, 4], 200.0 / 3.0),
        (vec![5, 9], vec![9, 5], 100.0),
        (vec![0, 1, 2, 3], vec![4, 5, 6, 7], 0.0),
        (vec![7, 8, 9, 10], vec![10, 0, 1, 2], 25.0),
    ];
    let ok = hand
        .iter()
        .all(|(a, b, want)| overlap_percent(a, b, a.len()).unwrap() == *want);
    rep.check("8", ok, "overlap_percent on 4 hand-computed pairs");

    let g = ba(100_000, 8);
    let t = Instant::now();
    let r = overlap_report(&g, 50, GreedyOptions { lazy: true, threads: 4 }).unwrap();
    let in_range = |p: f64| (0.0..=100.0).contains(&p);
    rep.check(
        "8",
        in_range(r.overlap_topk_pct) && in_range(r.overlap_degree_pct),
        format!(
            "BA n={} k=50: overlap with top-k closeness {}%, with top-k degree {}% ({:.2?})",
            g.n(),
            r.overlap_topk_pct,
            r.overlap_degree_pct,
            t.elapsed()
        ),
    );
}

fn criterion_9(rep: &mut Report) {
    let mut graphs: Vec<(String, Graph)> = (0..20u64)
        .map(|i| (format!("random#{i}"), random_graph(200 + 150 * i as usize, 0.005, 0x9000 + i)))
        .collect();
    graphs.push(("BA n=10000".into(), ba(10_000, 9)));
    let t = Instant::now();
    let mut differing = Vec::new();
    for (name, g) in &graphs {
        let k = 25;
        let sums: Vec<(u64, Vec<usize>)> = [1, 4, 16]
            .iter()
            .map(|&threads| {
                let r = greedy_pp(g, k, GreedyOptions { lazy: true, threads }).unwrap();
                (r.distance_sum, r.group)
            })
            .collect();
        if sums.windows(2).any(|w| w[0] != w[1]) {
            differing.push(name.clone());
        }
    }
    rep.check(
        "9",
        differing.is_empty(),
        format!("threads 1/4/16 on {} graphs: identical distance_sum and group except {:?}", graphs.len(), differing),
    );
    rep.info("9", format!("took {:.2?}", t.elapsed()));
}

fn main() {
    let mut rep = Report { failed: Vec::new() };
    let start = Instant::now();

    for r in &REFERENCES {
        small_graph_check(&mut rep, "1", r, 2);
    }
    for r in &REFERENCES {
        small_graph_check(&mut rep, "2", r, 10);
    }
    for r in &REFERENCES {
        lp_check(&mut rep, r);
    }
    criteria_3_4(&mut rep);
    criterion_5(&mut rep);
    criterion_6(&mut rep);
    criterion_7(&mut rep);
    criterion_8(&mut rep);
    criterion_9(&mut rep);

    println!("acceptance finished in {:.2?}", start.elapsed());
    if rep.failed.is_empty() {
        println!("all checks passed");
    } else {
        println!("failed: {}", rep.failed.join(", "));
        std::process::exit(1);
    }
}
