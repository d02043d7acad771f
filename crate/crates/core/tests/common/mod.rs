//! Shared generators and checks for the integration tests and the
//! acceptance harness.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;

use num::{One, ToPrimitive, Zero};
use quorumkit::expr::Expr;
use quorumkit::model::{Node, QuorumSystem, Side, Workload};
use quorumkit::optimize::{find_strategy, Constraints, Objective, Strategy};
use quorumkit::oracle;
use quorumkit::rational::{int, ratio, Rational};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random expression over `vars`, variables may repeat.
pub fn random_expr(rng: &mut ChaCha8Rng, vars: &[String], depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return Expr::var(vars.choose(rng).unwrap().clone());
    }
    let m = rng.gen_range(2..=3);
    let children: Vec<Expr> = (0..m).map(|_| random_expr(rng, vars, depth - 1)).collect();
    match rng.gen_range(0..3) {
        0 => Expr::or(children).unwrap(),
        1 => Expr::and(children).unwrap(),
        _ => Expr::choose(rng.gen_range(1..=m), children).unwrap(),
    }
}

/// Random expression using every variable in `vars` exactly once.
pub fn random_dup_free(rng: &mut ChaCha8Rng, vars: &[String]) -> Expr {
    let mut vars = vars.to_vec();
    vars.shuffle(rng);
    build_dup_free(rng, &vars)
}

fn build_dup_free(rng: &mut ChaCha8Rng, vars: &[String]) -> Expr {
    if vars.len() == 1 {
        return Expr::var(vars[0].clone());
    }
    let m = rng.gen_range(2..=vars.len().min(3));
    let mut groups: Vec<Vec<String>> = vec![Vec::new(); m];
    for (i, v) in vars.iter().enumerate() {
        let g = if i < m { i } else { rng.gen_range(0..m) };
        groups[g].push(v.clone());
    }
    let children: Vec<Expr> = groups.iter().map(|g| build_dup_free(rng, g)).collect();
    let k = rng.gen_range(1..=m);
    Expr::choose(k, children).unwrap()
}

/// Nodes with random small capacities and latencies.
pub fn random_nodes(rng: &mut ChaCha8Rng, n: usize) -> Vec<Node> {
    names(n)
        .into_iter()
        .map(|name| {
            Node::new(name)
                .with_caps(int(rng.gen_range(1..=10)), int(rng.gen_range(1..=10)))
                .with_latency(int(rng.gen_range(1..=5)))
        })
        .collect()
}

pub fn random_workload(rng: &mut ChaCha8Rng) -> Workload {
    let points = rng.gen_range(1..=3);
    let weights: Vec<i64> = (0..points).map(|_| rng.gen_range(1..=5)).collect();
    let total: i64 = weights.iter().sum();
    Workload::new(
        weights
            .iter()
            .map(|&w| (ratio(rng.gen_range(0..=4), 4), ratio(w, total))),
    )
    .unwrap()
}

/// A random quorum system over `n` nodes, reads given, writes the dual.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize) -> QuorumSystem {
    let vars = names(n);
    loop {
        let reads = random_expr(rng, &vars, 3);
        if let Ok(qs) = QuorumSystem::new(random_nodes(rng, n), Some(reads), None) {
            return qs;
        }
    }
}

fn set_names(qs: &QuorumSystem, sets: &[quorumkit::NodeSet]) -> Vec<BTreeSet<String>> {
    sets.iter().map(|s| qs.names_of(*s).into_iter().collect()).collect()
}

/// Minimal transversals of `sets` by brute force over `universe`.
pub fn minimal_transversals(sets: &[BTreeSet<String>], universe: &[String]) -> BTreeSet<BTreeSet<String>> {
    let n = universe.len();
    let hits = |m: u64| {
        sets.iter()
            .all(|s| (0..n).any(|i| m >> i & 1 == 1 && s.contains(&universe[i])))
    };
    let all: Vec<u64> = (0..1u64 << n).filter(|&m| hits(m)).collect();
    all.iter()
        .filter(|&&m| !all.iter().any(|&o| o != m && o & m == o))
        .map(|&m| {
            (0..n)
                .filter(|i| m >> i & 1 == 1)
                .map(|i| universe[i].clone())
                .collect()
        })
        .collect()
}

/// The dual is an involution and its minimal sets are the minimal
/// transversals of the original's.
pub fn check_dual(expr: &Expr, universe: &[String]) -> Result<(), String> {
    let dual = expr.dual();
    if oracle::truth_table(&dual.dual(), universe).unwrap() != oracle::truth_table(expr, universe).unwrap() {
        return Err(format!("dual(dual({expr})) differs from {expr}"));
    }
    let sets = oracle::exhaustive_minimal_sets(expr, universe);
    let expected = minimal_transversals(&sets, universe);
    let got: BTreeSet<BTreeSet<String>> = oracle::exhaustive_minimal_sets(&dual, universe).into_iter().collect();
    if got != expected {
        return Err(format!("minimal sets of dual({expr}) are not the transversals"));
    }
    let fast: Vec<BTreeSet<String>> = expr.minimal_sets(universe).unwrap();
    if fast != sets {
        return Err(format!("fast minimal sets of {expr} disagree with the oracle"));
    }
    Ok(())
}

pub fn check_fault_tolerance(qs: &QuorumSystem) -> Result<(), String> {
    let universe = qs.node_names();
    let read = oracle::exhaustive_fault_tolerance(qs.reads(), universe);
    let write = oracle::exhaustive_fault_tolerance(qs.writes(), universe);
    if (
        qs.read_fault_tolerance(),
        qs.write_fault_tolerance(),
        qs.fault_tolerance(),
    ) != (read, write, read.min(write))
    {
        return Err(format!(
            "fault tolerance of {qs}: fast ({}, {}), oracle ({read}, {write})",
            qs.read_fault_tolerance(),
            qs.write_fault_tolerance()
        ));
    }
    Ok(())
}

pub fn check_resilient(qs: &QuorumSystem, f: usize) -> Result<(), String> {
    for side in [Side::Read, Side::Write] {
        let expected = oracle::exhaustive_resilient_sets(qs.expr(side), qs.node_names(), f);
        let got = match qs.resilient_quorums(side, f) {
            Ok(sets) => set_names(qs, &sets),
            Err(_) => Vec::new(),
        };
        if got != expected {
            return Err(format!("{f}-resilient {side} quorums of {qs}: {got:?} vs {expected:?}"));
        }
    }
    Ok(())
}

fn random_distribution(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..1.0f64).powi(3)).collect();
    if rng.gen_bool(0.3) {
        let keep = rng.gen_range(0..len);
        for (i, x) in w.iter_mut().enumerate() {
            if i != keep {
                *x = 0.0;
            }
        }
        w[keep] = 1.0;
    }
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Expected load of a float strategy, computed directly.
fn float_load(qs: &QuorumSystem, workload: &Workload, reads: &[(u64, f64)], writes: &[(u64, f64)]) -> f64 {
    let f = |r: &Rational| r.to_f64().unwrap();
    workload
        .points()
        .map(|(fr, p)| {
            let fr = f(fr);
            let busiest = qs
                .nodes()
                .iter()
                .enumerate()
                .map(|(x, node)| {
                    let r: f64 = reads.iter().filter(|(q, _)| q >> x & 1 == 1).map(|(_, p)| p).sum();
                    let w: f64 = writes.iter().filter(|(q, _)| q >> x & 1 == 1).map(|(_, p)| p).sum();
                    fr * r / f(&node.read_cap) + (1.0 - fr) * w / f(&node.write_cap)
                })
                .fold(0.0, f64::max);
            f(p) * busiest
        })
        .sum()
}

/// No random strategy over the minimal quorums beats the LP's load.
pub fn check_lp_unbeaten(
    qs: &QuorumSystem,
    workload: &Workload,
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> Result<(), String> {
    let sigma = find_strategy(qs, workload, Objective::Load, &Constraints::default(), 0).map_err(|e| e.to_string())?;
    let best = sigma.load(qs, workload).to_f64().unwrap();
    let reads = qs.minimal_quorums(Side::Read);
    let writes = qs.minimal_quorums(Side::Write);
    for _ in 0..trials {
        let rp = random_distribution(rng, reads.len());
        let wp = random_distribution(rng, writes.len());
        let r: Vec<(u64, f64)> = reads.iter().map(|q| q.bits()).zip(rp).collect();
        let w: Vec<(u64, f64)> = writes.iter().map(|q| q.bits()).zip(wp).collect();
        let load = float_load(qs, workload, &r, &w);
        if load < best - 1e-6 {
            return Err(format!("random strategy load {load} beats LP load {best} on {qs}"));
        }
    }
    Ok(())
}

/// Multiplying every capacity by `c` multiplies capacity by `c`.
pub fn check_scaling(qs: &QuorumSystem, workload: &Workload, c: i64) -> Result<(), String> {
    let scaled_nodes: Vec<Node> = qs
        .nodes()
        .iter()
        .map(|n| n.clone().with_caps(&n.read_cap * int(c), &n.write_cap * int(c)))
        .collect();
    let scaled = QuorumSystem::new(scaled_nodes, Some(qs.reads().clone()), Some(qs.writes().clone())).unwrap();
    let cap = |qs: &QuorumSystem| {
        find_strategy(qs, workload, Objective::Load, &Constraints::default(), 0)
            .unwrap()
            .capacity(qs, workload)
            .to_f64()
            .unwrap()
    };
    let (base, big) = (cap(qs), cap(&scaled));
    if ((big - base * c as f64) / big).abs() > 1e-6 {
        return Err(format!("capacity {base} scaled by {c} gave {big}"));
    }
    Ok(())
}

/// Exact metric recomputation agrees with the strategy's own metrics.
pub fn check_metrics(qs: &QuorumSystem, sigma: &Strategy, workload: &Workload) -> Result<(), String> {
    let m = oracle::strategy_metrics(qs, sigma, workload);
    let pairs = [
        ("load", m.load, sigma.load(qs, workload)),
        ("capacity", m.capacity, sigma.capacity(qs, workload)),
        ("latency", m.latency, sigma.latency(qs, workload)),
        ("network load", m.network_load, sigma.network_load(qs, workload)),
    ];
    for (what, oracle_value, fast) in pairs {
        if oracle_value != fast {
            return Err(format!("{what}: oracle {oracle_value} vs fast {fast}"));
        }
    }
    let total = |side| {
        sigma
            .distribution(side)
            .iter()
            .map(|(_, p)| p.clone())
            .sum::<Rational>()
    };
    if total(Side::Read) != Rational::one() || total(Side::Write) != Rational::one() {
        return Err("distribution does not sum to 1".into());
    }
    if sigma.read_distribution().iter().any(|(_, p)| p <= &Rational::zero()) {
        return Err("non-positive probability".into());
    }
    Ok(())
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// A CLI invocation with a golden output file.
pub struct GoldenCase {
    pub golden: &'static str,
    pub args: &'static [&'static str],
    pub config: &'static str,
}

pub const GOLDEN_CASES: &[GoldenCase] = &[
    GoldenCase {
        golden: "majority3_analyze.json",
        args: &["analyze"],
        config: "majority3.json",
    },
    GoldenCase {
        golden: "majority3_strategy.json",
        args: &["strategy"],
        config: "majority3.json",
    },
    GoldenCase {
        golden: "majority3_search.json",
        args: &["search", "--fault-tolerance", "1"],
        config: "majority3.json",
    },
    GoldenCase {
        golden: "majority3_curve.csv",
        args: &["curve", "--points", "4"],
        config: "majority3.json",
    },
    GoldenCase {
        golden: "majority3_breakdown.csv",
        args: &["breakdown"],
        config: "majority3.json",
    },
    GoldenCase {
        golden: "grid2x2_analyze.json",
        args: &["analyze"],
        config: "grid2x2.json",
    },
    GoldenCase {
        golden: "grid2x2_analyze_f1.txt",
        args: &["--format", "table", "analyze", "--f", "1"],
        config: "grid2x2.json",
    },
    GoldenCase {
        golden: "grid2x2_strategy_latency.json",
        args: &[
            "strategy",
            "--optimize",
            "latency",
            "--capacity-limit",
            "150",
            "--network-limit",
            "2",
        ],
        config: "grid2x2.json",
    },
    GoldenCase {
        golden: "grid2x2_search_latency.json",
        args: &[
            "search",
            "--optimize",
            "latency",
            "--capacity-limit",
            "150",
            "--network-limit",
            "2",
        ],
        config: "grid2x2.json",
    },
    GoldenCase {
        golden: "grid2x2_curve.csv",
        args: &["curve"],
        config: "grid2x2.json",
    },
    GoldenCase {
        golden: "grid2x2_mixed_curve_fixed.csv",
        args: &["curve", "--fixed"],
        config: "grid2x2_mixed.json",
    },
    GoldenCase {
        golden: "grid2x2_breakdown.csv",
        args: &["breakdown"],
        config: "grid2x2.json",
    },
    GoldenCase {
        golden: "five_nodes_analyze.json",
        args: &["analyze"],
        config: "five_nodes.json",
    },
    GoldenCase {
        golden: "five_nodes_strategy_latency.json",
        args: &["strategy", "--optimize", "latency", "--capacity-limit", "2000"],
        config: "five_nodes.json",
    },
    GoldenCase {
        golden: "five_nodes_search_load.json",
        args: &["search", "--fault-tolerance", "1"],
        config: "five_nodes.json",
    },
    GoldenCase {
        golden: "five_nodes_search_latency.json",
        args: &[
            "search",
            "--optimize",
            "latency",
            "--capacity-limit",
            "2000",
            "--fault-tolerance",
            "1",
        ],
        config: "five_nodes.json",
    },
    GoldenCase {
        golden: "five_nodes_curve.csv",
        args: &["curve", "--points", "10"],
        config: "five_nodes.json",
    },
    GoldenCase {
        golden: "five_nodes_breakdown.csv",
        args: &["breakdown"],
        config: "five_nodes.json",
    },
    GoldenCase {
        golden: "five_nodes_breakdown_uniform.csv",
        args: &["breakdown", "--uniform"],
        config: "five_nodes.json",
    },
];

/// Failure configurations and the exit status each must produce.
pub const FAILURE_CASES: &[(&[&str], &str, i32)] = &[
    (&["analyze"], "empty_nodes.json", 2),
    (&["strategy", "--f", "1"], "too_demanding.json", 3),
    (&["search", "--fault-tolerance", "5"], "five_nodes.json", 4),
];

pub struct Output {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli(args: &[&str], config: &str) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_quorumkit"))
        .args(args)
        .arg(fixture(config))
        .output()
        .expect("failed to run quorumkit");
    Output {
        status: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Runs a golden case; with `UPDATE_GOLDEN` set, rewrites the golden file.
pub fn check_golden(case: &GoldenCase) -> Result<(), String> {
    let out = run_cli(case.args, case.config);
    if out.status != 0 {
        return Err(format!("{}: exit {} ({})", case.golden, out.status, out.stderr.trim()));
    }
    let path = golden(case.golden);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != out.stdout {
        return Err(format!("{}: output differs from golden file", case.golden));
    }
    Ok(())
}

pub fn check_failure(args: &[&str], config: &str, status: i32) -> Result<(), String> {
    let out = run_cli(args, config);
    if out.status != status {
        return Err(format!("{args:?} on {config}: exit {} expected {status}", out.status));
    }
    if !out.stdout.is_empty() || !out.stderr.starts_with("error: ") {
        return Err(format!("{args:?} on {config}: expected only a diagnostic on stderr"));
    }
    Ok(())
}
