//! Output documents shared by the CLI and the FFI layer.
//!
//! Numbers are rounded to 9 decimal places and quorums are sorted name
//! arrays, so documents are stable across runs and platforms.

use std::fmt::Write as _;

use serde::Serialize;

use crate::model::{QuorumSystem, Side, Workload};
use crate::nodeset::NodeSet;
use crate::optimize::Strategy;
use crate::rational::{self, Rational};
use crate::search::SearchResult;

pub const DECIMALS: u32 = 9;

fn num(value: &Rational) -> f64 {
    rational::rounded_f64(value, DECIMALS)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuorumProbability {
    pub quorum: Vec<String>,
    pub prob: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrategyReport {
    pub read_dist: Vec<QuorumProbability>,
    pub write_dist: Vec<QuorumProbability>,
    pub load: f64,
    pub capacity: f64,
    pub latency: f64,
    pub network_load: f64,
}

impl StrategyReport {
    pub fn new(qs: &QuorumSystem, sigma: &Strategy, workload: &Workload) -> StrategyReport {
        let dist = |side| {
            sigma
                .distribution(side)
                .iter()
                .map(|(q, p)| QuorumProbability {
                    quorum: qs.sorted_names_of(*q),
                    prob: num(p),
                })
                .collect()
        };
        StrategyReport {
            read_dist: dist(Side::Read),
            write_dist: dist(Side::Write),
            load: num(&sigma.load(qs, workload)),
            capacity: num(&sigma.capacity(qs, workload)),
            latency: num(&sigma.latency(qs, workload)),
            network_load: num(&sigma.network_load(qs, workload)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub reads: String,
    pub writes: String,
    pub fault_tolerance: usize,
    pub read_ft: usize,
    pub write_ft: usize,
    pub capacity: f64,
    pub load: f64,
    pub latency: f64,
    pub network_load: f64,
}

impl AnalyzeReport {
    pub fn new(qs: &QuorumSystem, sigma: &Strategy, workload: &Workload) -> AnalyzeReport {
        AnalyzeReport {
            reads: qs.reads().canonical().to_string(),
            writes: qs.writes().canonical().to_string(),
            fault_tolerance: qs.fault_tolerance(),
            read_ft: qs.read_fault_tolerance(),
            write_ft: qs.write_fault_tolerance(),
            capacity: num(&sigma.capacity(qs, workload)),
            load: num(&sigma.load(qs, workload)),
            latency: num(&sigma.latency(qs, workload)),
            network_load: num(&sigma.network_load(qs, workload)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub objective: String,
    pub reads: String,
    pub writes: String,
    pub fault_tolerance: usize,
    pub strategy: StrategyReport,
    pub metric: f64,
    pub candidates_examined: usize,
}

impl SearchReport {
    pub fn new(result: &SearchResult, objective: crate::optimize::Objective, workload: &Workload) -> SearchReport {
        let qs = &result.qs;
        SearchReport {
            objective: objective.to_string(),
            reads: qs.reads().canonical().to_string(),
            writes: qs.writes().canonical().to_string(),
            fault_tolerance: qs.fault_tolerance(),
            strategy: StrategyReport::new(qs, &result.strategy, workload),
            metric: num(&result.metric),
            candidates_examined: result.candidates_examined,
        }
    }
}

/// Pretty-printed JSON followed by a newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("report documents always serialize");
    text.push('\n');
    text
}

fn quorum_label(qs: &QuorumSystem, q: NodeSet) -> String {
    format!("{{{}}}", qs.sorted_names_of(q).join(", "))
}

fn strategy_table(out: &mut String, qs: &QuorumSystem, sigma: &Strategy, workload: &Workload) {
    for side in [Side::Read, Side::Write] {
        let _ = writeln!(out, "{side} distribution:");
        for (q, p) in sigma.distribution(side) {
            let _ = writeln!(
                out,
                "  {:<24} {}",
                quorum_label(qs, *q),
                rational::format_fixed(p, DECIMALS)
            );
        }
    }
    let _ = writeln!(
        out,
        "load:          {}",
        rational::format_fixed(&sigma.load(qs, workload), DECIMALS)
    );
    let _ = writeln!(
        out,
        "capacity:      {}",
        rational::format_fixed(&sigma.capacity(qs, workload), DECIMALS)
    );
    let _ = writeln!(
        out,
        "latency:       {}",
        rational::format_fixed(&sigma.latency(qs, workload), DECIMALS)
    );
    let _ = writeln!(
        out,
        "network load:  {}",
        rational::format_fixed(&sigma.network_load(qs, workload), DECIMALS)
    );
}

pub fn analyze_table(qs: &QuorumSystem, sigma: &Strategy, workload: &Workload) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "reads:           {}", qs.reads().canonical());
    let _ = writeln!(out, "writes:          {}", qs.writes().canonical());
    let _ = writeln!(out, "fault tolerance: {}", qs.fault_tolerance());
    let _ = writeln!(out, "read ft:         {}", qs.read_fault_tolerance());
    let _ = writeln!(out, "write ft:        {}", qs.write_fault_tolerance());
    strategy_table(&mut out, qs, sigma, workload);
    out
}

pub fn strategy_table_text(qs: &QuorumSystem, sigma: &Strategy, workload: &Workload) -> String {
    let mut out = String::new();
    strategy_table(&mut out, qs, sigma, workload);
    out
}

pub fn search_table(result: &SearchResult, objective: crate::optimize::Objective, workload: &Workload) -> String {
    let qs = &result.qs;
    let mut out = String::new();
    let _ = writeln!(out, "objective:       {objective}");
    let _ = writeln!(out, "reads:           {}", qs.reads().canonical());
    let _ = writeln!(out, "writes:          {}", qs.writes().canonical());
    let _ = writeln!(out, "fault tolerance: {}", qs.fault_tolerance());
    let _ = writeln!(
        out,
        "metric:          {}",
        rational::format_fixed(&result.metric, DECIMALS)
    );
    let _ = writeln!(out, "examined:        {}", result.candidates_examined);
    strategy_table(&mut out, qs, &result.strategy, workload);
    out
}

/// `read_fraction,capacity` rows.
pub fn curve_csv(points: &[(Rational, Rational)]) -> String {
    let mut out = String::from("read_fraction,capacity\n");
    for (fr, cap) in points {
        let _ = writeln!(
            out,
            "{},{}",
            rational::format_fixed(fr, DECIMALS),
            rational::format_fixed(cap, DECIMALS)
        );
    }
    out
}

/// `node,side,quorum,throughput` rows; the quorum field lists sorted member
/// names separated by spaces.
pub fn breakdown_csv(qs: &QuorumSystem, sigma: &Strategy, workload: &Workload) -> String {
    let mut out = String::from("node,side,quorum,throughput\n");
    for row in sigma.throughput_breakdown(qs, workload) {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            qs.node_names()[row.node],
            row.side,
            qs.sorted_names_of(row.quorum).join(" "),
            rational::format_fixed(&row.ops_per_sec, DECIMALS)
        );
    }
    out
}
