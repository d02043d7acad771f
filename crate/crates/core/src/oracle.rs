//! Slow reference implementations used to cross-check the fast paths.
//!
//! Everything here works from names and [`Expr::evaluate_with`] directly,
//! sharing no code with the compiled evaluators, the bounded hitting-set
//! search, or the LP.

use std::collections::BTreeSet;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{Expr, MAX_ENUMERATION_NODES};
use crate::model::{QuorumSystem, Side, Workload};
use crate::optimize::Strategy;
use crate::rational::Rational;

/// Truth table of `expr` over `universe`: entry `mask` is the value when the
/// nodes whose bit is set in `mask` are alive.
pub fn truth_table<S: AsRef<str>>(expr: &Expr, universe: &[S]) -> Result<Vec<bool>> {
    if universe.len() > MAX_ENUMERATION_NODES {
        return Err(Error::UniverseTooLarge {
            size: universe.len(),
            limit: MAX_ENUMERATION_NODES,
        });
    }
    Ok(table(expr, universe))
}

fn table<S: AsRef<str>>(expr: &Expr, universe: &[S]) -> Vec<bool> {
    (0u64..1 << universe.len())
        .map(|mask| expr.evaluate_with(&|name| alive(universe, mask, name)))
        .collect()
}

fn alive<S: AsRef<str>>(universe: &[S], mask: u64, name: &str) -> bool {
    universe
        .iter()
        .position(|u| u.as_ref() == name)
        .is_some_and(|i| mask >> i & 1 == 1)
}

fn names<S: AsRef<str>>(universe: &[S], mask: u64) -> BTreeSet<String> {
    (0..universe.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| universe[i].as_ref().to_string())
        .collect()
}

/// Every satisfying set of `expr` with no satisfying proper subset, found by
/// checking all subsets against all of their subsets.
pub fn exhaustive_minimal_sets<S: AsRef<str>>(expr: &Expr, universe: &[S]) -> Vec<BTreeSet<String>> {
    let table = table(expr, universe);
    let mut found: Vec<u64> = (0..table.len() as u64)
        .filter(|&m| table[m as usize])
        .filter(|&m| {
            let mut sub = m;
            loop {
                sub = sub.wrapping_sub(1) & m;
                if sub == m {
                    return true;
                }
                if table[sub as usize] {
                    return false;
                }
                if sub == 0 {
                    return true;
                }
            }
        })
        .collect();
    found.sort_by_key(|m| (m.count_ones(), (0..64).map(|i| m >> i & 1 == 0).collect::<Vec<_>>()));
    found.into_iter().map(|m| names(universe, m)).collect()
}

/// Largest `k` such that the expression stays true after removing any `k`
/// nodes, by trying every kill set.
pub fn exhaustive_fault_tolerance<S: AsRef<str>>(expr: &Expr, universe: &[S]) -> usize {
    let n = universe.len();
    let full = (1u64 << n) - 1;
    let survives = |kill: u64| expr.evaluate_with(&|name| alive(universe, full & !kill, name));
    if !survives(0) {
        return 0;
    }
    let mut k = 0;
    while k < n {
        let next = k + 1;
        if (0..=full).filter(|m| m.count_ones() as usize == next).all(survives) {
            k = next;
        } else {
            break;
        }
    }
    k
}

/// Fault tolerance of a quorum system: the smaller of both sides.
pub fn exhaustive_system_fault_tolerance(qs: &QuorumSystem) -> usize {
    let universe = qs.node_names();
    exhaustive_fault_tolerance(qs.reads(), universe).min(exhaustive_fault_tolerance(qs.writes(), universe))
}

/// Minimal `f`-resilient sets of `expr`: sets `S` that remain satisfying
/// after any `f` removals and that contain no smaller such set.
pub fn exhaustive_resilient_sets<S: AsRef<str>>(expr: &Expr, universe: &[S], f: usize) -> Vec<BTreeSet<String>> {
    let n = universe.len();
    let table = table(expr, universe);
    let resilient = |m: u64| {
        (0..=m)
            .filter(|k| k & m == *k && k.count_ones() as usize <= f)
            .all(|k| table[(m & !k) as usize])
    };
    let all: Vec<u64> = (0..1u64 << n)
        .filter(|&m| m.count_ones() as usize > f && resilient(m))
        .collect();
    let mut minimal: Vec<u64> = all
        .iter()
        .copied()
        .filter(|&m| !all.iter().any(|&o| o != m && o & m == o))
        .collect();
    minimal.sort_by_key(|m| (m.count_ones(), (0..64).map(|i| m >> i & 1 == 0).collect::<Vec<_>>()));
    minimal.into_iter().map(|m| names(universe, m)).collect()
}

/// Strategy metrics recomputed from first principles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metrics {
    pub load: Rational,
    pub capacity: Rational,
    pub latency: Rational,
    pub network_load: Rational,
}

/// Recomputes every metric of `sigma` by walking nodes and quorums by name.
/// Quorum latency here is the minimum, over subsets of the chosen quorum
/// that are themselves quorums, of the slowest member.
pub fn strategy_metrics(qs: &QuorumSystem, sigma: &Strategy, workload: &Workload) -> Metrics {
    let universe = qs.node_names();
    let nodes = qs.nodes();
    let mut load = Rational::zero();
    let mut capacity = Rational::zero();
    for (fr, weight) in workload.points() {
        let mut busiest = Rational::zero();
        for (x, node) in nodes.iter().enumerate() {
            let mut node_load = Rational::zero();
            for (q, p) in sigma.read_distribution() {
                if q.contains(x) {
                    node_load += fr * p / &node.read_cap;
                }
            }
            for (q, p) in sigma.write_distribution() {
                if q.contains(x) {
                    node_load += (Rational::one() - fr) * p / &node.write_cap;
                }
            }
            busiest = busiest.max(node_load);
        }
        load += weight * &busiest;
        capacity += weight / busiest;
    }

    let mean = workload.mean_read_fraction();
    let side_weight = |side| match side {
        Side::Read => mean.clone(),
        Side::Write => Rational::one() - &mean,
    };
    let mut latency = Rational::zero();
    let mut network_load = Rational::zero();
    for side in [Side::Read, Side::Write] {
        let expr = qs.expr(side);
        for (q, p) in sigma.distribution(side) {
            let members: Vec<usize> = q.iter().collect();
            let mut best: Option<Rational> = None;
            for sub in 1u64..1 << members.len() {
                let chosen: Vec<usize> = (0..members.len())
                    .filter(|i| sub >> i & 1 == 1)
                    .map(|i| members[i])
                    .collect();
                let is_quorum = expr.evaluate_with(&|name| chosen.iter().any(|&x| universe[x] == name));
                if is_quorum {
                    let slowest = chosen.iter().map(|&x| nodes[x].latency.clone()).max().unwrap();
                    best = Some(best.map_or(slowest.clone(), |b: Rational| b.min(slowest)));
                }
            }
            let w = side_weight(side) * p;
            latency += &w * best.expect("strategy quorum is not a quorum");
            network_load += w * Rational::from_integer(members.len().into());
        }
    }
    Metrics {
        load,
        capacity,
        latency,
        network_load,
    }
}
