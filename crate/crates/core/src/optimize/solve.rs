use num::{One, Signed, Zero};

use super::lp::{LinearProgram, LpError, Relation};
use super::{quorum_latency, Constraints, Objective, Strategy};
use crate::error::{Error, Result};
use crate::model::{QuorumSystem, Side, Workload};
use crate::nodeset::NodeSet;
use crate::rational::{self, Rational};

/// Tolerance used to snap solver probabilities to nearby simple fractions.
const SNAP_TOLERANCE: f64 = 1e-9;

/// An optimal strategy and the solver's objective value in natural units
/// (expected load, seconds, or messages).
#[derive(Clone, Debug)]
pub struct Solution {
    pub strategy: Strategy,
    pub objective: f64,
}

/// The optimal `f`-resilient strategy for `objective` under `constraints`.
pub fn find_strategy(
    qs: &QuorumSystem,
    workload: &Workload,
    objective: Objective,
    constraints: &Constraints,
    f: usize,
) -> Result<Strategy> {
    solve(qs, workload, objective, constraints, f).map(|s| s.strategy)
}

/// Builds and solves the strategy LP.
///
/// Variables are one probability per minimal `f`-resilient quorum of each
/// side and one load bound `L_fr` per workload point. For every node `x` and
/// point `fr` the normalized node load must not exceed `L_fr`; the load
/// objective minimizes `sum p(fr) L_fr`. Load rows are scaled by the largest
/// node capacity so coefficients stay near 1.
pub fn solve(
    qs: &QuorumSystem,
    workload: &Workload,
    objective: Objective,
    constraints: &Constraints,
    f: usize,
) -> Result<Solution> {
    constraints.validate()?;
    let reads = qs.resilient_quorums(Side::Read, f)?;
    let writes = qs.resilient_quorums(Side::Write, f)?;
    let nodes = qs.nodes();
    let scale = nodes
        .iter()
        .flat_map(|n| [&n.read_cap, &n.write_cap])
        .max()
        .cloned()
        .unwrap_or_else(Rational::one);

    let mut lp = LinearProgram::new();
    let read_vars: Vec<usize> = reads.iter().map(|_| lp.add_var(0.0, 0.0, 1.0)).collect();
    let write_vars: Vec<usize> = writes.iter().map(|_| lp.add_var(0.0, 0.0, 1.0)).collect();
    let load_vars: Vec<usize> = workload.points().map(|_| lp.add_var(0.0, 0.0, f64::INFINITY)).collect();

    lp.add_row(read_vars.iter().map(|&v| (v, 1.0)).collect(), Relation::Eq, 1.0);
    lp.add_row(write_vars.iter().map(|&v| (v, 1.0)).collect(), Relation::Eq, 1.0);

    for ((fr, _), &load_var) in workload.points().zip(&load_vars) {
        let write_fraction = Rational::one() - fr;
        for (x, node) in nodes.iter().enumerate() {
            let read_coeff = rational::to_f64(&(fr * &scale / &node.read_cap));
            let write_coeff = rational::to_f64(&(&write_fraction * &scale / &node.write_cap));
            let mut terms = Vec::new();
            if read_coeff != 0.0 {
                terms.extend(member_terms(&reads, &read_vars, x, read_coeff));
            }
            if write_coeff != 0.0 {
                terms.extend(member_terms(&writes, &write_vars, x, write_coeff));
            }
            if terms.is_empty() {
                continue;
            }
            terms.push((load_var, -1.0));
            lp.add_row(terms, Relation::Le, 0.0);
        }
    }

    let expected_load: Vec<(usize, f64)> = workload
        .points()
        .zip(&load_vars)
        .map(|((_, p), &v)| (v, rational::to_f64(p)))
        .collect();
    let mean = workload.mean_read_fraction();
    let read_weight = rational::to_f64(&mean);
    let write_weight = rational::to_f64(&(Rational::one() - &mean));
    let latency_terms: Vec<(usize, f64)> = weighted(&reads, &read_vars, read_weight, |q| {
        rational::to_f64(&quorum_latency(qs, Side::Read, q))
    })
    .chain(weighted(&writes, &write_vars, write_weight, |q| {
        rational::to_f64(&quorum_latency(qs, Side::Write, q))
    }))
    .collect();
    let network_terms: Vec<(usize, f64)> = weighted(&reads, &read_vars, read_weight, |q| q.len() as f64)
        .chain(weighted(&writes, &write_vars, write_weight, |q| q.len() as f64))
        .collect();

    if let Some(limit) = &constraints.capacity_limit {
        lp.add_row(expected_load.clone(), Relation::Le, rational::to_f64(&(&scale / limit)));
    }
    if let Some(limit) = &constraints.latency_limit {
        lp.add_row(latency_terms.clone(), Relation::Le, rational::to_f64(limit));
    }
    if let Some(limit) = &constraints.network_limit {
        lp.add_row(network_terms.clone(), Relation::Le, rational::to_f64(limit));
    }

    let (costs, unit) = match objective {
        Objective::Load => (expected_load, rational::to_f64(&scale)),
        Objective::Latency => (latency_terms, 1.0),
        Objective::Network => (network_terms, 1.0),
    };
    for (v, c) in costs {
        lp.objective[v] += c;
    }

    let solution = lp.solve().map_err(|e| match e {
        LpError::Infeasible => Error::Infeasible(describe(constraints)),
        LpError::Unbounded => Error::SolverFailure("strategy program is unbounded".into()),
        LpError::Failed(reason) => Error::SolverFailure(reason),
    })?;

    let snap = |pool: &[NodeSet], vars: &[usize]| {
        let probs: Vec<f64> = vars.iter().map(|&v| solution.values[v]).collect();
        pool.iter()
            .copied()
            .zip(snap_distribution(&probs))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    };
    let strategy = Strategy::from_parts(f, snap(&reads, &read_vars), snap(&writes, &write_vars));
    Ok(Solution {
        strategy,
        objective: solution.objective / unit,
    })
}

fn member_terms<'a>(
    pool: &'a [NodeSet],
    vars: &'a [usize],
    node: usize,
    coeff: f64,
) -> impl Iterator<Item = (usize, f64)> + 'a {
    pool.iter()
        .zip(vars)
        .filter(move |(q, _)| q.contains(node))
        .map(move |(_, &v)| (v, coeff))
}

fn weighted<'a>(
    pool: &'a [NodeSet],
    vars: &'a [usize],
    weight: f64,
    value: impl Fn(NodeSet) -> f64 + 'a,
) -> impl Iterator<Item = (usize, f64)> + 'a {
    pool.iter()
        .zip(vars)
        .map(move |(q, &v)| (v, weight * value(*q)))
        .filter(|(_, c)| *c != 0.0)
}

/// Snaps each probability to the simplest fraction within tolerance and
/// moves any remaining rounding mass onto the largest entry so the result
/// sums to exactly 1.
fn snap_distribution(probs: &[f64]) -> Vec<Rational> {
    let mut snapped: Vec<Rational> = probs
        .iter()
        .map(|&p| {
            let r = rational::simplest_within(p.clamp(0.0, 1.0), SNAP_TOLERANCE);
            if r.is_negative() {
                Rational::zero()
            } else {
                r
            }
        })
        .collect();
    let total: Rational = snapped.iter().sum();
    if total != Rational::one() {
        if let Some(largest) = (0..snapped.len()).max_by(|&a, &b| snapped[a].cmp(&snapped[b]).then(b.cmp(&a))) {
            snapped[largest] += Rational::one() - total;
        }
    }
    snapped
}

fn describe(constraints: &Constraints) -> String {
    let mut parts = Vec::new();
    if let Some(c) = &constraints.capacity_limit {
        parts.push(format!("capacity >= {}", rational::display(c)));
    }
    if let Some(l) = &constraints.latency_limit {
        parts.push(format!("latency <= {}", rational::display(l)));
    }
    if let Some(n) = &constraints.network_limit {
        parts.push(format!("network load <= {}", rational::display(n)));
    }
    if parts.is_empty() {
        "no strategy exists".into()
    } else {
        format!("no strategy satisfies {}", parts.join(", "))
    }
}

/// Capacity of the re-optimized load-optimal strategy at each read fraction.
pub fn optimal_capacity_curve(qs: &QuorumSystem, grid: &[Rational], f: usize) -> Result<Vec<(Rational, Rational)>> {
    grid.iter()
        .map(|fr| {
            let workload = Workload::read_fraction(fr.clone())?;
            let sigma = find_strategy(qs, &workload, Objective::Load, &Constraints::default(), f)?;
            Ok((fr.clone(), sigma.capacity_at(qs, fr)))
        })
        .collect()
}
