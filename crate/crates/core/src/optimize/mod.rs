//! Strategies, their metrics, and LP-optimal strategy selection.
//!
//! Metric definitions, for a strategy `(p_r, p_w)` and read fraction `fr`:
//!
//! * node load: `fr/cap_R(x) * sum_{r ∋ x} p_r + (1 - fr)/cap_W(x) * sum_{w ∋ x} p_w`
//! * load at `fr`: the maximum node load; under a workload distribution the
//!   load is its expectation and the capacity is the expected per-fraction
//!   capacity `sum p(fr) / load_fr`
//! * latency of a quorum: the latency of the shortest latency-sorted prefix
//!   that is itself a quorum
//! * network load: the expected quorum size

mod lp;
mod solve;

use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};
use serde::Serialize;

pub use lp::{LinearProgram, LpError, LpSolution, Relation, Row, FEASIBILITY_TOLERANCE};
pub use solve::{find_strategy, optimal_capacity_curve, solve, Solution};

use crate::error::{Error, Result};
use crate::model::{QuorumSystem, Side, Workload};
use crate::nodeset::NodeSet;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    #[default]
    Load,
    Latency,
    Network,
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Objective> {
        match s {
            "load" => Ok(Objective::Load),
            "latency" => Ok(Objective::Latency),
            "network" => Ok(Objective::Network),
            other => Err(Error::InvalidArgument(format!(
                "unknown objective `{other}` (expected load, latency or network)"
            ))),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Load => "load",
            Objective::Latency => "latency",
            Objective::Network => "network",
        })
    }
}

/// Optional upper bounds on the non-optimized metrics.
///
/// `capacity_limit` is a lower bound on capacity, enforced linearly as
/// expected load `<= 1 / capacity_limit`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    pub capacity_limit: Option<Rational>,
    pub latency_limit: Option<Rational>,
    pub network_limit: Option<Rational>,
}

impl Constraints {
    pub fn validate(&self) -> Result<()> {
        for (what, limit) in [
            ("capacity limit", &self.capacity_limit),
            ("latency limit", &self.latency_limit),
            ("network limit", &self.network_limit),
        ] {
            if let Some(limit) = limit {
                if !limit.is_positive() {
                    return Err(Error::InvalidArgument(format!("{what} must be positive")));
                }
            }
        }
        Ok(())
    }

    /// Exact check of every constraint with slack `tol`.
    pub fn satisfied_by(&self, strategy: &Strategy, qs: &QuorumSystem, workload: &Workload, tol: f64) -> bool {
        let within = |value: Rational, limit: &Rational| rational::to_f64(&(value - limit)) <= tol;
        self.capacity_limit
            .as_ref()
            .is_none_or(|c| within(strategy.load(qs, workload) * c, &Rational::one()))
            && self
                .latency_limit
                .as_ref()
                .is_none_or(|l| within(strategy.latency(qs, workload), l))
            && self
                .network_limit
                .as_ref()
                .is_none_or(|n| within(strategy.network_load(qs, workload), n))
    }
}

/// Probability distributions over read quorums and write quorums.
///
/// Quorums are [`NodeSet`]s over the universe of the quorum system the
/// strategy was built for; all metric methods take that system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    f: usize,
    reads: Vec<(NodeSet, Rational)>,
    writes: Vec<(NodeSet, Rational)>,
}

/// Throughput a quorum routes through one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Throughput {
    pub node: usize,
    pub side: Side,
    pub quorum: NodeSet,
    pub ops_per_sec: Rational,
}

impl Strategy {
    /// Validates and builds a strategy. Zero-probability entries are dropped.
    pub fn new(
        qs: &QuorumSystem,
        f: usize,
        reads: Vec<(NodeSet, Rational)>,
        writes: Vec<(NodeSet, Rational)>,
    ) -> Result<Strategy> {
        for (side, dist) in [(Side::Read, &reads), (Side::Write, &writes)] {
            let pool = qs.resilient_quorums(side, f)?;
            let mut total = Rational::zero();
            for (q, p) in dist {
                if p.is_negative() || *p > Rational::one() {
                    return Err(Error::InvalidArgument(format!(
                        "probability {} outside [0, 1]",
                        rational::display(p)
                    )));
                }
                if !pool.iter().any(|r| r.is_subset(*q)) {
                    return Err(Error::InvalidArgument(format!(
                        "{{{}}} is not a {f}-resilient {side} quorum",
                        qs.names_of(*q).join(", ")
                    )));
                }
                total += p;
            }
            if (rational::to_f64(&total) - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidArgument(format!(
                    "{side} probabilities sum to {}",
                    rational::format_fixed(&total, 9)
                )));
            }
        }
        let keep = |dist: Vec<(NodeSet, Rational)>| dist.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(Strategy {
            f,
            reads: keep(reads),
            writes: keep(writes),
        })
    }

    pub(crate) fn from_parts(f: usize, reads: Vec<(NodeSet, Rational)>, writes: Vec<(NodeSet, Rational)>) -> Strategy {
        Strategy { f, reads, writes }
    }

    /// Resilience level of the quorums this strategy draws from.
    pub fn resilience(&self) -> usize {
        self.f
    }

    pub fn distribution(&self, side: Side) -> &[(NodeSet, Rational)] {
        match side {
            Side::Read => &self.reads,
            Side::Write => &self.writes,
        }
    }

    pub fn read_distribution(&self) -> &[(NodeSet, Rational)] {
        &self.reads
    }

    pub fn write_distribution(&self) -> &[(NodeSet, Rational)] {
        &self.writes
    }

    /// Probability that each node is contacted by `side` operations.
    pub fn shares(&self, qs: &QuorumSystem, side: Side) -> Vec<Rational> {
        let mut shares = vec![Rational::zero(); qs.nodes().len()];
        for (q, p) in self.distribution(side) {
            for x in q.iter() {
                shares[x] += p;
            }
        }
        shares
    }

    fn node_loads_at(&self, qs: &QuorumSystem, fraction: &Rational) -> Vec<Rational> {
        let reads = self.shares(qs, Side::Read);
        let writes = self.shares(qs, Side::Write);
        let write_fraction = Rational::one() - fraction;
        qs.nodes()
            .iter()
            .zip(reads.iter().zip(&writes))
            .map(|(node, (r, w))| fraction * r / &node.read_cap + &write_fraction * w / &node.write_cap)
            .collect()
    }

    pub fn node_load_at(&self, qs: &QuorumSystem, node: usize, fraction: &Rational) -> Rational {
        self.node_loads_at(qs, fraction).swap_remove(node)
    }

    /// Expected normalized load of `node` under `workload`.
    pub fn node_load(&self, qs: &QuorumSystem, workload: &Workload, node: usize) -> Rational {
        workload
            .points()
            .map(|(fr, p)| p * self.node_load_at(qs, node, fr))
            .sum()
    }

    /// Load of the busiest node at read fraction `fraction`.
    pub fn load_at(&self, qs: &QuorumSystem, fraction: &Rational) -> Rational {
        self.node_loads_at(qs, fraction)
            .into_iter()
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn capacity_at(&self, qs: &QuorumSystem, fraction: &Rational) -> Rational {
        self.load_at(qs, fraction).recip()
    }

    /// Expected load over the workload distribution.
    pub fn load(&self, qs: &QuorumSystem, workload: &Workload) -> Rational {
        workload.points().map(|(fr, p)| p * self.load_at(qs, fr)).sum()
    }

    /// Expected capacity over the workload distribution.
    pub fn capacity(&self, qs: &QuorumSystem, workload: &Workload) -> Rational {
        workload.points().map(|(fr, p)| p / self.load_at(qs, fr)).sum()
    }

    pub fn side_latency(&self, qs: &QuorumSystem, side: Side) -> Rational {
        self.distribution(side)
            .iter()
            .map(|(q, p)| p * quorum_latency(qs, side, *q))
            .sum()
    }

    pub fn latency(&self, qs: &QuorumSystem, workload: &Workload) -> Rational {
        let m = workload.mean_read_fraction();
        let write = Rational::one() - &m;
        m * self.side_latency(qs, Side::Read) + write * self.side_latency(qs, Side::Write)
    }

    pub fn side_network_load(&self, side: Side) -> Rational {
        self.distribution(side)
            .iter()
            .map(|(q, p)| p * Rational::from_integer(q.len().into()))
            .sum()
    }

    /// Expected number of nodes contacted per operation.
    pub fn network_load(&self, _qs: &QuorumSystem, workload: &Workload) -> Rational {
        let m = workload.mean_read_fraction();
        let write = Rational::one() - &m;
        m * self.side_network_load(Side::Read) + write * self.side_network_load(Side::Write)
    }

    /// Capacity of this fixed strategy at each read fraction in `grid`.
    pub fn capacity_curve(&self, qs: &QuorumSystem, grid: &[Rational]) -> Vec<(Rational, Rational)> {
        grid.iter().map(|fr| (fr.clone(), self.capacity_at(qs, fr))).collect()
    }

    /// Per-node, per-quorum throughput at peak aggregate throughput.
    ///
    /// The peak `C` is the capacity at the workload's mean read fraction `m`;
    /// read quorum `r` then carries `C * m * p_r` ops/sec through each member
    /// and write quorum `w` carries `C * (1 - m) * p_w`. Rows with zero
    /// throughput are omitted. Ordered by node, reads before writes, then by
    /// distribution order.
    pub fn throughput_breakdown(&self, qs: &QuorumSystem, workload: &Workload) -> Vec<Throughput> {
        let m = workload.mean_read_fraction();
        let peak = self.capacity_at(qs, &m);
        let mut rows = Vec::new();
        for node in 0..qs.nodes().len() {
            for (side, weight) in [(Side::Read, &m * &peak), (Side::Write, (Rational::one() - &m) * &peak)] {
                for (q, p) in self.distribution(side) {
                    if q.contains(node) {
                        let ops = &weight * p;
                        if !ops.is_zero() {
                            rows.push(Throughput {
                                node,
                                side,
                                quorum: *q,
                                ops_per_sec: ops,
                            });
                        }
                    }
                }
            }
        }
        rows
    }
}

/// Time to hear back from a quorum of `side` after contacting `quorum`: the
/// latency of the shortest latency-sorted prefix of `quorum` that is itself
/// a quorum.
pub fn quorum_latency(qs: &QuorumSystem, side: Side, quorum: NodeSet) -> Rational {
    let nodes = qs.nodes();
    let mut order: Vec<usize> = quorum.iter().collect();
    order.sort_by(|&a, &b| nodes[a].latency.cmp(&nodes[b].latency).then(a.cmp(&b)));
    let mut prefix = NodeSet::empty();
    for x in order {
        prefix.insert(x);
        if qs.is_quorum(side, prefix) {
            return nodes[x].latency.clone();
        }
    }
    panic!("quorum_latency called on a non-quorum {quorum:?}");
}

/// Uniform distributions over the minimal `f`-resilient quorums of each side.
pub fn uniform_strategy(qs: &QuorumSystem, f: usize) -> Result<Strategy> {
    let uniform = |side| -> Result<Vec<(NodeSet, Rational)>> {
        let pool = qs.resilient_quorums(side, f)?;
        let p = Rational::new(1.into(), pool.len().into());
        Ok(pool.into_iter().map(|q| (q, p.clone())).collect())
    };
    Ok(Strategy::from_parts(f, uniform(Side::Read)?, uniform(Side::Write)?))
}
