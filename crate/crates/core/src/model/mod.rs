//! Nodes, workloads and read-write quorum systems.

mod resilience;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{minimal_masks, Compiled, Expr, MAX_ENUMERATION_NODES};
use crate::nodeset::NodeSet;
use crate::rational::{self, int, Rational};

/// A replica. Capacities are operations per second, latency in seconds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub read_cap: Rational,
    pub write_cap: Rational,
    pub latency: Rational,
}

impl Node {
    /// A node with unit read/write capacity and unit latency.
    pub fn new(name: impl Into<String>) -> Node {
        Node {
            name: name.into(),
            read_cap: int(1),
            write_cap: int(1),
            latency: int(1),
        }
    }

    pub fn with_caps(mut self, read_cap: Rational, write_cap: Rational) -> Node {
        self.read_cap = read_cap;
        self.write_cap = write_cap;
        self
    }

    pub fn with_latency(mut self, latency: Rational) -> Node {
        self.latency = latency;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::InvalidNode("empty node name".into()));
        }
        for (what, value) in [
            ("read capacity", &self.read_cap),
            ("write capacity", &self.write_cap),
            ("latency", &self.latency),
        ] {
            if !value.is_positive() {
                return Err(Error::InvalidNode(format!(
                    "{what} of `{}` must be positive, got {}",
                    self.name,
                    rational::display(value)
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Read,
    Write,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Read => "read",
            Side::Write => "write",
        })
    }
}

/// A discrete distribution over read fractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Workload {
    points: BTreeMap<Rational, Rational>,
}

impl Workload {
    /// Builds a distribution from `(read fraction, probability)` pairs.
    ///
    /// Probabilities must sum to 1 within `1e-9`; they are then rescaled to
    /// sum to exactly 1. Repeated fractions are merged and zero-probability
    /// points dropped.
    pub fn new(points: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Workload> {
        let mut merged: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (fraction, p) in points {
            if fraction.is_negative() || fraction > Rational::one() {
                return Err(Error::InvalidWorkload(format!(
                    "read fraction {} outside [0, 1]",
                    rational::display(&fraction)
                )));
            }
            if p.is_negative() || p > Rational::one() {
                return Err(Error::InvalidWorkload(format!(
                    "probability {} outside [0, 1]",
                    rational::display(&p)
                )));
            }
            *merged.entry(fraction).or_insert_with(Rational::zero) += p;
        }
        merged.retain(|_, p| !p.is_zero());
        let total: Rational = merged.values().sum();
        if merged.is_empty() || (rational::to_f64(&total) - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidWorkload(format!(
                "probabilities sum to {}, expected 1",
                rational::format_fixed(&total, 12)
            )));
        }
        for p in merged.values_mut() {
            *p = &*p / &total;
        }
        Ok(Workload { points: merged })
    }

    /// All operations have read fraction `fraction`.
    pub fn read_fraction(fraction: Rational) -> Result<Workload> {
        Workload::new([(fraction, Rational::one())])
    }

    /// `(read fraction, probability)` in increasing read fraction.
    pub fn points(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.points.iter()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mean_read_fraction(&self) -> Rational {
        self.points.iter().map(|(f, p)| f * p).sum()
    }
}

/// A pair of read and write expressions over a node universe such that every
/// read quorum intersects every write quorum.
#[derive(Clone, Debug)]
pub struct QuorumSystem {
    nodes: Vec<Node>,
    names: Vec<String>,
    reads: Expr,
    writes: Expr,
    read_compiled: Compiled,
    write_compiled: Compiled,
    read_minimal: Vec<NodeSet>,
    write_minimal: Vec<NodeSet>,
}

impl QuorumSystem {
    /// Builds a quorum system over `universe`.
    ///
    /// A missing side is the dual of the supplied one. When both are given
    /// their minimal quorums are checked for pairwise intersection.
    pub fn new(universe: Vec<Node>, reads: Option<Expr>, writes: Option<Expr>) -> Result<QuorumSystem> {
        if universe.is_empty() {
            return Err(Error::InvalidNode("a quorum system needs at least one node".into()));
        }
        if universe.len() > MAX_ENUMERATION_NODES {
            return Err(Error::UniverseTooLarge {
                size: universe.len(),
                limit: MAX_ENUMERATION_NODES,
            });
        }
        let mut seen = HashSet::new();
        for node in &universe {
            node.validate()?;
            if !seen.insert(node.name.as_str()) {
                return Err(Error::InvalidNode(format!("duplicate node `{}`", node.name)));
            }
        }
        let (reads, writes, check) = match (reads, writes) {
            (Some(r), Some(w)) => (r, w, true),
            (Some(r), None) => {
                let w = r.dual();
                (r, w, false)
            }
            (None, Some(w)) => (w.dual(), w, false),
            (None, None) => {
                return Err(Error::Domain("read or write quorums must be given".into()));
            }
        };
        let names: Vec<String> = universe.iter().map(|n| n.name.clone()).collect();
        let read_compiled = reads.compile(&names)?;
        let write_compiled = writes.compile(&names)?;
        let read_minimal = minimal_masks(&read_compiled, names.len());
        let write_minimal = minimal_masks(&write_compiled, names.len());
        let qs = QuorumSystem {
            nodes: universe,
            names,
            reads,
            writes,
            read_compiled,
            write_compiled,
            read_minimal,
            write_minimal,
        };
        if check {
            for &r in &qs.read_minimal {
                if let Some(&w) = qs.write_minimal.iter().find(|w| !w.intersects(r)) {
                    return Err(Error::IntersectionViolation {
                        read: qs.names_of(r),
                        write: qs.names_of(w),
                    });
                }
            }
        }
        Ok(qs)
    }

    /// Builds a system whose universe is the expressions' leaves, sorted by
    /// name, each with unit capacities and latency.
    pub fn over_leaves(reads: Option<Expr>, writes: Option<Expr>) -> Result<QuorumSystem> {
        let mut leaves = BTreeSet::new();
        for e in reads.iter().chain(writes.iter()) {
            leaves.extend(e.leaves().into_iter().map(str::to_string));
        }
        QuorumSystem::new(leaves.into_iter().map(Node::new).collect(), reads, writes)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn reads(&self) -> &Expr {
        &self.reads
    }

    pub fn writes(&self) -> &Expr {
        &self.writes
    }

    pub fn expr(&self, side: Side) -> &Expr {
        match side {
            Side::Read => &self.reads,
            Side::Write => &self.writes,
        }
    }

    pub fn compiled(&self, side: Side) -> &Compiled {
        match side {
            Side::Read => &self.read_compiled,
            Side::Write => &self.write_compiled,
        }
    }

    /// Minimal quorums of `side` in canonical order.
    pub fn minimal_quorums(&self, side: Side) -> &[NodeSet] {
        match side {
            Side::Read => &self.read_minimal,
            Side::Write => &self.write_minimal,
        }
    }

    pub fn is_quorum(&self, side: Side, set: NodeSet) -> bool {
        self.compiled(side).eval(set)
    }

    pub fn is_read_quorum<S: AsRef<str>>(&self, names: &[S]) -> bool {
        self.named_set(names).is_some_and(|s| self.is_quorum(Side::Read, s))
    }

    pub fn is_write_quorum<S: AsRef<str>>(&self, names: &[S]) -> bool {
        self.named_set(names).is_some_and(|s| self.is_quorum(Side::Write, s))
    }

    // Names outside the universe are never alive; they cannot make a set a quorum.
    fn named_set<S: AsRef<str>>(&self, names: &[S]) -> Option<NodeSet> {
        Some(names.iter().filter_map(|n| self.index_of(n.as_ref())).collect())
    }

    /// Node names of `set`, in universe order.
    pub fn names_of(&self, set: NodeSet) -> Vec<String> {
        set.iter().map(|i| self.names[i].clone()).collect()
    }

    /// Sorted node names of `set`.
    pub fn sorted_names_of(&self, set: NodeSet) -> Vec<String> {
        let mut names = self.names_of(set);
        names.sort();
        names
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<NodeSet> {
        crate::expr::node_set(&self.names, names)
    }

    pub fn read_fault_tolerance(&self) -> usize {
        resilience::fault_tolerance(&self.read_minimal)
    }

    pub fn write_fault_tolerance(&self) -> usize {
        resilience::fault_tolerance(&self.write_minimal)
    }

    /// The largest `f` such that some read quorum and some write quorum
    /// survive any `f` node failures.
    pub fn fault_tolerance(&self) -> usize {
        self.read_fault_tolerance().min(self.write_fault_tolerance())
    }

    /// Inclusion-minimal sets of `side` that remain quorums after removing
    /// any `min(f, |S|)` of their members, in canonical order.
    pub fn resilient_quorums(&self, side: Side, f: usize) -> Result<Vec<NodeSet>> {
        let found = if f == 0 {
            self.minimal_quorums(side).to_vec()
        } else {
            resilience::resilient_quorums(self.compiled(side), self.minimal_quorums(side), self.names.len(), f)
        };
        if found.is_empty() {
            return Err(Error::NoResilientQuorum { side, f });
        }
        Ok(found)
    }
}

impl fmt::Display for QuorumSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "reads={}, writes={}", self.reads, self.writes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn e(text: &str) -> Expr {
        text.parse().unwrap()
    }

    fn nodes(names: &str) -> Vec<Node> {
        names.chars().map(|c| Node::new(c.to_string())).collect()
    }

    #[test]
    fn missing_side_is_dual() {
        let qs = QuorumSystem::new(nodes("abc"), Some(e("a*b + b*c + a*c")), None).unwrap();
        assert_eq!(qs.minimal_quorums(Side::Read), qs.minimal_quorums(Side::Write));
        let qs = QuorumSystem::new(nodes("ab"), None, Some(e("a*b"))).unwrap();
        assert_eq!(qs.reads(), &e("a + b"));
    }

    #[test]
    fn intersection_violation_names_the_pair() {
        let err = QuorumSystem::new(nodes("abcd"), Some(e("a*b")), Some(e("c*d"))).unwrap_err();
        assert_eq!(
            err,
            Error::IntersectionViolation {
                read: vec!["a".into(), "b".into()],
                write: vec!["c".into(), "d".into()],
            }
        );
        assert_eq!(
            err.to_string(),
            "read quorum {a, b} and write quorum {c, d} do not intersect"
        );
    }

    #[test]
    fn explicit_sides_that_intersect_are_accepted() {
        let qs = QuorumSystem::new(nodes("abcdef"), Some(e("a*b*c + d*e*f")), Some(e("a*d + b*e + c*f"))).unwrap();
        assert!(qs.is_write_quorum(&["a", "d"]));
        assert_eq!(qs.write_fault_tolerance(), 2);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            QuorumSystem::new(nodes("ab"), Some(e("a*z")), None).unwrap_err(),
            Error::UnknownNode("z".into())
        );
        assert!(matches!(
            QuorumSystem::new(vec![], Some(e("a")), None),
            Err(Error::InvalidNode(_))
        ));
        assert!(matches!(
            QuorumSystem::new(nodes("aa"), Some(e("a")), None),
            Err(Error::InvalidNode(_))
        ));
        let bad = vec![Node::new("a").with_caps(int(0), int(1))];
        assert!(matches!(
            QuorumSystem::new(bad, Some(e("a")), None),
            Err(Error::InvalidNode(_))
        ));
        assert!(matches!(
            QuorumSystem::new(nodes("a"), None, None),
            Err(Error::Domain(_))
        ));
        let many: Vec<Node> = (0..21).map(|i| Node::new(format!("n{i}"))).collect();
        assert!(matches!(
            QuorumSystem::new(many, Some(e("n0")), None),
            Err(Error::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn quorum_membership() {
        let maj = QuorumSystem::over_leaves(Some(e("a*b + b*c + a*c")), None).unwrap();
        assert!(maj.is_read_quorum(&["a", "b", "c"]));
        assert!(maj.is_write_quorum(&["a", "c"]));
        assert!(!maj.is_read_quorum::<&str>(&[]));
        assert!(!maj.is_read_quorum(&["a", "zz"]));
        let grid = QuorumSystem::over_leaves(Some(e("a*b*c + d*e*f")), None).unwrap();
        assert!(grid.is_write_quorum(&["a", "d"]));
        assert!(!grid.is_read_quorum(&["a", "d"]));
    }

    #[test]
    fn fault_tolerance_examples() {
        let maj = QuorumSystem::over_leaves(Some(e("a*b + b*c + a*c")), None).unwrap();
        assert_eq!(maj.fault_tolerance(), 1);
        let grid = QuorumSystem::over_leaves(Some(e("a*b*c + d*e*f")), None).unwrap();
        assert_eq!(grid.read_fault_tolerance(), 1);
        assert_eq!(grid.write_fault_tolerance(), 2);
        assert_eq!(grid.fault_tolerance(), 1);
        let single = QuorumSystem::over_leaves(Some(e("a")), None).unwrap();
        assert_eq!(single.fault_tolerance(), 0);
    }

    #[test]
    fn resilient_quorum_examples() {
        let grid = QuorumSystem::over_leaves(Some(e("a*b + c*d")), None).unwrap();
        let r = grid.resilient_quorums(Side::Read, 1).unwrap();
        assert_eq!(r, vec![NodeSet::full(4)]);
        let read2 = QuorumSystem::over_leaves(Some(e("choose(2, [a, b, c, d])")), None).unwrap();
        let r = read2.resilient_quorums(Side::Read, 1).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|s| s.len() == 3));
        assert_eq!(
            grid.resilient_quorums(Side::Write, 0).unwrap(),
            grid.minimal_quorums(Side::Write)
        );
        assert_eq!(
            grid.resilient_quorums(Side::Read, 2),
            Err(Error::NoResilientQuorum { side: Side::Read, f: 2 })
        );
    }

    #[test]
    fn workload_validation() {
        let w = Workload::new([(ratio(1, 4), ratio(1, 2)), (ratio(3, 4), ratio(1, 2))]).unwrap();
        assert_eq!(w.mean_read_fraction(), ratio(1, 2));
        assert_eq!(w.len(), 2);
        assert!(Workload::new([(ratio(3, 2), int(1))]).is_err());
        assert!(Workload::new([(ratio(1, 2), ratio(1, 2))]).is_err());
        assert!(Workload::new([]).is_err());
        assert!(Workload::new([(int(0), int(-1)), (int(1), int(2))]).is_err());
        let merged = Workload::new([(int(1), ratio(1, 2)), (int(1), ratio(1, 2)), (int(0), int(0))]).unwrap();
        assert_eq!(merged.points().count(), 1);
    }

    #[test]
    fn workload_rescales_near_one_sums() {
        let p = crate::rational::from_f64(1.0 / 3.0).unwrap();
        let w = Workload::new([(int(0), p.clone()), (ratio(1, 2), p.clone()), (int(1), p)]).unwrap();
        let total: Rational = w.points().map(|(_, p)| p.clone()).sum();
        assert_eq!(total, int(1));
    }
}
