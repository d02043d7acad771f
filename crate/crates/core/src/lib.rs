//! Read-write quorum systems over heterogeneous nodes.
//!
//! Quorum families are written as monotone boolean expressions over node
//! names (`a*b + c*d`, `choose(2, [a, b, c])`). A [`QuorumSystem`] pairs a
//! read expression with a write expression whose quorums pairwise
//! intersect; the missing side defaults to the dual of the given one.
//!
//! On top of that model the crate computes fault tolerance, `f`-resilient
//! quorums, load/capacity/latency/network-load optimal strategies by linear
//! programming, and searches the space of duplicate-free read expressions
//! for the best system under user constraints.
//!
//! ```
//! use quorumkit::{Expr, QuorumSystem, Workload};
//! use quorumkit::optimize::{find_strategy, Constraints, Objective};
//!
//! let reads: Expr = "a*b + b*c + a*c".parse().unwrap();
//! let qs = QuorumSystem::over_leaves(Some(reads), None).unwrap();
//! assert_eq!(qs.fault_tolerance(), 1);
//!
//! let workload = Workload::read_fraction(quorumkit::rational::int(1)).unwrap();
//! let sigma = find_strategy(&qs, &workload, Objective::Load, &Constraints::default(), 0).unwrap();
//! assert_eq!(sigma.capacity(&qs, &workload), quorumkit::rational::ratio(3, 2));
//! ```

pub mod cli;
pub mod config;
pub mod error;
pub mod expr;
pub mod model;
pub mod nodeset;
pub mod optimize;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod search;

pub use error::{Error, Result};
pub use expr::Expr;
pub use model::{Node, QuorumSystem, Side, Workload};
pub use nodeset::NodeSet;
pub use optimize::{Constraints, Objective, Strategy};
pub use rational::Rational;
