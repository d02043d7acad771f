//! Exhaustive search over duplicate-free read expressions.

mod candidates;

use std::time::{Duration, Instant};

use rayon::prelude::*;

pub use candidates::{Candidates, MAX_SEARCH_NODES};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::model::{Node, QuorumSystem, Workload};
use crate::optimize::{find_strategy, Constraints, Objective, Strategy};
use crate::rational::Rational;

/// Candidates evaluated in parallel between budget and timeout checks.
const CHUNK: usize = 32;

/// Slack allowed when re-checking constraints on a snapped strategy.
const CONSTRAINT_SLACK: f64 = 1e-6;

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    pub objective: Objective,
    pub constraints: Constraints,
    pub min_fault_tolerance: usize,
    /// Resilience of the strategies considered for each candidate.
    pub f: usize,
    pub timeout: Option<Duration>,
    /// Maximum number of candidates to examine.
    pub budget: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub qs: QuorumSystem,
    pub strategy: Strategy,
    /// Expected load, latency in seconds, or network load, per the objective.
    pub metric: Rational,
    pub candidates_examined: usize,
}

/// Finds the candidate read expression (writes are its dual) whose optimal
/// strategy has the best metric. Ties go to the earlier candidate, so the
/// result under a budget does not depend on thread scheduling.
pub fn search(universe: &[Node], workload: &Workload, options: &SearchOptions) -> Result<SearchResult> {
    if let Some(timeout) = options.timeout {
        if timeout.is_zero() {
            return Err(Error::InvalidArgument("timeout must be positive".into()));
        }
    }
    options.constraints.validate()?;
    for node in universe {
        node.validate()?;
    }
    let names: Vec<&str> = universe.iter().map(|n| n.name.as_str()).collect();
    let mut stream = Candidates::new(&names)?;
    let deadline = options.timeout.map(|t| Instant::now() + t);
    let budget = options.budget.unwrap_or(usize::MAX);

    let mut best: Option<(Rational, QuorumSystem, Strategy)> = None;
    let mut examined = 0usize;
    loop {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        let take = CHUNK.min(budget - examined);
        let chunk: Vec<Expr> = stream.by_ref().take(take).collect();
        if chunk.is_empty() {
            break;
        }
        examined += chunk.len();
        let results: Vec<Option<(Rational, QuorumSystem, Strategy)>> = chunk
            .into_par_iter()
            .map(|reads| evaluate(universe, workload, options, reads))
            .collect::<Result<_>>()?;
        for (metric, qs, strategy) in results.into_iter().flatten() {
            if best.as_ref().is_none_or(|(m, _, _)| metric < *m) {
                best = Some((metric, qs, strategy));
            }
        }
    }
    match best {
        Some((metric, qs, strategy)) => Ok(SearchResult {
            qs,
            strategy,
            metric,
            candidates_examined: examined,
        }),
        None => Err(Error::NoFeasibleCandidate { examined }),
    }
}

/// The candidate's metric and strategy, or `None` if it is ruled out.
fn evaluate(
    universe: &[Node],
    workload: &Workload,
    options: &SearchOptions,
    reads: Expr,
) -> Result<Option<(Rational, QuorumSystem, Strategy)>> {
    let qs = QuorumSystem::new(universe.to_vec(), Some(reads), None)?;
    if qs.fault_tolerance() < options.min_fault_tolerance {
        return Ok(None);
    }
    let strategy = match find_strategy(&qs, workload, options.objective, &options.constraints, options.f) {
        Ok(s) => s,
        Err(Error::Infeasible(_) | Error::NoResilientQuorum { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !options
        .constraints
        .satisfied_by(&strategy, &qs, workload, CONSTRAINT_SLACK)
    {
        return Ok(None);
    }
    let metric = match options.objective {
        Objective::Load => strategy.load(&qs, workload),
        Objective::Latency => strategy.latency(&qs, workload),
        Objective::Network => strategy.network_load(&qs, workload),
    };
    Ok(Some((metric, qs, strategy)))
}
