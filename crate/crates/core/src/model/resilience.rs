//! Fault tolerance and `f`-resilient quorums.

use crate::expr::Compiled;
use crate::nodeset::NodeSet;

/// Minimum hitting set size of `quorums`, minus one.
///
/// Iterative deepening over a bounded search tree: branch on the members of
/// the smallest quorum not yet hit.
pub fn fault_tolerance(quorums: &[NodeSet]) -> usize {
    debug_assert!(!quorums.is_empty());
    (1..)
        .find(|&k| can_hit_all(quorums, NodeSet::empty(), k))
        .expect("the union of all quorums hits every quorum")
        - 1
}

fn can_hit_all(quorums: &[NodeSet], chosen: NodeSet, budget: usize) -> bool {
    let unhit = quorums.iter().filter(|q| !q.intersects(chosen)).min_by_key(|q| q.len());
    match unhit {
        None => true,
        Some(_) if budget == 0 => false,
        Some(q) => q.iter().any(|x| can_hit_all(quorums, chosen.with(x), budget - 1)),
    }
}

/// Backtracking enumeration of minimal `f`-resilient quorums (`f >= 1`).
///
/// Candidates are visited by increasing size; once a resilient set is found
/// every superset is pruned. A set is resilient iff the minimal quorums it
/// contains cannot all be hit by `f` of its members.
pub fn resilient_quorums(expr: &Compiled, minimal: &[NodeSet], n: usize, f: usize) -> Vec<NodeSet> {
    let mut found: Vec<NodeSet> = Vec::new();
    for size in (f + 1)..=n {
        let mut level = Vec::new();
        extend(NodeSet::empty(), 0, size, n, &mut |set| {
            if found.iter().any(|r| r.is_subset(set)) || !expr.eval(set) {
                return;
            }
            let inside: Vec<NodeSet> = minimal.iter().copied().filter(|q| q.is_subset(set)).collect();
            if !can_hit_all(&inside, NodeSet::empty(), f) {
                level.push(set);
            }
        });
        found.extend(level);
    }
    found.sort();
    found
}

fn extend(set: NodeSet, next: usize, size: usize, n: usize, visit: &mut impl FnMut(NodeSet)) {
    if set.len() == size {
        visit(set);
        return;
    }
    let missing = size - set.len();
    for i in next..=(n - missing) {
        extend(set.with(i), i + 1, size, n, visit);
    }
}
