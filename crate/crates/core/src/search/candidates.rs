//! Depth-ordered enumeration of duplicate-free threshold expressions.
//!
//! An expression over a block of nodes `B` is either a single variable
//! (`|B| = 1`) or `choose(k, [e_1, .., e_m])` where the `e_i` are expressions
//! over the blocks of a partition of `B` into `m >= 2` parts. Depth 1 is the
//! all-singletons partition. Expressions are deduplicated per block by truth
//! table, so the first (shallowest) representative of each function wins.

use std::collections::{HashMap, HashSet, VecDeque};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::nodeset::NodeSet;

/// Largest universe the generator accepts.
pub const MAX_SEARCH_NODES: usize = 8;

/// Truth table over the full universe, one bit per subset (at most 2^8).
type Table = [u64; 4];

#[derive(Debug)]
enum Shape {
    Var(usize),
    Choose(usize, Vec<Rc<Entry>>),
}

#[derive(Debug)]
struct Entry {
    shape: Shape,
    table: Table,
    depth: usize,
}

/// Lazily generated stream of expressions over the whole universe.
pub struct Candidates {
    names: Vec<String>,
    words: usize,
    /// Per block, entries sorted by depth.
    levels: HashMap<NodeSet, Vec<Rc<Entry>>>,
    /// Per block, the depth up to which `levels` is complete.
    built: HashMap<NodeSet, usize>,
    seen: HashMap<NodeSet, HashSet<Table>>,
    full: NodeSet,
    depth: usize,
    partitions: VecDeque<Vec<NodeSet>>,
    buffer: VecDeque<Rc<Entry>>,
}

impl Candidates {
    pub fn new<S: AsRef<str>>(universe: &[S]) -> Result<Candidates> {
        let n = universe.len();
        if n == 0 {
            return Err(Error::Domain("search needs at least one node".into()));
        }
        if n > MAX_SEARCH_NODES {
            return Err(Error::UniverseTooLarge {
                size: n,
                limit: MAX_SEARCH_NODES,
            });
        }
        let names: Vec<String> = universe.iter().map(|s| s.as_ref().to_string()).collect();
        let mut gen = Candidates {
            words: (1usize << n).div_ceil(64),
            names,
            levels: HashMap::new(),
            built: HashMap::new(),
            seen: HashMap::new(),
            full: NodeSet::full(n),
            depth: 0,
            partitions: VecDeque::new(),
            buffer: VecDeque::new(),
        };
        for i in 0..n {
            let block = NodeSet::singleton(i);
            let entry = Rc::new(Entry {
                table: gen.var_table(i),
                shape: Shape::Var(i),
                depth: 0,
            });
            gen.seen.entry(block).or_default().insert(entry.table);
            gen.levels.insert(block, vec![entry.clone()]);
            gen.built.insert(block, usize::MAX);
            if n == 1 {
                gen.buffer.push_back(entry);
            }
        }
        Ok(gen)
    }

    fn var_table(&self, i: usize) -> Table {
        let mut t = [0u64; 4];
        for m in 0..1usize << self.names.len() {
            if m >> i & 1 == 1 {
                t[m / 64] |= 1 << (m % 64);
            }
        }
        t
    }

    fn threshold_table(&self, k: usize, children: &[Rc<Entry>]) -> Table {
        // at_least[j] holds the subsets where at least j children are true.
        let mut at_least = vec![[0u64; 4]; k + 1];
        at_least[0] = [!0u64; 4];
        for child in children {
            for j in (1..=k).rev() {
                let below = at_least[j - 1];
                for (w, word) in at_least[j].iter_mut().enumerate().take(self.words) {
                    *word |= below[w] & child.table[w];
                }
            }
        }
        let mut t = at_least[k];
        let bits = 1usize << self.names.len();
        if bits < 64 {
            t[0] &= (1u64 << bits) - 1;
        }
        for word in &mut t[self.words..] {
            *word = 0;
        }
        t
    }

    /// Makes sure every entry of `block` with depth at most `depth` exists.
    fn ensure(&mut self, block: NodeSet, depth: usize) {
        let done = self.built.get(&block).copied().unwrap_or(0);
        if done >= depth {
            return;
        }
        for d in done + 1..=depth {
            if d >= block.len() {
                // A block of size s has no expressions deeper than s - 1.
                self.built.insert(block, usize::MAX);
                return;
            }
            let mut fresh = Vec::new();
            for partition in partitions(block) {
                fresh.extend(self.expand(&partition, d, block));
            }
            self.levels.entry(block).or_default().extend(fresh);
            self.built.insert(block, d);
        }
    }

    /// Entries of depth exactly `depth` over `partition`, deduplicated
    /// against everything already seen for `block`.
    fn expand(&mut self, partition: &[NodeSet], depth: usize, block: NodeSet) -> Vec<Rc<Entry>> {
        for &part in partition {
            self.ensure(part, depth - 1);
        }
        let pools: Vec<Vec<Rc<Entry>>> = partition
            .iter()
            .map(|part| {
                self.levels
                    .get(part)
                    .map(|level| level.iter().take_while(|e| e.depth < depth).cloned().collect())
                    .unwrap_or_default()
            })
            .collect();
        let mut out = Vec::new();
        if pools.iter().any(Vec::is_empty) {
            return out;
        }
        let m = pools.len();
        let mut pick = vec![0usize; m];
        loop {
            let children: Vec<Rc<Entry>> = pick.iter().zip(&pools).map(|(&i, pool)| pool[i].clone()).collect();
            if children.iter().any(|c| c.depth == depth - 1) {
                for k in 1..=m {
                    let table = self.threshold_table(k, &children);
                    if self.seen.entry(block).or_default().insert(table) {
                        out.push(Rc::new(Entry {
                            shape: Shape::Choose(k, children.clone()),
                            table,
                            depth,
                        }));
                    }
                }
            }
            // Odometer over child choices, last block fastest.
            let mut pos = m;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                pick[pos] += 1;
                if pick[pos] < pools[pos].len() {
                    break;
                }
                pick[pos] = 0;
            }
        }
    }

    fn to_expr(&self, entry: &Entry) -> Expr {
        match &entry.shape {
            Shape::Var(i) => Expr::Var(self.names[*i].clone()),
            Shape::Choose(k, children) => {
                let kids: Vec<Expr> = children.iter().map(|c| self.to_expr(c)).collect();
                if *k == 1 {
                    Expr::Or(kids)
                } else if *k == kids.len() {
                    Expr::And(kids)
                } else {
                    Expr::Choose(*k, kids)
                }
            }
        }
    }
}

impl Iterator for Candidates {
    type Item = Expr;

    fn next(&mut self) -> Option<Expr> {
        loop {
            if let Some(entry) = self.buffer.pop_front() {
                return Some(self.to_expr(&entry));
            }
            if let Some(partition) = self.partitions.pop_front() {
                let fresh = self.expand(&partition, self.depth, self.full);
                self.buffer.extend(fresh);
                continue;
            }
            if self.depth + 1 >= self.full.len().max(1) {
                return None;
            }
            self.depth += 1;
            self.partitions = partitions(self.full).into();
        }
    }
}

/// Set partitions of `block` into at least two parts, in restricted-growth
/// order over the block's members.
fn partitions(block: NodeSet) -> Vec<Vec<NodeSet>> {
    let members: Vec<usize> = block.iter().collect();
    let mut out = Vec::new();
    let mut labels = vec![0usize; members.len()];
    fn go(i: usize, used: usize, labels: &mut Vec<usize>, members: &[usize], out: &mut Vec<Vec<NodeSet>>) {
        if i == members.len() {
            if used >= 2 {
                let mut parts = vec![NodeSet::empty(); used];
                for (&label, &x) in labels.iter().zip(members) {
                    parts[label].insert(x);
                }
                out.push(parts);
            }
            return;
        }
        for label in 0..=used {
            labels[i] = label;
            go(i + 1, used.max(label + 1), labels, members, out);
        }
    }
    if !members.is_empty() {
        go(1, 1, &mut labels, &members, &mut out);
    }
    out
}
