use crate::nodeset::NodeSet;

/// An expression with leaves resolved to universe indices; `Or`, `And` and
/// `Choose` all become thresholds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Compiled {
    Var(usize),
    Threshold(usize, Vec<Compiled>),
}

impl Compiled {
    pub fn eval(&self, alive: NodeSet) -> bool {
        match self {
            Compiled::Var(i) => alive.contains(*i),
            Compiled::Threshold(k, children) => {
                let mut hits = 0;
                let mut remaining = children.len();
                for child in children {
                    if child.eval(alive) {
                        hits += 1;
                        if hits >= *k {
                            return true;
                        }
                    }
                    remaining -= 1;
                    if hits + remaining < *k {
                        return false;
                    }
                }
                false
            }
        }
    }
}

/// Inclusion-minimal sets `S ⊆ {0..n}` with `expr.eval(S)`, in canonical
/// order. Sweeps all `2^n` subsets; a true subset is minimal iff removing
/// any single member makes it false.
pub fn minimal_masks(expr: &Compiled, n: usize) -> Vec<NodeSet> {
    assert!(n < 32, "subset sweep over {n} nodes");
    let size = 1usize << n;
    let mut table = vec![0u64; size.div_ceil(64)];
    for mask in 0..size {
        if expr.eval(NodeSet::from_bits(mask as u64)) {
            table[mask / 64] |= 1 << (mask % 64);
        }
    }
    let holds = |mask: usize| table[mask / 64] & (1 << (mask % 64)) != 0;
    let mut out: Vec<NodeSet> = (1..size)
        .filter(|&mask| holds(mask))
        .map(|mask| NodeSet::from_bits(mask as u64))
        .filter(|set| set.iter().all(|i| !holds(set.without(i).bits() as usize)))
        .collect();
    out.sort();
    out
}
