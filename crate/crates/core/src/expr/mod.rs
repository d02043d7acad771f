//! Monotone boolean expressions over node names.
//!
//! An expression denotes a superset-closed family of node sets: `S` is a
//! quorum of `e` iff `e` evaluates to true when exactly the nodes in `S` are
//! alive.

mod compiled;
mod parse;

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul};
use std::str::FromStr;

pub use compiled::{minimal_masks, Compiled};

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// Largest universe [`Expr::minimal_sets`] will sweep.
pub const MAX_ENUMERATION_NODES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    /// At least two children; nested `Or`s are flattened.
    Or(Vec<Expr>),
    /// At least two children; nested `And`s are flattened.
    And(Vec<Expr>),
    /// True iff at least `k` of the (two or more) children are true.
    Choose(usize, Vec<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        let name = name.into();
        debug_assert!(!name.is_empty());
        Expr::Var(name)
    }

    /// Disjunction of `children`, flattening nested disjunctions. A single
    /// child is returned unchanged.
    pub fn or(children: impl IntoIterator<Item = Expr>) -> Result<Expr> {
        let mut flat = Vec::new();
        for child in children {
            match child {
                Expr::Or(grandchildren) => flat.extend(grandchildren),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Err(Error::Domain("disjunction needs at least one operand".into())),
            1 => Ok(flat.pop().expect("one element")),
            _ => Ok(Expr::Or(flat)),
        }
    }

    /// Conjunction of `children`, flattening nested conjunctions.
    pub fn and(children: impl IntoIterator<Item = Expr>) -> Result<Expr> {
        let mut flat = Vec::new();
        for child in children {
            match child {
                Expr::And(grandchildren) => flat.extend(grandchildren),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Err(Error::Domain("conjunction needs at least one operand".into())),
            1 => Ok(flat.pop().expect("one element")),
            _ => Ok(Expr::And(flat)),
        }
    }

    pub fn choose(k: usize, children: Vec<Expr>) -> Result<Expr> {
        let n = children.len();
        if n < 2 {
            return Err(Error::Domain(format!("choose needs at least 2 operands, got {n}")));
        }
        if k < 1 || k > n {
            return Err(Error::Domain(format!("choose threshold {k} outside 1..={n}")));
        }
        Ok(Expr::Choose(k, children))
    }

    /// `choose(floor(n/2) + 1, children)`.
    pub fn majority(children: Vec<Expr>) -> Result<Expr> {
        let k = children.len() / 2 + 1;
        Expr::choose(k, children)
    }

    pub fn evaluate<S>(&self, alive: &HashSet<S>) -> bool
    where
        S: Borrow<str> + Hash + Eq,
    {
        self.evaluate_with(&|name| alive.contains(name))
    }

    pub fn evaluate_with(&self, alive: &dyn Fn(&str) -> bool) -> bool {
        match self {
            Expr::Var(name) => alive(name),
            Expr::Or(es) => es.iter().any(|e| e.evaluate_with(alive)),
            Expr::And(es) => es.iter().all(|e| e.evaluate_with(alive)),
            Expr::Choose(k, es) => {
                let mut hits = 0;
                for e in es {
                    if e.evaluate_with(alive) {
                        hits += 1;
                        if hits >= *k {
                            return true;
                        }
                    }
                }
                false
            }
        }
    }

    /// Swaps `and` with `or`; `choose(k, es)` becomes `choose(n - k + 1, dual(es))`.
    ///
    /// The quorums of the dual are exactly the sets intersecting every quorum
    /// of `self`.
    pub fn dual(&self) -> Expr {
        match self {
            Expr::Var(name) => Expr::Var(name.clone()),
            Expr::Or(es) => Expr::and(es.iter().map(Expr::dual)).expect("nonempty"),
            Expr::And(es) => Expr::or(es.iter().map(Expr::dual)).expect("nonempty"),
            Expr::Choose(k, es) => Expr::Choose(es.len() - k + 1, es.iter().map(Expr::dual).collect()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Var(_) => 0,
            Expr::Or(es) | Expr::And(es) | Expr::Choose(_, es) => 1 + es.iter().map(Expr::depth).max().unwrap_or(0),
        }
    }

    pub fn children(&self) -> &[Expr] {
        match self {
            Expr::Var(_) => &[],
            Expr::Or(es) | Expr::And(es) | Expr::Choose(_, es) => es,
        }
    }

    /// Distinct leaf names.
    pub fn leaves(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit_leaves(&mut |name| {
            out.insert(name);
        });
        out
    }

    fn visit_leaves<'a>(&'a self, visit: &mut impl FnMut(&'a str)) {
        match self {
            Expr::Var(name) => visit(name),
            _ => self.children().iter().for_each(|e| e.visit_leaves(visit)),
        }
    }

    /// True iff no node name labels two leaves. This is a syntactic witness of
    /// duplicate-freedom: `a*b + a*c` fails it although `a*(b + c)` passes.
    pub fn uses_each_variable_once(&self) -> bool {
        let mut seen = HashSet::new();
        let mut once = true;
        self.visit_leaves(&mut |name| once &= seen.insert(name));
        once
    }

    /// Recursively sorts children by depth, then by printed form.
    pub fn canonical(&self) -> Expr {
        fn sorted(es: &[Expr]) -> Vec<Expr> {
            let mut keyed: Vec<(usize, String, Expr)> = es
                .iter()
                .map(|e| {
                    let c = e.canonical();
                    (c.depth(), c.to_string(), c)
                })
                .collect();
            keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
            keyed.into_iter().map(|(_, _, e)| e).collect()
        }
        match self {
            Expr::Var(name) => Expr::Var(name.clone()),
            Expr::Or(es) => Expr::Or(sorted(es)),
            Expr::And(es) => Expr::And(sorted(es)),
            Expr::Choose(k, es) => Expr::Choose(*k, sorted(es)),
        }
    }

    /// Resolves leaf names to positions in `universe`.
    pub fn compile<S: AsRef<str>>(&self, universe: &[S]) -> Result<Compiled> {
        match self {
            Expr::Var(name) => universe
                .iter()
                .position(|u| u.as_ref() == name)
                .map(Compiled::Var)
                .ok_or_else(|| Error::UnknownNode(name.clone())),
            Expr::Or(es) => Ok(Compiled::Threshold(1, compile_all(es, universe)?)),
            Expr::And(es) => Ok(Compiled::Threshold(es.len(), compile_all(es, universe)?)),
            Expr::Choose(k, es) => Ok(Compiled::Threshold(*k, compile_all(es, universe)?)),
        }
    }

    /// Inclusion-minimal quorums over `universe`, ordered by size and then
    /// lexicographically by universe position.
    pub fn minimal_sets<S: AsRef<str>>(&self, universe: &[S]) -> Result<Vec<BTreeSet<String>>> {
        if universe.len() > MAX_ENUMERATION_NODES {
            return Err(Error::UniverseTooLarge {
                size: universe.len(),
                limit: MAX_ENUMERATION_NODES,
            });
        }
        let compiled = self.compile(universe)?;
        Ok(minimal_masks(&compiled, universe.len())
            .into_iter()
            .map(|set| set.iter().map(|i| universe[i].as_ref().to_string()).collect())
            .collect())
    }
}

fn compile_all<S: AsRef<str>>(es: &[Expr], universe: &[S]) -> Result<Vec<Compiled>> {
    es.iter().map(|e| e.compile(universe)).collect()
}

/// Membership of `names` in `universe` as a [`NodeSet`].
pub fn node_set<S: AsRef<str>, N: AsRef<str>>(universe: &[S], names: &[N]) -> Result<NodeSet> {
    names
        .iter()
        .map(|name| {
            universe
                .iter()
                .position(|u| u.as_ref() == name.as_ref())
                .ok_or_else(|| Error::UnknownNode(name.as_ref().to_string()))
        })
        .collect()
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(name) => f.write_str(name),
            Expr::Or(es) => {
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            Expr::And(es) => {
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    match e {
                        Expr::Or(_) => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
            Expr::Choose(k, es) => {
                write!(f, "choose({k}, [")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("])")
            }
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(text: &str) -> Result<Expr> {
        parse::parse(text)
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    parse::parse(text)
}

impl Add for Expr {
    type Output = Expr;

    fn add(self, rhs: Expr) -> Expr {
        Expr::or([self, rhs]).expect("two operands")
    }
}

impl Mul for Expr {
    type Output = Expr;

    fn mul(self, rhs: Expr) -> Expr {
        Expr::and([self, rhs]).expect("two operands")
    }
}
