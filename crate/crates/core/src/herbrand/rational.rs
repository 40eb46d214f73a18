//! Rational trees as finite term graphs: construction from guarded
//! fixed-point terms, bisimulation minimization and read-back.

use std::collections::HashMap;
use std::sync::Arc;

use crate::kernel::reduce::whnf_with;
use crate::kernel::{Fuel, Hint, SimpleType, Sym, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Const(Sym),
    /// An unresolved unification variable, kept as an opaque leaf.
    Meta(usize),
}

/// A finite graph whose unfolding from `root` is a (possibly infinite)
/// first-order tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalGraph {
    pub nodes: Vec<(Label, Vec<usize>)>,
    pub root: usize,
}

impl RationalGraph {
    /// Builds the graph of a closed base-type term by repeated weak head
    /// normalization, sharing syntactically equal subterms. Fails when the
    /// term is not rational within `max_nodes` nodes or reduction runs out
    /// of fuel.
    pub fn from_term(t: &Term, fuel: usize, max_nodes: usize) -> Option<RationalGraph> {
        let mut b = Builder {
            nodes: Vec::new(),
            memo: HashMap::new(),
            fuel: Fuel(fuel),
            max_nodes,
        };
        let root = b.build(t)?;
        Some(RationalGraph {
            nodes: b.nodes,
            root,
        })
    }

    /// The bisimilarity classes of all nodes, by partition refinement.
    pub fn classes(&self) -> Vec<usize> {
        let n = self.nodes.len();
        let mut class: Vec<usize> = {
            let mut ids: HashMap<(&Label, usize), usize> = HashMap::new();
            self.nodes
                .iter()
                .map(|(l, cs)| {
                    let k = ids.len();
                    *ids.entry((l, cs.len())).or_insert(k)
                })
                .collect()
        };
        loop {
            let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|i| {
                    let key = (
                        class[i],
                        self.nodes[i].1.iter().map(|&c| class[c]).collect(),
                    );
                    let k = ids.len();
                    *ids.entry(key).or_insert(k)
                })
                .collect();
            let stable = ids.len() == class.iter().max().map_or(0, |m| m + 1);
            class = next;
            if stable {
                return class;
            }
        }
    }

    /// Merges bisimilar nodes and drops unreachable ones.
    pub fn minimize(&self) -> RationalGraph {
        let class = self.classes();
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut stack = vec![self.root];
        let mut order = Vec::new();
        while let Some(i) = stack.pop() {
            if remap.contains_key(&class[i]) {
                continue;
            }
            remap.insert(class[i], nodes.len());
            nodes.push((self.nodes[i].0.clone(), Vec::new()));
            order.push(i);
            for &c in self.nodes[i].1.iter().rev() {
                stack.push(c);
            }
        }
        for (k, &i) in order.iter().enumerate() {
            nodes[k].1 = self.nodes[i].1.iter().map(|&c| remap[&class[c]]).collect();
        }
        RationalGraph { nodes, root: 0 }
    }

    /// Reads the graph back as a term, binding a `fix` exactly at nodes that
    /// are referred to from below.
    pub fn to_term(&self) -> Term {
        self.emit(self.root, &mut Vec::new())
    }

    fn emit(&self, i: usize, path: &mut Vec<usize>) -> Term {
        if let Some(pos) = path.iter().rposition(|&p| p == i) {
            return Term::Var(path.len() - 1 - pos);
        }
        let (label, children) = &self.nodes[i];
        path.push(i);
        let args: Vec<Term> = children.iter().map(|&c| self.emit(c, path)).collect();
        path.pop();
        let head = match label {
            Label::Const(c) => Term::Const(c.clone()),
            Label::Meta(m) => Term::Meta(*m),
        };
        let body = Term::apps(head, args);
        if body.loose_vars().contains(&0) {
            Term::Fix(Hint::new("x"), SimpleType::Base, Arc::new(body))
        } else {
            body.shift(-1, 0)
        }
    }

    /// The node reached from the root by following child indices.
    pub fn follow(&self, path: &[usize]) -> Option<usize> {
        let mut i = self.root;
        for &k in path {
            i = *self.nodes[i].1.get(k)?;
        }
        Some(i)
    }
}

const TERM_SIZE_LIMIT: usize = 4096;

/// Whether `t` has at most `limit` nodes, counted with early exit.
fn size_at_most(t: &Term, limit: usize) -> bool {
    fn go(t: &Term, budget: &mut usize) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        match t {
            Term::App(f, a) => go(f, budget) && go(a, budget),
            Term::Lam(_, _, b) | Term::Fix(_, _, b) => go(b, budget),
            _ => true,
        }
    }
    let mut budget = limit;
    go(t, &mut budget)
}

struct Builder {
    nodes: Vec<(Label, Vec<usize>)>,
    memo: HashMap<Term, usize>,
    fuel: Fuel,
    max_nodes: usize,
}

impl Builder {
    fn build(&mut self, t: &Term) -> Option<usize> {
        // Unfolding may duplicate arguments; a term that grows past the
        // bound is treated as not rational rather than hashed in full.
        if !size_at_most(t, TERM_SIZE_LIMIT) {
            return None;
        }
        if let Some(&i) = self.memo.get(t) {
            return Some(i);
        }
        let w = whnf_with(t, &mut self.fuel).ok()?;
        if let Some(&i) = self.memo.get(&w) {
            self.memo.insert(t.clone(), i);
            return Some(i);
        }
        if self.nodes.len() >= self.max_nodes {
            return None;
        }
        let (head, args) = w.spine();
        let label = match head {
            Term::Const(c) => Label::Const(c.clone()),
            Term::Meta(m) => Label::Meta(*m),
            _ => return None,
        };
        let args: Vec<Term> = args.into_iter().cloned().collect();
        if !args.iter().all(|a| size_at_most(a, TERM_SIZE_LIMIT)) {
            return None;
        }
        let id = self.nodes.len();
        self.nodes.push((label, Vec::new()));
        self.memo.insert(w.clone(), id);
        self.memo.insert(t.clone(), id);
        let mut cs = Vec::with_capacity(args.len());
        for a in &args {
            cs.push(self.build(a)?);
        }
        self.nodes[id].1 = cs;
        Some(id)
    }
}

/// Bisimilarity of two rational terms; `None` when either is not rational
/// within the limits.
pub fn rational_equal(a: &Term, b: &Term, fuel: usize) -> Option<bool> {
    let ga = RationalGraph::from_term(a, fuel, 10_000)?;
    let gb = RationalGraph::from_term(b, fuel, 10_000)?;
    let off = ga.nodes.len();
    let mut nodes = ga.nodes;
    nodes.extend(
        gb.nodes
            .into_iter()
            .map(|(l, cs)| (l, cs.into_iter().map(|c| c + off).collect())),
    );
    let joint = RationalGraph {
        nodes,
        root: ga.root,
    };
    let class = joint.classes();
    Some(class[ga.root] == class[gb.root + off])
}

/// The minimal fixed-point form of a rational term; the term itself when
/// it is not rational within the limits.
pub fn minimal_form(t: &Term, fuel: usize) -> Term {
    match RationalGraph::from_term(t, fuel, 10_000) {
        Some(g) => g.minimize().to_term(),
        None => t.clone(),
    }
}
