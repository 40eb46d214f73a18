//! Coterms: finite or infinite first-order trees observed one layer at a
//! time, and Kleisli substitution on them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::kernel::reduce::whnf;
use crate::kernel::{is_first_order_guarded, Context, Sym, SymbolTable, Term, DEFAULT_FUEL};

use super::rational::{Label, RationalGraph};
use super::HerbrandError;

/// Graph size up to which interpretation looks for a rational tree before
/// falling back to lazy observation.
const RATIONAL_LIMIT: usize = 64;

#[derive(Clone, Debug)]
pub enum Coterm {
    /// A closed guarded term, observed through weak head normalization.
    Thunk(Term),
    /// A node of a rational tree.
    Graph(Arc<RationalGraph>, usize),
    /// A coterm with a substitution pending on its variable leaves.
    Subst(Arc<Coterm>, Arc<KleisliSubst>),
}

/// A substitution from variables (nullary leaves) to coterms.
#[derive(Clone, Debug, Default)]
pub struct KleisliSubst(pub BTreeMap<Sym, Coterm>);

impl KleisliSubst {
    pub fn new() -> KleisliSubst {
        KleisliSubst::default()
    }

    pub fn insert(&mut self, var: Sym, c: Coterm) {
        self.0.insert(var, c);
    }

    pub fn get(&self, var: &str) -> Option<&Coterm> {
        self.0.get(var)
    }

    /// `θ ⊙ δ`: apply `θ` first, then `δ`.
    pub fn then(&self, delta: &KleisliSubst) -> KleisliSubst {
        let d = Arc::new(delta.clone());
        let mut out: BTreeMap<Sym, Coterm> = self
            .0
            .iter()
            .map(|(k, v)| (k.clone(), Coterm::Subst(Arc::new(v.clone()), d.clone())))
            .collect();
        for (k, v) in &delta.0 {
            out.entry(k.clone()).or_insert_with(|| v.clone());
        }
        KleisliSubst(out)
    }
}

impl Coterm {
    /// A single variable leaf.
    pub fn var(name: &str) -> Coterm {
        Coterm::Thunk(Term::cnst(name))
    }

    /// The root symbol and the children: the structure map of the final
    /// coalgebra.
    pub fn out(&self) -> Result<(Sym, Vec<Coterm>), HerbrandError> {
        match self {
            Coterm::Thunk(t) => {
                let w =
                    whnf(t, DEFAULT_FUEL).map_err(|e| HerbrandError::NotGuarded(e.to_string()))?;
                let (h, args) = w.spine();
                match h {
                    Term::Const(c) => Ok((
                        c.clone(),
                        args.into_iter().map(|a| Coterm::Thunk(a.clone())).collect(),
                    )),
                    _ => Err(HerbrandError::NotGuarded("no head normal form".into())),
                }
            }
            Coterm::Graph(g, i) => {
                let (label, children) = &g.nodes[*i];
                match label {
                    Label::Const(c) => Ok((
                        c.clone(),
                        children
                            .iter()
                            .map(|&j| Coterm::Graph(g.clone(), j))
                            .collect(),
                    )),
                    Label::Meta(m) => Err(HerbrandError::NotGround(format!("?{}", m))),
                }
            }
            Coterm::Subst(c, theta) => {
                let (h, children) = c.out()?;
                if children.is_empty() {
                    if let Some(v) = theta.get(&h) {
                        return v.out();
                    }
                }
                Ok((
                    h,
                    children
                        .into_iter()
                        .map(|x| Coterm::Subst(Arc::new(x), theta.clone()))
                        .collect(),
                ))
            }
        }
    }

    /// Observation to depth `k`, cut positions shown as `⊥`.
    pub fn observe(&self, k: usize) -> Result<Tree, HerbrandError> {
        if k == 0 {
            return Ok(Tree::Bot);
        }
        let (h, cs) = self.out()?;
        Ok(Tree::Node(
            h,
            cs.iter()
                .map(|c| c.observe(k - 1))
                .collect::<Result<_, _>>()?,
        ))
    }

    /// Truncation at remaining depth `d`: a nullary leaf survives at the
    /// cut, any other subtree becomes `⊥`.
    pub fn truncate(&self, d: usize) -> Result<Tree, HerbrandError> {
        let (h, cs) = self.out()?;
        if cs.is_empty() {
            return Ok(Tree::Node(h, Vec::new()));
        }
        if d == 0 {
            return Ok(Tree::Bot);
        }
        Ok(Tree::Node(
            h,
            cs.iter()
                .map(|c| c.truncate(d - 1))
                .collect::<Result<_, _>>()?,
        ))
    }

    pub fn substitute(&self, theta: &KleisliSubst) -> Coterm {
        Coterm::Subst(Arc::new(self.clone()), Arc::new(theta.clone()))
    }

    /// Whether the coterm is a cyclic graph node rather than a lazy term.
    pub fn is_rational(&self) -> bool {
        matches!(self, Coterm::Graph(..))
    }
}

/// `⟦M⟧` for a closed first-order guarded term. Constants outside the base
/// signature (eigenvariables) are variable leaves. A term whose unfolding
/// repeats within a small graph becomes a rational tree; others stay lazy.
pub fn interpret_guarded(sig: &dyn SymbolTable, m: &Term) -> Result<Coterm, HerbrandError> {
    if m.has_meta() || !m.is_closed() || !is_first_order_guarded(sig, &Context::new(), m) {
        return Err(HerbrandError::NotGuarded(format!("{:?}", m)));
    }
    Ok(
        match RationalGraph::from_term(m, DEFAULT_FUEL, RATIONAL_LIMIT) {
            Some(g) => {
                let root = g.root;
                Coterm::Graph(Arc::new(g), root)
            }
            None => Coterm::Thunk(m.clone()),
        },
    )
}

/// Observational equality up to depth `k`.
pub fn coterm_equal(a: &Coterm, b: &Coterm, k: usize) -> Result<bool, HerbrandError> {
    if k == 0 {
        return Ok(true);
    }
    let (ha, ca) = a.out()?;
    let (hb, cb) = b.out()?;
    if ha != hb || ca.len() != cb.len() {
        return Ok(false);
    }
    for (x, y) in ca.iter().zip(&cb) {
        if !coterm_equal(x, y, k - 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A finite tree with `⊥` marking unknown or cut-off subtrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Bot,
    Node(Sym, Vec<Tree>),
}

impl Tree {
    pub fn leaf(c: &str) -> Tree {
        Tree::Node(Sym::from(c), Vec::new())
    }

    /// `self ⊑ other`: `other` refines `self` at its `⊥` positions.
    pub fn leq(&self, other: &Tree) -> bool {
        match (self, other) {
            (Tree::Bot, _) => true,
            (Tree::Node(f, xs), Tree::Node(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.leq(y))
            }
            _ => false,
        }
    }

    /// Least upper bound, if the trees are compatible.
    pub fn join(&self, other: &Tree) -> Option<Tree> {
        match (self, other) {
            (Tree::Bot, t) | (t, Tree::Bot) => Some(t.clone()),
            (Tree::Node(f, xs), Tree::Node(g, ys)) if f == g && xs.len() == ys.len() => {
                let cs = xs
                    .iter()
                    .zip(ys)
                    .map(|(x, y)| x.join(y))
                    .collect::<Option<Vec<_>>>()?;
                Some(Tree::Node(f.clone(), cs))
            }
            _ => None,
        }
    }

    /// Truncation at remaining depth `d`, as for coterms.
    pub fn cut(&self, d: usize) -> Tree {
        match self {
            Tree::Node(h, cs) if cs.is_empty() => Tree::Node(h.clone(), Vec::new()),
            Tree::Node(h, cs) if d > 0 => {
                Tree::Node(h.clone(), cs.iter().map(|c| c.cut(d - 1)).collect())
            }
            _ => Tree::Bot,
        }
    }

    pub fn has_bot(&self) -> bool {
        match self {
            Tree::Bot => true,
            Tree::Node(_, cs) => cs.iter().any(Tree::has_bot),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Bot => f.write_str("_|_"),
            Tree::Node(h, cs) => {
                f.write_str(h)?;
                for c in cs {
                    match c {
                        Tree::Node(_, gs) if !gs.is_empty() => write!(f, " ({})", c)?,
                        _ => write!(f, " {}", c)?,
                    }
                }
                Ok(())
            }
        }
    }
}
