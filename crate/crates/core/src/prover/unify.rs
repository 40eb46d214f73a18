//! Unification over metavariables in three modes: syntactic with occurs
//! check, rational (circular solutions become guarded fixed points), and
//! modulo weak head normalization.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::kernel::guard::guarded_base_type;
use crate::kernel::reduce::whnf_with;
use crate::kernel::{Fuel, Hint, SimpleType, Sym, SymbolTable, Term, DEFAULT_FUEL};
use crate::logic::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnifyMode {
    Syntactic,
    Rational,
    ModuloWhnf,
}

impl fmt::Display for UnifyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnifyMode::Syntactic => "syntactic",
            UnifyMode::Rational => "rational",
            UnifyMode::ModuloWhnf => "whnf",
        })
    }
}

impl FromStr for UnifyMode {
    type Err = String;
    fn from_str(s: &str) -> Result<UnifyMode, String> {
        match s {
            "syntactic" => Ok(UnifyMode::Syntactic),
            "rational" => Ok(UnifyMode::Rational),
            "whnf" => Ok(UnifyMode::ModuloWhnf),
            _ => Err(format!("unknown unification mode `{}`", s)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnifyError {
    #[error("no unifier")]
    NoUnifier,
    #[error("occurs check failed for ?{0}")]
    OccursCheck(usize),
}

#[derive(Clone, Debug)]
struct MetaInfo {
    ty: SimpleType,
    /// Number of eigenvariables visible to the meta when it was created.
    scope: usize,
    binding: Option<Term>,
    hint: Sym,
}

/// A growing store of metavariables and their bindings. Bindings are kept
/// triangular; `zonk` resolves them.
#[derive(Clone, Debug, Default)]
pub struct MetaStore {
    metas: Vec<MetaInfo>,
}

impl MetaStore {
    pub fn new() -> MetaStore {
        MetaStore::default()
    }

    pub fn fresh(&mut self, hint: &str, ty: SimpleType, scope: usize) -> Term {
        self.metas.push(MetaInfo {
            ty,
            scope,
            binding: None,
            hint: Sym::from(hint),
        });
        Term::Meta(self.metas.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.metas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metas.is_empty()
    }

    pub fn ty(&self, m: usize) -> &SimpleType {
        &self.metas[m].ty
    }

    pub fn hint(&self, m: usize) -> &str {
        &self.metas[m].hint
    }

    pub fn binding(&self, m: usize) -> Option<&Term> {
        self.metas[m].binding.as_ref()
    }

    pub fn bind(&mut self, m: usize, t: Term) {
        self.metas[m].binding = Some(t);
    }

    pub fn zonk(&self, t: &Term) -> Term {
        if !t.has_meta() {
            return t.clone();
        }
        t.map_metas(&mut |m| {
            self.metas
                .get(m)
                .and_then(|i| i.binding.as_ref())
                .map(|b| self.zonk(b))
        })
    }

    pub fn zonk_formula(&self, f: &Formula) -> Formula {
        if !f.has_meta() {
            return f.clone();
        }
        f.map_terms(&mut |t, _| self.zonk(t))
    }

    /// Bindings of the metas `0..n`, fully resolved.
    pub fn substitution(&self, n: usize) -> Substitution {
        let mut out = BTreeMap::new();
        for m in 0..n.min(self.metas.len()) {
            if self.metas[m].binding.is_some() {
                out.insert(m, self.zonk(&Term::Meta(m)));
            }
        }
        Substitution(out)
    }
}

/// A resolved map from metavariables to terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution(pub BTreeMap<usize, Term>);

impl Substitution {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, t: &Term) -> Term {
        t.map_metas(&mut |m| self.0.get(&m).cloned())
    }

    pub fn apply_formula(&self, f: &Formula) -> Formula {
        f.map_terms(&mut |t, _| self.apply(t))
    }
}

/// Unification state for one problem: a meta store, the eigenvariables in
/// scope, and the signature used to validate circular solutions.
pub struct Unifier<'a> {
    pub sig: &'a dyn SymbolTable,
    pub eigen: &'a [(Sym, SimpleType)],
    pub mode: UnifyMode,
    pub store: &'a mut MetaStore,
    fuel: Fuel,
    visited: HashSet<(usize, Term, Term)>,
}

impl<'a> Unifier<'a> {
    pub fn new(
        sig: &'a dyn SymbolTable,
        eigen: &'a [(Sym, SimpleType)],
        mode: UnifyMode,
        store: &'a mut MetaStore,
        fuel: usize,
    ) -> Unifier<'a> {
        Unifier {
            sig,
            eigen,
            mode,
            store,
            fuel: Fuel(fuel),
            visited: HashSet::new(),
        }
    }

    pub fn atoms(&mut self, a: &Formula, b: &Formula) -> Result<(), UnifyError> {
        match (a, b) {
            (Formula::Atom(p, xs), Formula::Atom(q, ys)) if p == q && xs.len() == ys.len() => {
                for (x, y) in xs.iter().zip(ys) {
                    self.terms(x, y, 0)?;
                }
                Ok(())
            }
            _ => Err(UnifyError::NoUnifier),
        }
    }

    fn head_resolve(&self, t: &Term) -> Term {
        let mut t = t.clone();
        while let Term::Meta(m) = t {
            match self.store.binding(m) {
                Some(b) => t = b.clone(),
                None => break,
            }
        }
        t
    }

    pub fn terms(&mut self, a: &Term, b: &Term, depth: usize) -> Result<(), UnifyError> {
        let a = self.head_resolve(a);
        let b = self.head_resolve(b);
        if a == b {
            return Ok(());
        }
        match (&a, &b) {
            (Term::Meta(m), Term::Meta(n)) if m < n => return self.bind(*n, &a),
            (Term::Meta(m), _) => return self.bind(*m, &b),
            (_, Term::Meta(m)) => return self.bind(*m, &a),
            _ => {}
        }
        if let Some(r) = self.flex_app(&a, &b, depth) {
            return r;
        }
        if self.mode != UnifyMode::ModuloWhnf {
            return self.structural(&a, &b, depth);
        }
        let saved = self.store.metas.clone();
        match self.structural(&a, &b, depth) {
            Err(UnifyError::NoUnifier) => {
                self.store.metas = saved;
                self.modulo_whnf(&a, &b, depth)
            }
            r => r,
        }
    }

    fn structural(&mut self, a: &Term, b: &Term, depth: usize) -> Result<(), UnifyError> {
        match (a, b) {
            (Term::Lam(_, t1, b1), Term::Lam(_, t2, b2))
            | (Term::Fix(_, t1, b1), Term::Fix(_, t2, b2)) => {
                if t1 != t2 {
                    return Err(UnifyError::NoUnifier);
                }
                self.terms(b1, b2, depth + 1)
            }
            _ => {
                let (h1, a1) = a.spine();
                let (h2, a2) = b.spine();
                let rigid = |h: &Term| matches!(h, Term::Const(_) | Term::Var(_));
                if !rigid(h1) || !rigid(h2) || h1 != h2 || a1.len() != a2.len() {
                    return Err(UnifyError::NoUnifier);
                }
                let (a1, a2): (Vec<Term>, Vec<Term>) = (
                    a1.into_iter().cloned().collect(),
                    a2.into_iter().cloned().collect(),
                );
                for (x, y) in a1.iter().zip(&a2) {
                    self.terms(x, y, depth)?;
                }
                Ok(())
            }
        }
    }

    /// A meta applied to arguments against an application with at least as
    /// many arguments: bind the meta to the matching prefix and unify the
    /// arguments pairwise.
    fn flex_app(&mut self, a: &Term, b: &Term, depth: usize) -> Option<Result<(), UnifyError>> {
        let (flex, other) = match (a.spine().0, b.spine().0) {
            (Term::Meta(m), _) if self.store.binding(*m).is_none() => (a, b),
            (_, Term::Meta(m)) if self.store.binding(*m).is_none() => (b, a),
            _ => return None,
        };
        let (Term::Meta(m), fargs) = flex.spine() else {
            return None;
        };
        let m = *m;
        let fargs: Vec<Term> = fargs.into_iter().cloned().collect();
        let (oh, oargs) = other.spine();
        if oargs.len() < fargs.len() {
            return Some(Err(UnifyError::NoUnifier));
        }
        let keep = oargs.len() - fargs.len();
        let prefix = Term::apps(oh.clone(), oargs[..keep].iter().map(|t| (*t).clone()));
        let rest: Vec<Term> = oargs[keep..].iter().map(|t| (*t).clone()).collect();
        Some((|| {
            self.bind(m, &prefix)?;
            for (x, y) in fargs.iter().zip(&rest) {
                self.terms(x, y, depth)?;
            }
            Ok(())
        })())
    }

    fn modulo_whnf(&mut self, a: &Term, b: &Term, depth: usize) -> Result<(), UnifyError> {
        let za = self.store.zonk(a);
        let zb = self.store.zonk(b);
        if !self.visited.insert((depth, za.clone(), zb.clone())) {
            return Ok(());
        }
        let na = whnf_with(&za, &mut self.fuel).map_err(|_| UnifyError::NoUnifier)?;
        let nb = whnf_with(&zb, &mut self.fuel).map_err(|_| UnifyError::NoUnifier)?;
        if na == za && nb == zb {
            return Err(UnifyError::NoUnifier);
        }
        self.terms(&na, &nb, depth)
    }

    fn bind(&mut self, m: usize, t: &Term) -> Result<(), UnifyError> {
        let t = self.store.zonk(t);
        if t == Term::Meta(m) {
            return Ok(());
        }
        if t.max_loose_var().is_some() {
            return Err(UnifyError::NoUnifier);
        }
        let scope = self.store.metas[m].scope;
        for (i, (c, _)) in self.eigen.iter().enumerate() {
            if i >= scope && t.mentions_const(c) {
                return Err(UnifyError::NoUnifier);
            }
        }
        let mut inner = Vec::new();
        collect_metas(&t, &mut inner);
        let t = if inner.contains(&m) {
            match self.mode {
                UnifyMode::Syntactic => return Err(UnifyError::OccursCheck(m)),
                UnifyMode::Rational | UnifyMode::ModuloWhnf => {
                    let ty = self.store.metas[m].ty.clone();
                    if !ty.is_base() {
                        return Err(UnifyError::NoUnifier);
                    }
                    let hint = self.store.metas[m].hint.clone();
                    let knot = Term::Fix(Hint(hint), ty, std::sync::Arc::new(t.meta_to_var(m, 0)));
                    // Other metas stand for base terms; test guardedness with
                    // them as opaque constants.
                    let probe = knot.map_metas(&mut |_| Some(Term::Const(Sym::from(PROBE))));
                    let ext = ProbeTable {
                        inner: self.sig,
                        eigen: self.eigen,
                    };
                    if guarded_base_type(&ext, &mut Vec::new(), &probe).is_none() {
                        return Err(UnifyError::NoUnifier);
                    }
                    inner.retain(|&n| n != m);
                    knot
                }
            }
        } else {
            t
        };
        for n in inner {
            if self.store.metas[n].scope > scope {
                self.store.metas[n].scope = scope;
            }
        }
        self.store.bind(m, t);
        Ok(())
    }
}

const PROBE: &str = "\u{0}meta";

struct ProbeTable<'a> {
    inner: &'a dyn SymbolTable,
    eigen: &'a [(Sym, SimpleType)],
}

impl SymbolTable for ProbeTable<'_> {
    fn const_type(&self, name: &str) -> Option<&SimpleType> {
        static BASE: SimpleType = SimpleType::Base;
        if name == PROBE {
            return Some(&BASE);
        }
        self.eigen
            .iter()
            .rev()
            .find(|(c, _)| &**c == name)
            .map(|(_, t)| t)
            .or_else(|| self.inner.const_type(name))
    }

    fn pred_type(&self, name: &str) -> Option<&crate::kernel::PropType> {
        self.inner.pred_type(name)
    }
}

fn collect_metas(t: &Term, out: &mut Vec<usize>) {
    match t {
        Term::Meta(m) => {
            if !out.contains(m) {
                out.push(*m)
            }
        }
        Term::Var(_) | Term::Const(_) => {}
        Term::App(f, a) => {
            collect_metas(f, out);
            collect_metas(a, out);
        }
        Term::Lam(_, _, b) | Term::Fix(_, _, b) => collect_metas(b, out),
    }
}

/// Unifies two terms whose metavariables `Meta(0..)` are the unknowns, all of
/// base type. Returns the resolved substitution on the metas occurring in
/// either side.
pub fn unify(
    sig: &dyn SymbolTable,
    t1: &Term,
    t2: &Term,
    mode: UnifyMode,
) -> Result<Substitution, UnifyError> {
    let mut store = MetaStore::new();
    let n = max_meta(t1).max(max_meta(t2));
    for _ in 0..n {
        store.fresh("x", SimpleType::Base, 0);
    }
    let mut u = Unifier::new(sig, &[], mode, &mut store, DEFAULT_FUEL);
    u.terms(t1, t2, 0)?;
    Ok(store.substitution(n))
}

/// Atom-level variant of [`unify`].
pub fn unify_atoms(
    sig: &dyn SymbolTable,
    a: &Formula,
    b: &Formula,
    mode: UnifyMode,
) -> Result<Substitution, UnifyError> {
    let mut n = 0;
    for f in [a, b] {
        f.for_each_term(&mut |t, _| n = n.max(max_meta(t)));
    }
    let mut store = MetaStore::new();
    for _ in 0..n {
        store.fresh("x", SimpleType::Base, 0);
    }
    let mut u = Unifier::new(sig, &[], mode, &mut store, DEFAULT_FUEL);
    u.atoms(a, b)?;
    Ok(store.substitution(n))
}

/// One past the largest meta index in `t`.
pub fn max_meta(t: &Term) -> usize {
    let mut v = Vec::new();
    collect_metas(t, &mut v);
    v.into_iter().map(|m| m + 1).max().unwrap_or(0)
}
