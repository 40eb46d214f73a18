use std::collections::BTreeSet;
use std::sync::Arc;

use crate::kernel::reduce::{convertible, Conv};
use crate::kernel::{Hint, SimpleType, Sym, Term};

/// First-order formulae, optionally with the later modality. Bound variables
/// are de Bruijn indices shared with the terms they scope over.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Atom(Sym, Vec<Term>),
    Top,
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Forall(Hint, SimpleType, Arc<Formula>),
    Exists(Hint, SimpleType, Arc<Formula>),
    Later(Arc<Formula>),
}

impl Formula {
    pub fn atom(p: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(crate::kernel::sym(p), args)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn forall(x: &str, ty: SimpleType, body: Formula) -> Formula {
        Formula::Forall(Hint::new(x), ty, Arc::new(body))
    }

    pub fn exists(x: &str, ty: SimpleType, body: Formula) -> Formula {
        Formula::Exists(Hint::new(x), ty, Arc::new(body))
    }

    pub fn later(a: Formula) -> Formula {
        Formula::Later(Arc::new(a))
    }

    /// Right-nested conjunction of the given formulae; `⊤` when empty.
    pub fn conj(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::Top,
            1 => fs.pop().unwrap(),
            _ => {
                let last = fs.pop().unwrap();
                fs.into_iter()
                    .rev()
                    .fold(last, |acc, f| Formula::and(f, acc))
            }
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(..) | Formula::Top)
    }

    /// Applies `f` to every term together with the number of binders
    /// crossed on the way down.
    pub fn map_terms(&self, f: &mut dyn FnMut(&Term, usize) -> Term) -> Formula {
        self.map_terms_at(0, f)
    }

    fn map_terms_at(&self, depth: usize, f: &mut dyn FnMut(&Term, usize) -> Term) -> Formula {
        match self {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|t| f(t, depth)).collect())
            }
            Formula::Top => Formula::Top,
            Formula::And(a, b) => Formula::and(a.map_terms_at(depth, f), b.map_terms_at(depth, f)),
            Formula::Or(a, b) => Formula::or(a.map_terms_at(depth, f), b.map_terms_at(depth, f)),
            Formula::Imp(a, b) => Formula::imp(a.map_terms_at(depth, f), b.map_terms_at(depth, f)),
            Formula::Forall(h, t, b) => {
                Formula::Forall(h.clone(), t.clone(), Arc::new(b.map_terms_at(depth + 1, f)))
            }
            Formula::Exists(h, t, b) => {
                Formula::Exists(h.clone(), t.clone(), Arc::new(b.map_terms_at(depth + 1, f)))
            }
            Formula::Later(a) => Formula::later(a.map_terms_at(depth, f)),
        }
    }

    pub fn for_each_term(&self, f: &mut dyn FnMut(&Term, usize)) {
        self.for_each_term_at(0, f)
    }

    fn for_each_term_at(&self, depth: usize, f: &mut dyn FnMut(&Term, usize)) {
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|t| f(t, depth)),
            Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.for_each_term_at(depth, f);
                b.for_each_term_at(depth, f);
            }
            Formula::Forall(_, _, b) | Formula::Exists(_, _, b) => b.for_each_term_at(depth + 1, f),
            Formula::Later(a) => a.for_each_term_at(depth, f),
        }
    }

    pub fn shift(&self, d: isize, cutoff: usize) -> Formula {
        if d == 0 {
            return self.clone();
        }
        self.map_terms(&mut |t, depth| t.shift(d, cutoff + depth))
    }

    /// Instantiates the innermost loose variable with `arg`.
    pub fn instantiate(&self, arg: &Term) -> Formula {
        self.map_terms(&mut |t, depth| t.subst_at(depth, arg))
    }

    pub fn abstract_const(&self, name: &str, index: usize) -> Formula {
        self.map_terms(&mut |t, depth| t.abstract_const(name, index + depth))
    }

    pub fn map_metas(&self, f: &mut dyn FnMut(usize) -> Option<Term>) -> Formula {
        self.map_terms(&mut |t, _| t.map_metas(f))
    }

    pub fn loose_vars(&self) -> BTreeSet<usize> {
        let mut acc = BTreeSet::new();
        self.for_each_term(&mut |t, depth| {
            for v in t.loose_vars() {
                if v >= depth {
                    acc.insert(v - depth);
                }
            }
        });
        acc
    }

    pub fn is_closed(&self) -> bool {
        self.loose_vars().is_empty()
    }

    pub fn has_meta(&self) -> bool {
        let mut found = false;
        self.for_each_term(&mut |t, _| found |= t.has_meta());
        found
    }

    pub fn has_fix(&self) -> bool {
        let mut found = false;
        self.for_each_term(&mut |t, _| found |= t.has_fix());
        found
    }

    pub fn has_later(&self) -> bool {
        match self {
            Formula::Later(_) => true,
            Formula::Atom(..) | Formula::Top => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.has_later() || b.has_later()
            }
            Formula::Forall(_, _, b) | Formula::Exists(_, _, b) => b.has_later(),
        }
    }

    pub fn mentions_const(&self, name: &str) -> bool {
        let mut found = false;
        self.for_each_term(&mut |t, _| found |= t.mentions_const(name));
        found
    }

    pub fn consts(&self, acc: &mut BTreeSet<Sym>) {
        self.for_each_term(&mut |t, _| t.consts(acc));
    }

    pub fn preds(&self, acc: &mut BTreeSet<Sym>) {
        match self {
            Formula::Atom(p, _) => {
                acc.insert(p.clone());
            }
            Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.preds(acc);
                b.preds(acc);
            }
            Formula::Forall(_, _, b) | Formula::Exists(_, _, b) => b.preds(acc),
            Formula::Later(a) => a.preds(acc),
        }
    }
}

/// Conversion lifted to formulae: identical connective structure and
/// pairwise convertible atom arguments.
pub fn formula_convertible(a: &Formula, b: &Formula, fuel: usize) -> Conv {
    fn and(x: Conv, y: Conv) -> Conv {
        match (x, y) {
            (Conv::No, _) | (_, Conv::No) => Conv::No,
            (Conv::Unknown, _) | (_, Conv::Unknown) => Conv::Unknown,
            _ => Conv::Yes,
        }
    }
    match (a, b) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            if p != q || xs.len() != ys.len() {
                return Conv::No;
            }
            xs.iter().zip(ys).fold(Conv::Yes, |acc, (x, y)| {
                if acc == Conv::No {
                    acc
                } else {
                    and(acc, convertible(x, y, fuel))
                }
            })
        }
        (Formula::Top, Formula::Top) => Conv::Yes,
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Imp(a1, b1), Formula::Imp(a2, b2)) => and(
            formula_convertible(a1, a2, fuel),
            formula_convertible(b1, b2, fuel),
        ),
        (Formula::Forall(_, t1, b1), Formula::Forall(_, t2, b2))
        | (Formula::Exists(_, t1, b1), Formula::Exists(_, t2, b2)) => {
            if t1 != t2 {
                return Conv::No;
            }
            formula_convertible(b1, b2, fuel)
        }
        (Formula::Later(x), Formula::Later(y)) => formula_convertible(x, y, fuel),
        _ => Conv::No,
    }
}
