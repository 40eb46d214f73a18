use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::types::SimpleType;

pub type Sym = Arc<str>;

pub fn sym(s: &str) -> Sym {
    Arc::from(s)
}

/// A binder's surface name. Hints never take part in equality or hashing, so
/// derived `Eq`/`Hash` on terms and formulae are α-equivalence.
#[derive(Clone, Debug)]
pub struct Hint(pub Sym);

impl Hint {
    pub fn new(s: &str) -> Hint {
        Hint(sym(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

/// Terms in nameless form. `Var(0)` is the innermost binder or the last
/// context entry. `Meta` is a unification variable used only during search.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(usize),
    Const(Sym),
    Meta(usize),
    App(Arc<Term>, Arc<Term>),
    Lam(Hint, SimpleType, Arc<Term>),
    Fix(Hint, SimpleType, Arc<Term>),
}

impl Term {
    pub fn cnst(name: &str) -> Term {
        Term::Const(sym(name))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn lam(name: &str, ty: SimpleType, body: Term) -> Term {
        Term::Lam(Hint::new(name), ty, Arc::new(body))
    }

    pub fn fix(name: &str, ty: SimpleType, body: Term) -> Term {
        Term::Fix(Hint::new(name), ty, Arc::new(body))
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn is_rigid_head(&self) -> bool {
        matches!(self, Term::Var(_) | Term::Const(_))
    }

    /// Adds `d` to every variable index `>= cutoff`.
    pub fn shift(&self, d: isize, cutoff: usize) -> Term {
        if d == 0 || self.max_loose_var().map_or(true, |m| m < cutoff) {
            return self.clone();
        }
        self.shift_unchecked(d, cutoff)
    }

    fn shift_unchecked(&self, d: isize, cutoff: usize) -> Term {
        match self {
            Term::Var(i) if *i >= cutoff => Term::Var((*i as isize + d) as usize),
            Term::Var(_) | Term::Const(_) | Term::Meta(_) => self.clone(),
            Term::App(f, a) => {
                Term::app(f.shift_unchecked(d, cutoff), a.shift_unchecked(d, cutoff))
            }
            Term::Lam(h, t, b) => Term::Lam(
                h.clone(),
                t.clone(),
                Arc::new(b.shift_unchecked(d, cutoff + 1)),
            ),
            Term::Fix(h, t, b) => Term::Fix(
                h.clone(),
                t.clone(),
                Arc::new(b.shift_unchecked(d, cutoff + 1)),
            ),
        }
    }

    /// `body[arg/0]`: replaces the innermost loose variable and lowers the
    /// others by one. `arg` lives in the context outside the binder.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.subst_at(0, arg)
    }

    /// Replaces `Var(depth)` by `arg` (shifted by `depth`) and lowers indices
    /// above it.
    pub fn subst_at(&self, depth: usize, arg: &Term) -> Term {
        match self {
            Term::Var(i) if *i == depth => arg.shift(depth as isize, 0),
            Term::Var(i) if *i > depth => Term::Var(i - 1),
            Term::Var(_) | Term::Const(_) | Term::Meta(_) => self.clone(),
            Term::App(f, a) => Term::app(f.subst_at(depth, arg), a.subst_at(depth, arg)),
            Term::Lam(h, t, b) => {
                Term::Lam(h.clone(), t.clone(), Arc::new(b.subst_at(depth + 1, arg)))
            }
            Term::Fix(h, t, b) => {
                Term::Fix(h.clone(), t.clone(), Arc::new(b.subst_at(depth + 1, arg)))
            }
        }
    }

    /// Largest loose variable index, if any variable is loose.
    pub fn max_loose_var(&self) -> Option<usize> {
        fn go(t: &Term, depth: usize, acc: &mut Option<usize>) {
            match t {
                Term::Var(i) if *i >= depth => {
                    let v = i - depth;
                    *acc = Some(acc.map_or(v, |m: usize| m.max(v)));
                }
                Term::Var(_) | Term::Const(_) | Term::Meta(_) => {}
                Term::App(f, a) => {
                    go(f, depth, acc);
                    go(a, depth, acc);
                }
                Term::Lam(_, _, b) | Term::Fix(_, _, b) => go(b, depth + 1, acc),
            }
        }
        let mut acc = None;
        go(self, 0, &mut acc);
        acc
    }

    pub fn is_closed(&self) -> bool {
        self.max_loose_var().is_none()
    }

    /// Loose variable indices occurring in the term.
    pub fn loose_vars(&self) -> BTreeSet<usize> {
        fn go(t: &Term, depth: usize, acc: &mut BTreeSet<usize>) {
            match t {
                Term::Var(i) if *i >= depth => {
                    acc.insert(i - depth);
                }
                Term::Var(_) | Term::Const(_) | Term::Meta(_) => {}
                Term::App(f, a) => {
                    go(f, depth, acc);
                    go(a, depth, acc);
                }
                Term::Lam(_, _, b) | Term::Fix(_, _, b) => go(b, depth + 1, acc),
            }
        }
        let mut acc = BTreeSet::new();
        go(self, 0, &mut acc);
        acc
    }

    pub fn has_fix(&self) -> bool {
        match self {
            Term::Fix(..) => true,
            Term::Var(_) | Term::Const(_) | Term::Meta(_) => false,
            Term::App(f, a) => f.has_fix() || a.has_fix(),
            Term::Lam(_, _, b) => b.has_fix(),
        }
    }

    pub fn has_meta(&self) -> bool {
        match self {
            Term::Meta(_) => true,
            Term::Var(_) | Term::Const(_) => false,
            Term::App(f, a) => f.has_meta() || a.has_meta(),
            Term::Lam(_, _, b) | Term::Fix(_, _, b) => b.has_meta(),
        }
    }

    pub fn consts(&self, acc: &mut BTreeSet<Sym>) {
        match self {
            Term::Const(c) => {
                acc.insert(c.clone());
            }
            Term::Var(_) | Term::Meta(_) => {}
            Term::App(f, a) => {
                f.consts(acc);
                a.consts(acc);
            }
            Term::Lam(_, _, b) | Term::Fix(_, _, b) => b.consts(acc),
        }
    }

    pub fn mentions_const(&self, name: &str) -> bool {
        match self {
            Term::Const(c) => &**c == name,
            Term::Var(_) | Term::Meta(_) => false,
            Term::App(f, a) => f.mentions_const(name) || a.mentions_const(name),
            Term::Lam(_, _, b) | Term::Fix(_, _, b) => b.mentions_const(name),
        }
    }

    /// Rebuilds the term bottom-up, letting `f` replace metas.
    pub fn map_metas(&self, f: &mut dyn FnMut(usize) -> Option<Term>) -> Term {
        match self {
            Term::Meta(m) => f(*m).unwrap_or_else(|| self.clone()),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(a, b) => Term::app(a.map_metas(f), b.map_metas(f)),
            Term::Lam(h, t, b) => Term::Lam(h.clone(), t.clone(), Arc::new(b.map_metas(f))),
            Term::Fix(h, t, b) => Term::Fix(h.clone(), t.clone(), Arc::new(b.map_metas(f))),
        }
    }

    /// Replaces the constant `name` by the loose variable `Var(depth)` seen
    /// from the top (indices of existing loose variables are not touched, so
    /// callers shift first when needed).
    pub fn abstract_const(&self, name: &str, index: usize) -> Term {
        fn go(t: &Term, name: &str, index: usize, depth: usize) -> Term {
            match t {
                Term::Const(c) if &**c == name => Term::Var(index + depth),
                Term::Var(_) | Term::Const(_) | Term::Meta(_) => t.clone(),
                Term::App(f, a) => Term::app(go(f, name, index, depth), go(a, name, index, depth)),
                Term::Lam(h, ty, b) => Term::Lam(
                    h.clone(),
                    ty.clone(),
                    Arc::new(go(b, name, index, depth + 1)),
                ),
                Term::Fix(h, ty, b) => Term::Fix(
                    h.clone(),
                    ty.clone(),
                    Arc::new(go(b, name, index, depth + 1)),
                ),
            }
        }
        go(self, name, index, 0)
    }

    /// Replaces `Meta(m)` by the variable bound `depth` binders up; used to
    /// tie a rational knot `m = C[m]` into `fix m. C[m]`.
    pub fn meta_to_var(&self, m: usize, depth: usize) -> Term {
        match self {
            Term::Meta(n) if *n == m => Term::Var(depth),
            Term::Var(_) | Term::Const(_) | Term::Meta(_) => self.clone(),
            Term::App(f, a) => Term::app(f.meta_to_var(m, depth), a.meta_to_var(m, depth)),
            Term::Lam(h, t, b) => {
                Term::Lam(h.clone(), t.clone(), Arc::new(b.meta_to_var(m, depth + 1)))
            }
            Term::Fix(h, t, b) => {
                Term::Fix(h.clone(), t.clone(), Arc::new(b.meta_to_var(m, depth + 1)))
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) | Term::Meta(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, _, b) | Term::Fix(_, _, b) => 1 + b.size(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_equal_ignores_hints() {
        let a = Term::lam("x", SimpleType::Base, Term::Var(0));
        let b = Term::lam("y", SimpleType::Base, Term::Var(0));
        assert_eq!(a, b);
    }

    #[test]
    fn instantiate_lowers_outer_vars() {
        // (λ. 1 0)[c/0] under one outer var: body `Var(1) Var(0)` with arg c
        let body = Term::app(Term::Var(1), Term::Var(0));
        let r = body.instantiate(&Term::cnst("c"));
        assert_eq!(r, Term::app(Term::Var(0), Term::cnst("c")));
    }

    #[test]
    fn instantiate_shifts_argument_under_binders() {
        let body = Term::lam("y", SimpleType::Base, Term::app(Term::Var(1), Term::Var(0)));
        let r = body.instantiate(&Term::Var(3));
        assert_eq!(
            r,
            Term::lam("y", SimpleType::Base, Term::app(Term::Var(4), Term::Var(0)))
        );
    }
}
