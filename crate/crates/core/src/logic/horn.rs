use crate::kernel::{Hint, Signature, SimpleType, Sym, SymbolTable};

use super::classify::{classify_atom, well_formed};
use super::formula::Formula;
use super::LogicError;

/// A named program clause (any D-formula before normalization).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub name: Sym,
    pub formula: Formula,
}

/// A signature with an ordered list of named clauses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub sig: Signature,
    pub clauses: Vec<Clause>,
}

impl Program {
    pub fn new(sig: Signature) -> Program {
        Program {
            sig,
            clauses: Vec::new(),
        }
    }

    pub fn add_clause(&mut self, name: Sym, formula: Formula) -> Result<(), LogicError> {
        if self.clauses.iter().any(|c| c.name == name) {
            return Err(LogicError::DuplicateClause(name.to_string()));
        }
        if !formula.is_closed() {
            return Err(LogicError::Kernel(
                crate::kernel::KernelError::UnboundVariable(
                    *formula.loose_vars().iter().next().unwrap(),
                ),
            ));
        }
        well_formed(&self.sig, &mut Vec::new(), &formula)?;
        self.clauses.push(Clause { name, formula });
        Ok(())
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| &*c.name == name)
    }

    /// The program extended by further clauses (e.g. proven lemmas).
    pub fn extended(&self, extra: &[Clause]) -> Program {
        let mut p = self.clone();
        p.clauses.extend(extra.iter().cloned());
        p
    }
}

/// `∀x̄. G₁ ∧ … ∧ Gₙ → A`. Body entries are goals in the scope of `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornClause {
    pub vars: Vec<(Hint, SimpleType)>,
    pub body: Vec<Formula>,
    pub head: Formula,
}

impl HornClause {
    pub fn to_formula(&self) -> Formula {
        let inner = if self.body.is_empty() {
            self.head.clone()
        } else {
            Formula::imp(Formula::conj(self.body.clone()), self.head.clone())
        };
        self.vars.iter().rev().fold(inner, |acc, (h, t)| {
            Formula::Forall(h.clone(), t.clone(), acc.into())
        })
    }

    fn var_types(&self) -> Vec<SimpleType> {
        self.vars.iter().map(|(_, t)| t.clone()).collect()
    }

    /// H-formula: every atom first-order and simple.
    pub fn is_h(&self, sig: &dyn SymbolTable) -> bool {
        self.atoms_satisfy(sig, |c| c.first_order && c.simple)
    }

    /// Hg-formula: every atom first-order and guarded.
    pub fn is_hg(&self, sig: &dyn SymbolTable) -> bool {
        self.atoms_satisfy(sig, |c| c.first_order && c.guarded)
    }

    fn atoms_satisfy(&self, sig: &dyn SymbolTable, ok: impl Fn(super::AtomClass) -> bool) -> bool {
        let ctx = self.var_types();
        std::iter::once(&self.head)
            .chain(&self.body)
            .all(|a| classify_atom(sig, &ctx, a).map_or(false, &ok))
    }
}

/// Rewrites fohc D-formulae into Horn clauses: quantifiers move to the
/// front, conjunctions of definite clauses split, and nested implications
/// collect their premises into one body.
pub fn normalize_to_horn(ds: &[Formula]) -> Result<Vec<HornClause>, LogicError> {
    let mut out = Vec::new();
    for d in ds {
        normalize(d, &mut Vec::new(), &mut Vec::new(), &mut out)?;
    }
    Ok(out)
}

fn normalize(
    d: &Formula,
    vars: &mut Vec<(Hint, SimpleType)>,
    body: &mut Vec<Formula>,
    out: &mut Vec<HornClause>,
) -> Result<(), LogicError> {
    match d {
        Formula::Atom(..) | Formula::Top => {
            out.push(HornClause {
                vars: vars.clone(),
                body: body.clone(),
                head: d.clone(),
            });
            Ok(())
        }
        Formula::Imp(g, rest) => {
            if g.has_later() {
                return Err(LogicError::NotAFohcD);
            }
            let before = body.len();
            split_conj(g, body);
            let r = normalize(rest, vars, body, out);
            body.truncate(before);
            r
        }
        Formula::And(a, b) => {
            normalize(a, vars, body, out)?;
            normalize(b, vars, body, out)
        }
        Formula::Forall(h, t, rest) => {
            let saved = body.clone();
            for f in body.iter_mut() {
                *f = f.shift(1, 0);
            }
            vars.push((h.clone(), t.clone()));
            let r = normalize(rest, vars, body, out);
            vars.pop();
            *body = saved;
            r
        }
        _ => Err(LogicError::NotAFohcD),
    }
}

fn split_conj(g: &Formula, acc: &mut Vec<Formula>) {
    match g {
        Formula::And(a, b) => {
            split_conj(a, acc);
            split_conj(b, acc);
        }
        _ => acc.push(g.clone()),
    }
}

/// Guards an Hg clause: every body atom `A` becomes `▷A`.
pub fn guard_clause(sig: &dyn SymbolTable, phi: &Formula) -> Result<Formula, LogicError> {
    fn go(
        sig: &dyn SymbolTable,
        ctx: &mut Vec<SimpleType>,
        phi: &Formula,
    ) -> Result<Formula, LogicError> {
        let fo_guarded = |ctx: &[SimpleType], a: &Formula| {
            classify_atom(sig, ctx, a).map_or(false, |c| c.first_order && c.guarded)
        };
        match phi {
            Formula::Forall(h, t, b) => {
                ctx.push(t.clone());
                let r = go(sig, ctx, b);
                ctx.pop();
                Ok(Formula::Forall(h.clone(), t.clone(), r?.into()))
            }
            Formula::Imp(body, head) if head.is_atom() => {
                if !fo_guarded(ctx, head) {
                    return Err(LogicError::NotHg);
                }
                let mut atoms = Vec::new();
                split_conj(body, &mut atoms);
                if !atoms.iter().all(|a| a.is_atom() && fo_guarded(ctx, a)) {
                    return Err(LogicError::NotHg);
                }
                Ok(Formula::imp(later_leaves(body), (**head).clone()))
            }
            a if a.is_atom() && fo_guarded(ctx, a) => Ok(a.clone()),
            _ => Err(LogicError::NotHg),
        }
    }
    go(sig, &mut Vec::new(), phi)
}

fn later_leaves(body: &Formula) -> Formula {
    match body {
        Formula::And(a, b) => Formula::and(later_leaves(a), later_leaves(b)),
        a => Formula::later(a.clone()),
    }
}

/// Guards every clause of the program, in order.
pub fn guard_program(p: &Program) -> Result<Vec<Formula>, LogicError> {
    p.clauses
        .iter()
        .map(|c| guard_clause(&p.sig, &c.formula))
        .collect()
}
