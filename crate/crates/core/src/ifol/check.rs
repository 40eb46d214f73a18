use crate::kernel::guard::guarded_base_type;
use crate::kernel::{Conv, Extended, Signature, SimpleType, Sym, SymbolTable, Term, DEFAULT_FUEL};
use crate::logic::{formula_convertible, well_formed, Formula};
use crate::prover::RuleError;

use super::derived::expand_derived;
use super::tree::{INode, IPayload, IRule, ISequent};

/// Checks every node of an iFOL▷ derivation. Derived-rule nodes are
/// checked by expanding them over their premises.
pub fn check_ifol_proof(sig: &Signature, root: &INode) -> Result<(), RuleError> {
    let cx = Checker {
        sig,
        fuel: DEFAULT_FUEL,
    };
    cx.node(root, &mut Vec::new(), false)
}

struct Checker<'a> {
    sig: &'a Signature,
    fuel: usize,
}

impl Checker<'_> {
    fn node(&self, n: &INode, path: &mut Vec<usize>, holes: bool) -> Result<(), RuleError> {
        if let Err(reason) = self.local(n, holes) {
            return Err(RuleError {
                path: path.clone(),
                reason,
            });
        }
        for (i, c) in n.children.iter().enumerate() {
            path.push(i);
            self.node(c, path, holes)?;
            path.pop();
        }
        Ok(())
    }

    fn local(&self, n: &INode, holes: bool) -> Result<(), String> {
        let s = &n.conclusion;
        let sig = self.sig.with(&s.eigen);
        self.well_formed(&sig, s)?;
        let arity = |k: usize| -> Result<(), String> {
            if n.children.len() == k {
                Ok(())
            } else {
                Err(format!(
                    "{} expects {} premises, found {}",
                    n.rule,
                    k,
                    n.children.len()
                ))
            }
        };
        let premise = |i: usize, expected: &ISequent| -> Result<(), String> {
            if n.children[i].conclusion == *expected {
                Ok(())
            } else {
                Err(format!(
                    "premise {} of {} does not match the rule",
                    i + 1,
                    n.rule
                ))
            }
        };
        let same_context = |c: &ISequent| c.eigen == s.eigen && c.delta == s.delta;
        let index = || -> Result<usize, String> {
            match n.payload {
                IPayload::Index(i) if i < s.delta.len() => Ok(i),
                IPayload::Index(i) => Err(format!("no assumption #{}", i)),
                _ => Err(format!("{} needs an assumption index", n.rule)),
            }
        };
        let goal = &s.goal;
        match n.rule {
            IRule::Hole if holes => arity(0),
            IRule::Hole => Err("open premise".into()),
            IRule::Proj => {
                arity(0)?;
                let i = index()?;
                if s.delta[i] == *goal {
                    Ok(())
                } else {
                    Err(format!("assumption #{} is not the goal", i))
                }
            }
            IRule::Conv => {
                arity(1)?;
                let c = &n.children[0].conclusion;
                if !same_context(c) {
                    return Err("Conv changes the context".into());
                }
                match formula_convertible(goal, &c.goal, self.fuel) {
                    Conv::Yes => Ok(()),
                    Conv::No => Err("Conv: formulae are not convertible".into()),
                    Conv::Unknown => Err("Conv: conversion undecided within fuel".into()),
                }
            }
            IRule::TopI => {
                arity(0)?;
                if *goal == Formula::Top {
                    Ok(())
                } else {
                    Err("TopI proves only ⊤".into())
                }
            }
            IRule::AndI => {
                arity(2)?;
                let Formula::And(a, b) = goal else {
                    return Err("AndI needs a conjunction".into());
                };
                premise(0, &s.with_goal((**a).clone()))?;
                premise(1, &s.with_goal((**b).clone()))
            }
            IRule::AndE1 | IRule::AndE2 => {
                arity(1)?;
                let c = &n.children[0].conclusion;
                let Formula::And(a, b) = &c.goal else {
                    return Err("premise is not a conjunction".into());
                };
                let picked = if n.rule == IRule::AndE1 { a } else { b };
                if !same_context(c) || **picked != *goal {
                    return Err(format!("{} does not match its premise", n.rule));
                }
                Ok(())
            }
            IRule::OrI1 | IRule::OrI2 => {
                arity(1)?;
                let Formula::Or(a, b) = goal else {
                    return Err("needs a disjunction".into());
                };
                let picked = if n.rule == IRule::OrI1 { a } else { b };
                premise(0, &s.with_goal((**picked).clone()))
            }
            IRule::OrE => {
                arity(2)?;
                let i = index()?;
                let Formula::Or(a, b) = &s.delta[i] else {
                    return Err("OrE needs a disjunctive assumption".into());
                };
                premise(0, &s.assuming((**a).clone(), goal.clone()))?;
                premise(1, &s.assuming((**b).clone(), goal.clone()))
            }
            IRule::ImpI => {
                arity(1)?;
                let Formula::Imp(a, b) = goal else {
                    return Err("ImpI needs an implication".into());
                };
                premise(0, &s.assuming((**a).clone(), (**b).clone()))
            }
            IRule::ImpE => {
                arity(2)?;
                let f = &n.children[0].conclusion;
                let a = &n.children[1].conclusion;
                let Formula::Imp(x, y) = &f.goal else {
                    return Err("first premise of ImpE is not an implication".into());
                };
                if !same_context(f) || !same_context(a) || **y != *goal || **x != a.goal {
                    return Err("ImpE premises do not match".into());
                }
                Ok(())
            }
            IRule::AllI => {
                arity(1)?;
                let Formula::Forall(_, ty, body) = goal else {
                    return Err("AllI needs a universal".into());
                };
                let c = self.fresh(&sig, &n.payload)?;
                let mut p = s.with_goal(body.instantiate(&Term::Const(c.clone())));
                p.eigen.push((c, ty.clone()));
                premise(0, &p)
            }
            IRule::AllE => {
                arity(1)?;
                let c = &n.children[0].conclusion;
                let Formula::Forall(_, ty, body) = &c.goal else {
                    return Err("premise of AllE is not a universal".into());
                };
                let w = self.witness(&sig, &n.payload, ty)?;
                if !same_context(c) || body.instantiate(&w) != *goal {
                    return Err("AllE does not match its premise".into());
                }
                Ok(())
            }
            IRule::ExI => {
                arity(1)?;
                let Formula::Exists(_, ty, body) = goal else {
                    return Err("ExI needs an existential".into());
                };
                let w = self.witness(&sig, &n.payload, ty)?;
                premise(0, &s.with_goal(body.instantiate(&w)))
            }
            IRule::ExE => {
                arity(1)?;
                let IPayload::Open(i, c) = &n.payload else {
                    return Err("ExE needs an index and a fresh variable".into());
                };
                let Some(Formula::Exists(_, ty, body)) = s.delta.get(*i) else {
                    return Err("ExE needs an existential assumption".into());
                };
                let c = self.fresh(&sig, &IPayload::Fresh(c.clone()))?;
                let mut p = s.assuming(body.instantiate(&Term::Const(c.clone())), goal.clone());
                p.eigen.push((c, ty.clone()));
                premise(0, &p)
            }
            IRule::Next => {
                arity(1)?;
                let Formula::Later(a) = goal else {
                    return Err("Next needs ▷φ".into());
                };
                premise(0, &s.with_goal((**a).clone()))
            }
            IRule::Mon => {
                arity(1)?;
                let shape = match goal {
                    Formula::Imp(a, b) => match (&**a, &**b) {
                        (Formula::Later(x), Formula::Later(y)) => {
                            Some(Formula::later(Formula::imp((**x).clone(), (**y).clone())))
                        }
                        _ => None,
                    },
                    _ => None,
                };
                let Some(p) = shape else {
                    return Err("Mon needs ▷φ → ▷ψ".into());
                };
                premise(0, &s.with_goal(p))
            }
            IRule::Fp => {
                arity(1)?;
                premise(0, &s.assuming(Formula::later(goal.clone()), goal.clone()))
            }
            IRule::Weak => {
                arity(1)?;
                let IPayload::Fresh(c) = &n.payload else {
                    return Err("Weak names the dropped variable".into());
                };
                let Some(pos) = s.eigen.iter().position(|(x, _)| x == c) else {
                    return Err(format!("`{}` is not in the context", c));
                };
                let mut p = s.clone();
                p.eigen.remove(pos);
                if s.delta.iter().any(|f| f.mentions_const(c)) || goal.mentions_const(c) {
                    return Err(format!("`{}` occurs in the sequent", c));
                }
                premise(0, &p)
            }
            _ => {
                let stub = INode {
                    children: n
                        .children
                        .iter()
                        .map(|c| {
                            INode::new(IRule::Hole, c.conclusion.clone(), IPayload::None, vec![])
                        })
                        .collect(),
                    ..n.clone()
                };
                let e = expand_derived(self.sig, &stub).map_err(|e| e.to_string())?;
                self.node(&e, &mut Vec::new(), true)
                    .map_err(|e| format!("{} expansion: {}", n.rule, e.reason))
            }
        }
    }

    fn well_formed(&self, sig: &Extended, s: &ISequent) -> Result<(), String> {
        let mut seen: Vec<&Sym> = Vec::new();
        for (c, _) in &s.eigen {
            if self.sig.consts.contains_key(c) || seen.contains(&c) {
                return Err(format!("variable `{}` is not fresh", c));
            }
            seen.push(c);
        }
        for f in s.delta.iter().chain(std::iter::once(&s.goal)) {
            if f.has_meta() || !f.is_closed() {
                return Err("formulae must be closed".into());
            }
            well_formed(sig, &mut Vec::new(), f).map_err(|e| e.to_string())?;
        }
        Ok(())
    }

    fn fresh(&self, sig: &Extended, payload: &IPayload) -> Result<Sym, String> {
        match payload {
            IPayload::Fresh(c) if sig.const_type(c).is_none() => Ok(c.clone()),
            IPayload::Fresh(c) => Err(format!("`{}` is not fresh", c)),
            _ => Err("needs a fresh variable".into()),
        }
    }

    fn witness(&self, sig: &Extended, payload: &IPayload, ty: &SimpleType) -> Result<Term, String> {
        let IPayload::Witness(w) = payload else {
            return Err("needs a witness term".into());
        };
        if w.has_meta() || !w.is_closed() {
            return Err("witness must be closed".into());
        }
        match guarded_base_type(sig, &mut Vec::new(), w) {
            Some(t) if t == *ty => Ok(w.clone()),
            _ => Err(format!("witness is not a guarded base term of type {}", ty)),
        }
    }
}
