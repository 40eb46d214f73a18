use crate::kernel::guard::guarded_base_type;
use crate::kernel::{Extended, Sym, SymbolTable, Term, DEFAULT_FUEL};
use crate::logic::{
    formula_convertible, is_coinduction_goal, is_d_formula, is_g_formula, well_formed, Formula,
    LogicId, Program,
};

use super::tree::{CupProof, Judgment, Payload, ProofNode, Rule, Selected, Sequent};
use super::RuleError;

/// Checks every node of a CUP derivation against its rule. The program is
/// extended by the proof's admitted lemmas.
pub fn check_proof(program: &Program, proof: &CupProof) -> Result<(), RuleError> {
    check_proof_with_fuel(program, proof, DEFAULT_FUEL)
}

pub fn check_proof_with_fuel(
    program: &Program,
    proof: &CupProof,
    fuel: usize,
) -> Result<(), RuleError> {
    let p = program.extended(&proof.uses);
    let cx = Checker {
        program: &p,
        logic: proof.logic,
        fuel,
    };
    let fail = |reason: String| {
        Err(RuleError {
            path: Vec::new(),
            reason,
        })
    };
    for c in &p.clauses {
        if !is_d_formula(&p.sig, &mut Vec::new(), proof.logic, &c.formula) {
            return fail(format!(
                "clause `{}` is not a D-formula of {}",
                c.name, proof.logic
            ));
        }
    }
    let root = &proof.root;
    if !root.conclusion.eigen.is_empty()
        || !root.conclusion.ext.is_empty()
        || !root.conclusion.delta.is_empty()
    {
        return fail(
            "the root sequent must have empty eigenvariables, extensions and hypotheses".into(),
        );
    }
    match &root.conclusion.judgment {
        Judgment::Co(phi) => {
            if !is_coinduction_goal(&p.sig, proof.logic, phi) {
                return fail(format!(
                    "root formula is not a coinduction goal of {}",
                    proof.logic
                ));
            }
        }
        Judgment::Goal(g) => {
            if !is_g_formula(&p.sig, &mut Vec::new(), proof.logic, g) {
                return fail(format!("root formula is not a goal of {}", proof.logic));
            }
        }
        _ => return fail("the root must conclude a coinductive or a goal sequent".into()),
    }
    let mut path = Vec::new();
    cx.node(root, &mut path, true)
}

struct Checker<'a> {
    program: &'a Program,
    logic: LogicId,
    fuel: usize,
}

impl Checker<'_> {
    fn node(&self, n: &ProofNode, path: &mut Vec<usize>, is_root: bool) -> Result<(), RuleError> {
        if let Err(reason) = self.local(n, is_root) {
            return Err(RuleError {
                path: path.clone(),
                reason,
            });
        }
        for (i, c) in n.children.iter().enumerate() {
            path.push(i);
            self.node(c, path, false)?;
            path.pop();
        }
        Ok(())
    }

    fn local(&self, n: &ProofNode, is_root: bool) -> Result<(), String> {
        let seq = &n.conclusion;
        let sig = self.program.sig.with(&seq.eigen);
        self.sequent_well_formed(&sig, seq)?;
        let expect_children = |k: usize| -> Result<(), String> {
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
        let premise = |i: usize, expected: &Sequent| -> Result<(), String> {
            if &n.children[i].conclusion == expected {
                Ok(())
            } else {
                Err(format!(
                    "premise {} of {} does not match the rule",
                    i + 1,
                    n.rule
                ))
            }
        };
        let no_payload = || -> Result<(), String> {
            match n.payload {
                Payload::None => Ok(()),
                _ => Err(format!("{} takes no payload", n.rule)),
            }
        };
        match (&n.rule, &seq.judgment) {
            (Rule::Cofix, Judgment::Co(phi)) => {
                if !is_root {
                    return Err("Cofix is only allowed at the root".into());
                }
                no_payload()?;
                expect_children(1)?;
                let mut s = seq.with_judgment(Judgment::Guarded(phi.clone()));
                s.delta.push(phi.clone());
                premise(0, &s)
            }
            (Rule::AllRg, Judgment::Guarded(Formula::Forall(_, ty, body))) => {
                expect_children(1)?;
                let c = self.fresh(&sig, n)?;
                let mut s =
                    seq.with_judgment(Judgment::Guarded(body.instantiate(&Term::Const(c.clone()))));
                s.eigen.push((c, ty.clone()));
                premise(0, &s)
            }
            (Rule::AndRg, Judgment::Guarded(Formula::And(a, b))) => {
                no_payload()?;
                expect_children(2)?;
                premise(0, &seq.with_judgment(Judgment::Guarded((**a).clone())))?;
                premise(1, &seq.with_judgment(Judgment::Guarded((**b).clone())))
            }
            (Rule::ImpRg, Judgment::Guarded(Formula::Imp(a, b))) => {
                no_payload()?;
                expect_children(1)?;
                if !is_d_formula(&sig, &mut Vec::new(), self.logic, a) {
                    return Err("the hypothesis added by ImpRg is not a D-formula".into());
                }
                let mut s = seq.with_judgment(Judgment::Guarded((**b).clone()));
                s.delta.push((**a).clone());
                premise(0, &s)
            }
            (Rule::DecG, Judgment::Guarded(a)) if a.is_atom() => {
                expect_children(1)?;
                let d = match &n.payload {
                    Payload::Select(Selected::Clause(name)) => self.clause(name)?,
                    _ => return Err("DecG must select a clause of the program".into()),
                };
                premise(0, &seq.with_judgment(Judgment::Focus(d, a.clone())))
            }
            (Rule::Dec, Judgment::Goal(a)) if a.is_atom() => {
                expect_children(1)?;
                let d = match &n.payload {
                    Payload::Select(Selected::Clause(name)) => self.clause(name)?,
                    Payload::Select(Selected::Hyp(i)) => seq
                        .delta
                        .get(*i)
                        .cloned()
                        .ok_or_else(|| format!("no hypothesis #{}", i))?,
                    Payload::Select(Selected::Ext(i)) => seq
                        .ext
                        .get(*i)
                        .cloned()
                        .ok_or_else(|| format!("no extension clause #{}", i))?,
                    _ => return Err("Dec must select an assumption".into()),
                };
                premise(0, &seq.with_judgment(Judgment::Focus(d, a.clone())))
            }
            (Rule::Init, Judgment::Focus(d, a)) => {
                no_payload()?;
                expect_children(0)?;
                if !d.is_atom() {
                    return Err("Init needs an atomic clause in focus".into());
                }
                match formula_convertible(d, a, self.fuel) {
                    crate::kernel::Conv::Yes => Ok(()),
                    crate::kernel::Conv::No => Err("Init: atoms are not convertible".into()),
                    crate::kernel::Conv::Unknown => {
                        Err("Init: conversion undecided within fuel".into())
                    }
                }
            }
            (Rule::TopR, Judgment::Goal(Formula::Top)) => {
                no_payload()?;
                expect_children(0)
            }
            (Rule::ImpL, Judgment::Focus(Formula::Imp(g, d), a)) => {
                no_payload()?;
                expect_children(2)?;
                premise(
                    0,
                    &seq.with_judgment(Judgment::Focus((**d).clone(), a.clone())),
                )?;
                premise(1, &seq.with_judgment(Judgment::Goal((**g).clone())))
            }
            (Rule::ImpR, Judgment::Goal(Formula::Imp(d, g))) => {
                no_payload()?;
                expect_children(1)?;
                let mut s = seq.with_judgment(Judgment::Goal((**g).clone()));
                s.ext.push((**d).clone());
                premise(0, &s)
            }
            (Rule::AndL1, Judgment::Focus(Formula::And(d, _), a))
            | (Rule::AndL2, Judgment::Focus(Formula::And(_, d), a)) => {
                no_payload()?;
                expect_children(1)?;
                premise(
                    0,
                    &seq.with_judgment(Judgment::Focus((**d).clone(), a.clone())),
                )
            }
            (Rule::AndR, Judgment::Goal(Formula::And(g1, g2))) => {
                no_payload()?;
                expect_children(2)?;
                premise(0, &seq.with_judgment(Judgment::Goal((**g1).clone())))?;
                premise(1, &seq.with_judgment(Judgment::Goal((**g2).clone())))
            }
            (Rule::AllL, Judgment::Focus(Formula::Forall(_, ty, d), a)) => {
                expect_children(1)?;
                let w = self.witness(&sig, n, ty)?;
                premise(
                    0,
                    &seq.with_judgment(Judgment::Focus(d.instantiate(&w), a.clone())),
                )
            }
            (Rule::AllR, Judgment::Goal(Formula::Forall(_, ty, g))) => {
                expect_children(1)?;
                let c = self.fresh(&sig, n)?;
                let mut s =
                    seq.with_judgment(Judgment::Goal(g.instantiate(&Term::Const(c.clone()))));
                s.eigen.push((c, ty.clone()));
                premise(0, &s)
            }
            (Rule::ExR, Judgment::Goal(Formula::Exists(_, ty, g))) => {
                expect_children(1)?;
                let w = self.witness(&sig, n, ty)?;
                premise(0, &seq.with_judgment(Judgment::Goal(g.instantiate(&w))))
            }
            (Rule::OrR1, Judgment::Goal(Formula::Or(g, _)))
            | (Rule::OrR2, Judgment::Goal(Formula::Or(_, g))) => {
                no_payload()?;
                expect_children(1)?;
                premise(0, &seq.with_judgment(Judgment::Goal((**g).clone())))
            }
            (rule, _) => Err(format!("{} does not apply to this sequent", rule)),
        }
    }

    fn sequent_well_formed(&self, sig: &Extended, seq: &Sequent) -> Result<(), String> {
        let mut names: Vec<&Sym> = Vec::new();
        for (c, _) in &seq.eigen {
            if self.program.sig.consts.contains_key(c) || names.contains(&c) {
                return Err(format!("eigenvariable `{}` is not fresh", c));
            }
            names.push(c);
        }
        let check = |f: &Formula| -> Result<(), String> {
            if f.has_later() {
                return Err("CUP formulae may not contain the later modality".into());
            }
            if f.has_meta() || !f.is_closed() {
                return Err("sequent formulae must be closed".into());
            }
            well_formed(sig, &mut Vec::new(), f).map_err(|e| e.to_string())
        };
        for f in seq.ext.iter().chain(&seq.delta) {
            check(f)?;
        }
        for f in &seq.delta {
            if !is_d_formula(sig, &mut Vec::new(), self.logic, f) {
                return Err("coinduction hypotheses must be D-formulae".into());
            }
        }
        match &seq.judgment {
            Judgment::Co(f) | Judgment::Guarded(f) | Judgment::Goal(f) => check(f),
            Judgment::Focus(d, a) => {
                check(d)?;
                check(a)
            }
        }
    }

    fn clause(&self, name: &Sym) -> Result<Formula, String> {
        self.program
            .clause(name)
            .map(|c| c.formula.clone())
            .ok_or_else(|| format!("unknown clause `{}`", name))
    }

    fn fresh(&self, sig: &Extended, n: &ProofNode) -> Result<Sym, String> {
        match &n.payload {
            Payload::Fresh(c) => {
                if sig.const_type(c).is_some() {
                    Err(format!("`{}` is not fresh", c))
                } else {
                    Ok(c.clone())
                }
            }
            _ => Err(format!("{} needs a fresh constant", n.rule)),
        }
    }

    fn witness(
        &self,
        sig: &Extended,
        n: &ProofNode,
        ty: &crate::kernel::SimpleType,
    ) -> Result<Term, String> {
        match &n.payload {
            Payload::Witness(w) => {
                if w.has_meta() || !w.is_closed() {
                    return Err("witness must be a closed term".into());
                }
                match guarded_base_type(sig, &mut Vec::new(), w) {
                    Some(t) if t == *ty => Ok(w.clone()),
                    _ => Err(format!("witness is not a guarded base term of type {}", ty)),
                }
            }
            _ => Err(format!("{} needs a witness term", n.rule)),
        }
    }
}
