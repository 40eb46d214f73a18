//! Invariants extracted from CUP proofs: the proven atoms over the proof's
//! eigenvariables, closed under the substitutions by which the coinduction
//! hypothesis was instantiated.

use std::sync::Arc;

use crate::kernel::{Signature, SimpleType, Sym, Term};
use crate::logic::{Clause, Formula, Program};
use crate::prover::{CupProof, Judgment, Payload, ProofNode, Rule, Selected};

use super::coterm::{interpret_guarded, Coterm, KleisliSubst};
use super::model::{horn_clauses, supported, Interpretation, TruncatedAtom};
use super::HerbrandError;

#[derive(Clone, Debug)]
pub struct Invariant {
    /// Eigenvariables of the proof, in order of introduction.
    pub eigen: Vec<(Sym, SimpleType)>,
    pub theta0: KleisliSubst,
    /// One substitution per use of the coinduction hypothesis.
    pub agents: Vec<KleisliSubst>,
    /// Atoms proven somewhere in the proof, over the eigenvariables.
    pub atoms: Vec<Formula>,
    /// Body atoms of the goal, taken as given members.
    pub assumptions: Vec<Formula>,
    /// Lemmas admitted by the proof.
    pub uses: Vec<Clause>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Counterexample(TruncatedAtom),
}

/// `∀x̄. A₁ ∧ … ∧ Aₙ → A₀` (with `n ≥ 0`).
fn hg_goal_shape(f: &Formula) -> bool {
    fn atoms(f: &Formula) -> bool {
        match f {
            Formula::And(a, b) => atoms(a) && atoms(b),
            f => f.is_atom(),
        }
    }
    match f {
        Formula::Forall(_, _, b) => hg_goal_shape(b),
        Formula::Imp(body, head) => atoms(body) && head.is_atom(),
        f => f.is_atom(),
    }
}

fn split_conj(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) => {
            split_conj(a, out);
            split_conj(b, out);
        }
        f => out.push(f.clone()),
    }
}

/// Completes `given` to a `θ₀` for the proof: every eigenvariable without an
/// entry is sent to an inhabitant of its type.
pub fn default_theta0(
    sig: &Signature,
    proof: &CupProof,
    given: KleisliSubst,
) -> Result<KleisliSubst, HerbrandError> {
    let mut theta = given;
    let mut missing = None;
    proof.root.visit(&mut |n| {
        for (c, ty) in &n.conclusion.eigen {
            if theta.get(c).is_some() || missing.is_some() {
                continue;
            }
            match crate::prover::search::inhabitant(sig, ty).map(|w| interpret_guarded(sig, &w)) {
                Some(Ok(v)) => theta.insert(c.clone(), v),
                _ => missing = Some(c.to_string()),
            }
        }
    });
    match missing {
        Some(c) => Err(HerbrandError::NotGround(format!(
            "no closed value for `{}`",
            c
        ))),
        None => Ok(theta),
    }
}

/// Reads the invariant off a checked proof. `theta0` must close every
/// eigenvariable of the proof.
pub fn extract_invariant(
    program: &Program,
    proof: &CupProof,
    theta0: KleisliSubst,
) -> Result<Invariant, HerbrandError> {
    if let Judgment::Co(phi) = &proof.root.conclusion.judgment {
        if !hg_goal_shape(phi) {
            return Err(HerbrandError::NotHgGoal(format!("{:?}", phi)));
        }
    }
    let mut eigen: Vec<(Sym, SimpleType)> = Vec::new();
    let mut atoms: Vec<Formula> = Vec::new();
    let mut assumptions = Vec::new();
    let mut uses_of_hyp: Vec<&ProofNode> = Vec::new();
    proof.root.visit(&mut |n| {
        let s = &n.conclusion;
        for e in &s.eigen {
            if !eigen.contains(e) {
                eigen.push(e.clone());
            }
        }
        match &s.judgment {
            Judgment::Guarded(a) | Judgment::Goal(a) if a.is_atom() && !atoms.contains(a) => {
                atoms.push(a.clone())
            }
            _ => {}
        }
        if let (Rule::ImpRg, Judgment::Guarded(Formula::Imp(a, _))) = (&n.rule, &s.judgment) {
            split_conj(a, &mut assumptions);
        }
        if n.rule == Rule::Dec && n.payload == Payload::Select(Selected::Hyp(0)) {
            uses_of_hyp.push(n);
        }
    });
    for (c, _) in &eigen {
        if theta0.get(c).is_none() {
            return Err(HerbrandError::NotGround(format!(
                "θ₀ does not close `{}`",
                c
            )));
        }
    }
    let roots: Vec<Sym> = root_eigen(&proof.root);
    let sig = &program.sig;
    let mut agents = Vec::new();
    for n in uses_of_hyp {
        let ext = sig.with(&n.conclusion.eigen);
        let mut theta = KleisliSubst::new();
        for (c, w) in roots.iter().zip(witnesses(n)) {
            theta.insert(c.clone(), interpret_guarded(&ext, &w)?);
        }
        agents.push(theta);
    }
    Ok(Invariant {
        eigen,
        theta0,
        agents,
        atoms,
        assumptions,
        uses: proof.uses.clone(),
    })
}

/// The eigenvariables introduced by the `∀Rg` chain below `Cofix`.
fn root_eigen(root: &ProofNode) -> Vec<Sym> {
    let mut out = Vec::new();
    let mut n = root.children.first();
    while let Some(m) = n {
        match (&m.rule, &m.payload) {
            (Rule::AllRg, Payload::Fresh(c)) => out.push(c.clone()),
            (Rule::AndRg | Rule::ImpRg, _) => {}
            _ => break,
        }
        n = m.children.first();
    }
    out
}

/// The `∀L` witnesses along the focus branch of a `Dec` node.
fn witnesses(n: &ProofNode) -> Vec<Term> {
    let mut out = Vec::new();
    let mut cur = n.children.first();
    while let Some(m) = cur {
        if let (Rule::AllL, Payload::Witness(w)) = (&m.rule, &m.payload) {
            out.push(w.clone());
        }
        if !matches!(m.conclusion.judgment, Judgment::Focus(..)) {
            break;
        }
        cur = m.children.first();
    }
    out
}

fn instances(
    sig: &Signature,
    eigen: &[(Sym, SimpleType)],
    atoms: &[Formula],
    theta: &Arc<KleisliSubst>,
    k: usize,
    out: &mut Vec<TruncatedAtom>,
) -> Result<(), HerbrandError> {
    let ext = sig.with(eigen);
    for a in atoms {
        let Formula::Atom(p, args) = a else { continue };
        let mut ts = Vec::with_capacity(args.len());
        for t in args {
            let c = Coterm::Subst(Arc::new(interpret_guarded(&ext, t)?), theta.clone());
            ts.push(c.truncate(k.saturating_sub(1))?);
        }
        let x = TruncatedAtom {
            pred: p.clone(),
            args: ts,
        };
        if !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(())
}

/// Enumerates `⟦D⟧[Θ(w)]` for words `w` over the agents of length at most
/// `len_bound`, with `Θ(ε) = θ₀` and `Θ(w·i) = θᵢ ⊙ Θ(w)`, and checks each
/// atom is supported by the enumerated set at depth `k`. Instances of the
/// goal's body atoms are added as given members.
pub fn check_invariant(
    program: &Program,
    inv: &Invariant,
    k: usize,
    len_bound: usize,
) -> Result<Verdict, HerbrandError> {
    let p = program.extended(&inv.uses);
    let clauses = horn_clauses(&p)?;
    let mut words = vec![Arc::new(inv.theta0.clone())];
    let mut frontier = words.clone();
    for _ in 0..len_bound {
        let mut next = Vec::new();
        for w in &frontier {
            for a in &inv.agents {
                next.push(Arc::new(a.then(w)));
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut given = Vec::new();
    let mut proven = Vec::new();
    for theta in &words {
        instances(&p.sig, &inv.eigen, &inv.assumptions, theta, k, &mut given)?;
        instances(&p.sig, &inv.eigen, &inv.atoms, theta, k, &mut proven)?;
    }
    let mut i = Interpretation::new(k);
    i.atoms.extend(given.iter().cloned());
    i.atoms.extend(proven.iter().cloned());
    for x in &proven {
        if !given.contains(x) && !supported(&clauses, x, &i)? {
            return Ok(Verdict::Counterexample(x.clone()));
        }
    }
    Ok(Verdict::Ok)
}
