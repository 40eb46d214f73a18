//! Translation of CUP proofs over guarded programs into iFOL▷ derivations.
//!
//! The coinduction hypothesis becomes the `▷φ` assumption introduced by
//! `FP`. Goals below a guarded clause body are proven at a `▷` target:
//! directly when they resolve against the hypothesis, otherwise by `Next`
//! over the unguarded proof, which keeps every assumption in scope.

use std::collections::HashMap;

use crate::kernel::{Sym, Term};
use crate::logic::{guard_clause, Formula, Program};
use crate::prover::{CupProof, Judgment, Payload, ProofNode, Rule, Selected};

use super::build::*;
use super::tree::{INode, IPayload, IRule, ISequent, IfolProof};
use super::IfolError;

fn unsupported(msg: impl Into<String>) -> IfolError {
    IfolError::UnsupportedShape(msg.into())
}

/// `⌜P⌝` for the program extended by the proof's lemmas, in clause order.
pub fn guarded_context(program: &Program, proof: &CupProof) -> Result<Vec<Formula>, IfolError> {
    let p = program.extended(&proof.uses);
    p.clauses
        .iter()
        .map(|c| {
            guard_clause(&p.sig, &c.formula)
                .map_err(|e| unsupported(format!("clause `{}`: {}", c.name, e)))
        })
        .collect()
}

/// Translates a CUP proof into a derivation of `⌜P⌝ ⊢ φ`, where `P` is the
/// program extended by the proof's lemmas and `φ` its root formula.
pub fn translate(program: &Program, proof: &CupProof) -> Result<IfolProof, IfolError> {
    let p = program.extended(&proof.uses);
    let delta = guarded_context(program, proof)?;
    let clauses = p
        .clauses
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.clone(), i))
        .collect();
    let tr = Translator { clauses };
    let base = Cx {
        seq: ISequent {
            eigen: Vec::new(),
            delta,
            goal: Formula::Top,
        },
        hyp: None,
        hyps: Vec::new(),
        ext: Vec::new(),
    };
    let root = &proof.root;
    let out = match (&root.rule, &root.conclusion.judgment) {
        (Rule::Cofix, Judgment::Co(phi)) => {
            let child = root
                .children
                .first()
                .ok_or_else(|| unsupported("Cofix without premise"))?;
            let mut cx = base.clone();
            cx.hyp = Some(cx.seq.delta.len());
            cx.hyps.push(cx.seq.delta.len());
            cx.seq.delta.push(Formula::later(phi.clone()));
            fp(tr.guarded(child, &cx)?)
        }
        (_, Judgment::Goal(g)) => tr.goal(root, g, &base)?,
        _ => return Err(unsupported("the root must be Cofix or a goal sequent")),
    };
    Ok(IfolProof {
        name: proof.name.clone(),
        root: out,
    })
}

struct Translator {
    clauses: HashMap<Sym, usize>,
}

/// The translation context: the iFOL sequent being built, where the current
/// form of the coinduction hypothesis lives, and where CUP's `Δ` and `→R`
/// assumptions were placed.
#[derive(Clone)]
struct Cx {
    seq: ISequent,
    hyp: Option<usize>,
    hyps: Vec<usize>,
    ext: Vec<usize>,
}

impl Cx {
    fn assume(&self, f: Formula) -> (Cx, usize) {
        let mut cx = self.clone();
        let i = cx.seq.delta.len();
        cx.seq.delta.push(f);
        (cx, i)
    }
}

fn child(n: &ProofNode, i: usize) -> Result<&ProofNode, IfolError> {
    n.children
        .get(i)
        .ok_or_else(|| unsupported(format!("{} is missing a premise", n.rule)))
}

/// `Δ ⊢ ▷F` to `Δ ⊢ ▷F'` given a way to derive `F'` from the assumption `F`.
fn lift(p: INode, f: impl FnOnce(INode) -> Option<INode>) -> Option<INode> {
    let Formula::Later(inner) = &p.conclusion.goal else {
        return None;
    };
    let cx = p.conclusion.assuming((**inner).clone(), Formula::Top);
    let body = f(proj_last(&cx))?;
    imp_e(mon(next(imp_i(body)))?, p)
}

impl Translator {
    /// A derivation of `cx ⊢ φ` for a node concluding `⊢ ⟨φ⟩`.
    fn guarded(&self, n: &ProofNode, cx: &Cx) -> Result<INode, IfolError> {
        let Judgment::Guarded(phi) = &n.conclusion.judgment else {
            return Err(unsupported("expected a guarded sequent"));
        };
        match (&n.rule, phi) {
            (Rule::AllRg, Formula::Forall(hint, ty, _)) => {
                let Payload::Fresh(c) = &n.payload else {
                    return Err(unsupported("AllRg without a variable"));
                };
                let split = cx.hyp.and_then(|h| match &cx.seq.delta[h] {
                    Formula::Later(f) => match &**f {
                        Formula::Forall(h2, t2, b2) => Some((
                            h,
                            Formula::Forall(
                                h2.clone(),
                                t2.clone(),
                                Formula::later((**b2).clone()).into(),
                            ),
                        )),
                        _ => None,
                    },
                    _ => None,
                });
                let mut inner = cx.clone();
                if let Some((_, f)) = &split {
                    let (next_cx, i) = cx.assume(f.clone());
                    inner = next_cx;
                    inner.hyp = Some(i);
                    inner.hyps[0] = i;
                }
                let mut under = inner.clone();
                under.seq.eigen.push((c.clone(), ty.clone()));
                let p = self.guarded(child(n, 0)?, &under)?;
                let gen = all_i(hint.clone(), p);
                Ok(match split {
                    Some((h, _)) => derived(
                        IRule::LaterAllL,
                        cx.seq.with_goal(phi.clone()),
                        IPayload::Index(h),
                        gen,
                    ),
                    None => gen,
                })
            }
            (Rule::AndRg, Formula::And(..)) => Ok(and_i(
                self.guarded(child(n, 0)?, cx)?,
                self.guarded(child(n, 1)?, cx)?,
            )),
            (Rule::ImpRg, Formula::Imp(a, _)) => {
                let (mut inner, i) = cx.assume((**a).clone());
                inner.hyps.push(i);
                Ok(imp_i(self.guarded(child(n, 0)?, &inner)?))
            }
            (Rule::DecG, a) => {
                let Payload::Select(Selected::Clause(k)) = &n.payload else {
                    return Err(unsupported("DecG must select a clause"));
                };
                let i = *self
                    .clauses
                    .get(k)
                    .ok_or_else(|| unsupported(format!("unknown clause `{}`", k)))?;
                self.walk(child(n, 0)?, proj(&cx.seq, i), a, cx)
            }
            (rule, _) => Err(unsupported(format!("{} in a guarded position", rule))),
        }
    }

    /// A derivation of `cx ⊢ target` for a node concluding `⊢ G`.
    fn goal(&self, n: &ProofNode, target: &Formula, cx: &Cx) -> Result<INode, IfolError> {
        let s = &cx.seq;
        if let Formula::Later(inner) = target {
            return match (&n.rule, &**inner) {
                (Rule::Dec, _)
                    if n.payload == Payload::Select(Selected::Hyp(0)) && cx.hyp.is_some() =>
                {
                    self.walk(child(n, 0)?, proj(s, cx.hyp.unwrap()), target, cx)
                }
                (Rule::AndR, Formula::And(a, b)) => {
                    let pair = and_i(
                        self.goal(child(n, 0)?, &Formula::later((**a).clone()), cx)?,
                        self.goal(child(n, 1)?, &Formula::later((**b).clone()), cx)?,
                    );
                    Ok(derived(
                        IRule::AndLaterI,
                        s.with_goal(target.clone()),
                        IPayload::None,
                        pair,
                    ))
                }
                (Rule::TopR, Formula::Top) => Ok(next(top_i(s))),
                _ => Ok(next(self.goal(n, inner, cx)?)),
            };
        }
        match (&n.rule, target) {
            (Rule::TopR, Formula::Top) => Ok(top_i(s)),
            (Rule::AndR, Formula::And(a, b)) => Ok(and_i(
                self.goal(child(n, 0)?, a, cx)?,
                self.goal(child(n, 1)?, b, cx)?,
            )),
            (Rule::OrR1, Formula::Or(a, _)) => {
                Ok(or_i(false, target.clone(), self.goal(child(n, 0)?, a, cx)?))
            }
            (Rule::OrR2, Formula::Or(_, b)) => {
                Ok(or_i(true, target.clone(), self.goal(child(n, 0)?, b, cx)?))
            }
            (Rule::ImpR, Formula::Imp(d, g)) => {
                let (mut inner, i) = cx.assume((**d).clone());
                inner.ext.push(i);
                Ok(imp_i(self.goal(child(n, 0)?, g, &inner)?))
            }
            (Rule::AllR, Formula::Forall(hint, ty, body)) => {
                let Payload::Fresh(c) = &n.payload else {
                    return Err(unsupported("AllR without a variable"));
                };
                let mut inner = cx.clone();
                inner.seq.eigen.push((c.clone(), ty.clone()));
                let p = self.goal(
                    child(n, 0)?,
                    &body.instantiate(&Term::Const(c.clone())),
                    &inner,
                )?;
                Ok(all_i(hint.clone(), p))
            }
            (Rule::ExR, Formula::Exists(_, _, body)) => {
                let Payload::Witness(w) = &n.payload else {
                    return Err(unsupported("ExR without a witness"));
                };
                let p = self.goal(child(n, 0)?, &body.instantiate(w), cx)?;
                Ok(ex_i(target.clone(), w.clone(), p))
            }
            (Rule::Dec, a) if a.is_atom() => {
                let i = match &n.payload {
                    Payload::Select(Selected::Clause(k)) => *self
                        .clauses
                        .get(k)
                        .ok_or_else(|| unsupported(format!("unknown clause `{}`", k)))?,
                    Payload::Select(Selected::Hyp(0)) if cx.hyp.is_some() => {
                        return Err(unsupported(
                            "the coinduction hypothesis is used outside a guarded body",
                        ))
                    }
                    Payload::Select(Selected::Hyp(j)) => *cx
                        .hyps
                        .get(*j)
                        .ok_or_else(|| unsupported(format!("no hypothesis #{}", j)))?,
                    Payload::Select(Selected::Ext(j)) => *cx
                        .ext
                        .get(*j)
                        .ok_or_else(|| unsupported(format!("no extension clause #{}", j)))?,
                    _ => return Err(unsupported("Dec without a selection")),
                };
                self.walk(child(n, 0)?, proj(s, i), a, cx)
            }
            (rule, _) => Err(unsupported(format!(
                "{} does not match the target formula",
                rule
            ))),
        }
    }

    /// Follows a focused CUP branch, eliminating the connectives of the
    /// formula proven by `p` until it matches `target`.
    fn walk(&self, n: &ProofNode, p: INode, target: &Formula, cx: &Cx) -> Result<INode, IfolError> {
        let shape = || unsupported(format!("{} does not match the clause in focus", n.rule));
        let later = matches!(p.conclusion.goal, Formula::Later(_));
        let next_p = match n.rule {
            Rule::Init => return Ok(conv(target.clone(), p)),
            Rule::AllL => {
                let Payload::Witness(w) = &n.payload else {
                    return Err(shape());
                };
                if later {
                    lift(p, |h| all_e(h, w.clone()))
                } else {
                    all_e(p, w.clone())
                }
            }
            Rule::AndL1 | Rule::AndL2 => {
                let second = n.rule == Rule::AndL2;
                if later {
                    lift(p, |h| and_e(second, h))
                } else {
                    and_e(second, p)
                }
            }
            Rule::ImpL => {
                let g = child(n, 1)?;
                match &p.conclusion.goal {
                    Formula::Imp(x, _) => {
                        let arg = self.goal(g, x, cx)?;
                        imp_e(p, arg)
                    }
                    Formula::Later(f) => match &**f {
                        Formula::Imp(x, _) => {
                            let arg = self.goal(g, &Formula::later((**x).clone()), cx)?;
                            mon(p).and_then(|m| imp_e(m, arg))
                        }
                        _ => None,
                    },
                    _ => None,
                }
            }
            _ => None,
        };
        let next_p = next_p.ok_or_else(shape)?;
        self.walk(child(n, 0)?, next_p, target, cx)
    }
}
