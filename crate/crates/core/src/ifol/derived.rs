//! Expansion of derived rules into primitive ones.

use crate::kernel::{Signature, Term};
use crate::logic::Formula;

use super::build::*;
use super::tree::{INode, IPayload, IRule, ISequent};
use super::IfolError;

fn not_derived(msg: &str) -> IfolError {
    IfolError::NotDerived(msg.to_string())
}

/// Replaces a derived-rule node by a primitive subtree with the same
/// conclusion whose open premises are the node's children. `Weak` is
/// expanded by re-deriving its premise in the larger context.
pub fn expand_derived(sig: &Signature, n: &INode) -> Result<INode, IfolError> {
    let s = &n.conclusion;
    let child = || {
        n.children
            .first()
            .cloned()
            .ok_or_else(|| not_derived("missing premise"))
    };
    let index = || match n.payload {
        IPayload::Index(i) if i < s.delta.len() => Ok(i),
        _ => Err(not_derived("expected an assumption index")),
    };
    let out = match n.rule {
        IRule::MonL => {
            let i = index()?;
            let m = mon(proj(s, i)).ok_or_else(|| not_derived("MonL needs ▷(φ → ψ)"))?;
            imp_e(imp_i(child()?), m).ok_or_else(|| not_derived("MonL"))?
        }
        IRule::LaterAndR => later_and_r(child()?)?,
        IRule::LaterAndL => {
            let i = index()?;
            let p = later_and_r(proj(s, i))?;
            imp_e(imp_i(child()?), p).ok_or_else(|| not_derived("LaterAndL"))?
        }
        IRule::LaterAllR => later_all_r(sig, child()?)?,
        IRule::LaterAllL => {
            let i = index()?;
            let p = later_all_r(sig, proj(s, i))?;
            imp_e(imp_i(child()?), p).ok_or_else(|| not_derived("LaterAllL"))?
        }
        IRule::AndLaterI => and_later_i(child()?)?,
        IRule::Weak => {
            let IPayload::Fresh(c) = &n.payload else {
                return Err(not_derived("Weak names the dropped variable"));
            };
            let pos = s
                .eigen
                .iter()
                .position(|(x, _)| x == c)
                .ok_or_else(|| not_derived("variable not in context"))?;
            add_var(&child()?, pos, &s.eigen[pos])?
        }
        IRule::AllLaterI => return Err(not_derived("∀x. ▷φ ⊢ ▷∀x. φ has no primitive derivation")),
        _ => return Err(not_derived("not a derived rule")),
    };
    if out.conclusion != *s {
        return Err(not_derived("expansion does not reach the conclusion"));
    }
    Ok(out)
}

/// Expands every derived-rule node, bottom-up.
pub fn expand_all(sig: &Signature, n: &INode) -> Result<INode, IfolError> {
    let children = n
        .children
        .iter()
        .map(|c| expand_all(sig, c))
        .collect::<Result<Vec<_>, _>>()?;
    let n = INode {
        children,
        ..n.clone()
    };
    if n.rule.is_derived() {
        let e = expand_derived(sig, &n)?;
        // Weak re-derives its premise, which is already primitive.
        Ok(e)
    } else {
        Ok(n)
    }
}

/// `Δ ⊢ ▷(φ ∧ ψ)` to `Δ ⊢ ▷φ ∧ ▷ψ`.
fn later_and_r(p: INode) -> Result<INode, IfolError> {
    let Formula::Later(inner) = &p.conclusion.goal else {
        return Err(not_derived("expected ▷(φ ∧ ψ)"));
    };
    if !matches!(&**inner, Formula::And(..)) {
        return Err(not_derived("expected ▷(φ ∧ ψ)"));
    }
    let cx = p.conclusion.assuming((**inner).clone(), Formula::Top);
    let part = |second: bool| -> Result<INode, IfolError> {
        let e = and_e(second, proj_last(&cx)).unwrap();
        let m = mon(next(imp_i(e))).unwrap();
        Ok(imp_e(m, p.clone()).unwrap())
    };
    Ok(and_i(part(false)?, part(true)?))
}

/// `Δ ⊢ ▷∀x. φ` to `Δ ⊢ ∀x. ▷φ`.
fn later_all_r(sig: &Signature, p: INode) -> Result<INode, IfolError> {
    let h = p.conclusion.goal.clone();
    let Formula::Later(inner) = &h else {
        return Err(not_derived("expected ▷∀x. φ"));
    };
    let Formula::Forall(hint, ty, _) = &**inner else {
        return Err(not_derived("expected ▷∀x. φ"));
    };
    let s = &p.conclusion;
    let c = fresh_name(&|n| {
        sig.consts.contains_key(n)
            || sig.preds.contains_key(n)
            || s.eigen.iter().any(|(x, _)| &**x == n)
    });
    let mut cx = s.assuming(h.clone(), Formula::Top);
    cx.eigen.push((c.clone(), ty.clone()));
    let inst = all_e(
        proj_last(&cx.assuming((**inner).clone(), Formula::Top)),
        Term::Const(c.clone()),
    )
    .unwrap();
    let m = mon(next(imp_i(inst))).unwrap();
    let body = imp_e(m, proj_last(&cx)).unwrap();
    let gen = all_i(hint.clone(), body);
    Ok(imp_e(imp_i(gen), p).unwrap())
}

/// `Δ ⊢ ▷φ ∧ ▷ψ` to `Δ ⊢ ▷(φ ∧ ψ)`.
fn and_later_i(p: INode) -> Result<INode, IfolError> {
    let Formula::And(a, b) = &p.conclusion.goal else {
        return Err(not_derived("expected ▷φ ∧ ▷ψ"));
    };
    let (Formula::Later(phi), Formula::Later(psi)) = (&**a, &**b) else {
        return Err(not_derived("expected ▷φ ∧ ▷ψ"));
    };
    let s = &p.conclusion;
    let cx1 = s.assuming((**phi).clone(), Formula::Top);
    let cx2 = cx1.assuming((**psi).clone(), Formula::Top);
    let pair = and_i(proj(&cx2, cx2.delta.len() - 2), proj_last(&cx2));
    let k = imp_i(imp_i(pair));
    let step = imp_e(mon(next(k)).unwrap(), and_e(false, p.clone()).unwrap()).unwrap();
    Ok(imp_e(mon(step).unwrap(), and_e(true, p).unwrap()).unwrap())
}

/// Re-derives `n` with `var` inserted into every context at `pos`.
fn add_var(
    n: &INode,
    pos: usize,
    var: &(crate::kernel::Sym, crate::kernel::SimpleType),
) -> Result<INode, IfolError> {
    let clash = match &n.payload {
        IPayload::Fresh(c) | IPayload::Open(_, c) => c == &var.0,
        _ => false,
    };
    if clash || n.rule == IRule::Weak {
        return Err(not_derived("cannot weaken: variable reintroduced below"));
    }
    let mut conclusion: ISequent = n.conclusion.clone();
    if pos > conclusion.eigen.len() {
        return Err(not_derived("context position out of range"));
    }
    conclusion.eigen.insert(pos, var.clone());
    let children = n
        .children
        .iter()
        .map(|c| add_var(c, pos, var))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(INode {
        rule: n.rule,
        conclusion,
        payload: n.payload.clone(),
        children,
    })
}
