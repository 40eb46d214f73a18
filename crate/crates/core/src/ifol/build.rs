//! Constructors that compute conclusions from premises.

use crate::kernel::{Hint, Sym, Term};
use crate::logic::Formula;

use super::tree::{INode, IPayload, IRule, ISequent};

fn node(rule: IRule, conclusion: ISequent, payload: IPayload, children: Vec<INode>) -> INode {
    INode::new(rule, conclusion, payload, children)
}

fn strip_last(s: &ISequent, goal: Formula) -> ISequent {
    let mut delta = s.delta.clone();
    delta.pop();
    ISequent {
        eigen: s.eigen.clone(),
        delta,
        goal,
    }
}

pub(crate) fn proj(cx: &ISequent, i: usize) -> INode {
    node(
        IRule::Proj,
        cx.with_goal(cx.delta[i].clone()),
        IPayload::Index(i),
        vec![],
    )
}

/// Projection of the last assumption.
pub(crate) fn proj_last(cx: &ISequent) -> INode {
    proj(cx, cx.delta.len() - 1)
}

pub(crate) fn top_i(cx: &ISequent) -> INode {
    node(
        IRule::TopI,
        cx.with_goal(Formula::Top),
        IPayload::None,
        vec![],
    )
}

pub(crate) fn conv(goal: Formula, child: INode) -> INode {
    if child.conclusion.goal == goal {
        return child;
    }
    node(
        IRule::Conv,
        child.conclusion.with_goal(goal),
        IPayload::None,
        vec![child],
    )
}

pub(crate) fn and_i(a: INode, b: INode) -> INode {
    let goal = Formula::and(a.conclusion.goal.clone(), b.conclusion.goal.clone());
    node(
        IRule::AndI,
        a.conclusion.with_goal(goal),
        IPayload::None,
        vec![a, b],
    )
}

pub(crate) fn and_e(second: bool, child: INode) -> Option<INode> {
    let Formula::And(l, r) = &child.conclusion.goal else {
        return None;
    };
    let (rule, goal) = if second {
        (IRule::AndE2, (**r).clone())
    } else {
        (IRule::AndE1, (**l).clone())
    };
    Some(node(
        rule,
        child.conclusion.with_goal(goal),
        IPayload::None,
        vec![child],
    ))
}

pub(crate) fn or_i(second: bool, goal: Formula, child: INode) -> INode {
    let rule = if second { IRule::OrI2 } else { IRule::OrI1 };
    node(
        rule,
        child.conclusion.with_goal(goal),
        IPayload::None,
        vec![child],
    )
}

/// `→I`, discharging the last assumption of the premise.
pub(crate) fn imp_i(child: INode) -> INode {
    let hyp = child
        .conclusion
        .delta
        .last()
        .expect("assumption to discharge")
        .clone();
    let goal = Formula::imp(hyp, child.conclusion.goal.clone());
    node(
        IRule::ImpI,
        strip_last(&child.conclusion, goal),
        IPayload::None,
        vec![child],
    )
}

pub(crate) fn imp_e(f: INode, a: INode) -> Option<INode> {
    let Formula::Imp(_, b) = &f.conclusion.goal else {
        return None;
    };
    let s = f.conclusion.with_goal((**b).clone());
    Some(node(IRule::ImpE, s, IPayload::None, vec![f, a]))
}

/// `∀I`, closing over the last variable of the premise's context.
pub(crate) fn all_i(hint: Hint, child: INode) -> INode {
    let mut s = child.conclusion.clone();
    let (c, ty) = s.eigen.pop().expect("variable to generalize");
    s.goal = Formula::Forall(hint, ty, child.conclusion.goal.abstract_const(&c, 0).into());
    node(IRule::AllI, s, IPayload::Fresh(c), vec![child])
}

pub(crate) fn all_e(child: INode, w: Term) -> Option<INode> {
    let Formula::Forall(_, _, body) = &child.conclusion.goal else {
        return None;
    };
    let s = child.conclusion.with_goal(body.instantiate(&w));
    Some(node(IRule::AllE, s, IPayload::Witness(w), vec![child]))
}

pub(crate) fn ex_i(goal: Formula, w: Term, child: INode) -> INode {
    node(
        IRule::ExI,
        child.conclusion.with_goal(goal),
        IPayload::Witness(w),
        vec![child],
    )
}

pub(crate) fn next(child: INode) -> INode {
    let goal = Formula::later(child.conclusion.goal.clone());
    node(
        IRule::Next,
        child.conclusion.with_goal(goal),
        IPayload::None,
        vec![child],
    )
}

pub(crate) fn mon(child: INode) -> Option<INode> {
    let Formula::Later(inner) = &child.conclusion.goal else {
        return None;
    };
    let Formula::Imp(a, b) = &**inner else {
        return None;
    };
    let goal = Formula::imp(Formula::later((**a).clone()), Formula::later((**b).clone()));
    Some(node(
        IRule::Mon,
        child.conclusion.with_goal(goal),
        IPayload::None,
        vec![child],
    ))
}

/// `FP`, discharging the last assumption `▷φ` of the premise.
pub(crate) fn fp(child: INode) -> INode {
    let s = strip_last(&child.conclusion, child.conclusion.goal.clone());
    node(IRule::Fp, s, IPayload::None, vec![child])
}

pub(crate) fn derived(rule: IRule, conclusion: ISequent, payload: IPayload, child: INode) -> INode {
    node(rule, conclusion, payload, vec![child])
}

/// Picks `c`, `c1`, `c2`, … avoiding `taken`.
pub(crate) fn fresh_name(taken: &dyn Fn(&str) -> bool) -> Sym {
    let mut k = 0;
    loop {
        let n = if k == 0 {
            "c".to_string()
        } else {
            format!("c{}", k)
        };
        if !taken(&n) {
            return Sym::from(n.as_str());
        }
        k += 1;
    }
}
