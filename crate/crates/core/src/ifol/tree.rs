use std::fmt;

use crate::kernel::{SimpleType, Sym, Term};
use crate::logic::Formula;

/// `Γ | Δ ⊢ φ`. `eigen` is the variable context Γ, kept as named constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ISequent {
    pub eigen: Vec<(Sym, SimpleType)>,
    pub delta: Vec<Formula>,
    pub goal: Formula,
}

impl ISequent {
    pub fn with_goal(&self, goal: Formula) -> ISequent {
        ISequent {
            eigen: self.eigen.clone(),
            delta: self.delta.clone(),
            goal,
        }
    }

    /// The same sequent with `extra` appended to the assumptions.
    pub fn assuming(&self, extra: Formula, goal: Formula) -> ISequent {
        let mut delta = self.delta.clone();
        delta.push(extra);
        ISequent {
            eigen: self.eigen.clone(),
            delta,
            goal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IRule {
    Proj,
    Conv,
    TopI,
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    ImpI,
    ImpE,
    AllI,
    AllE,
    ExI,
    ExE,
    Next,
    Mon,
    Fp,
    /// Admissible: drop an unused variable from Γ.
    Weak,
    /// From `Δ, ▷φ₁ → ▷φ₂ ⊢ ψ` with `▷(φ₁ → φ₂) ∈ Δ`.
    MonL,
    /// From `Δ ⊢ ▷(φ ∧ ψ)` infer `Δ ⊢ ▷φ ∧ ▷ψ`.
    LaterAndR,
    /// From `Δ, ▷φ₁ ∧ ▷φ₂ ⊢ ψ` with `▷(φ₁ ∧ φ₂) ∈ Δ`.
    LaterAndL,
    /// From `Δ ⊢ ▷∀x. φ` infer `Δ ⊢ ∀x. ▷φ`.
    LaterAllR,
    /// From `Δ, ∀x. ▷φ ⊢ ψ` with `▷∀x. φ ∈ Δ`.
    LaterAllL,
    /// From `Δ ⊢ ▷φ ∧ ▷ψ` infer `Δ ⊢ ▷(φ ∧ ψ)`.
    AndLaterI,
    /// From `Δ ⊢ ∀x. ▷φ` infer `Δ ⊢ ▷∀x. φ`. Has no expansion into
    /// primitive rules and is always rejected by the checker.
    AllLaterI,
    /// Placeholder for a premise while checking a derived-rule expansion.
    #[doc(hidden)]
    Hole,
}

impl IRule {
    pub const ALL: [IRule; 26] = [
        IRule::Proj,
        IRule::Conv,
        IRule::TopI,
        IRule::AndI,
        IRule::AndE1,
        IRule::AndE2,
        IRule::OrI1,
        IRule::OrI2,
        IRule::OrE,
        IRule::ImpI,
        IRule::ImpE,
        IRule::AllI,
        IRule::AllE,
        IRule::ExI,
        IRule::ExE,
        IRule::Next,
        IRule::Mon,
        IRule::Fp,
        IRule::Weak,
        IRule::MonL,
        IRule::LaterAndR,
        IRule::LaterAndL,
        IRule::LaterAllR,
        IRule::LaterAllL,
        IRule::AndLaterI,
        IRule::AllLaterI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IRule::Proj => "Proj",
            IRule::Conv => "Conv",
            IRule::TopI => "TopI",
            IRule::AndI => "AndI",
            IRule::AndE1 => "AndE1",
            IRule::AndE2 => "AndE2",
            IRule::OrI1 => "OrI1",
            IRule::OrI2 => "OrI2",
            IRule::OrE => "OrE",
            IRule::ImpI => "ImpI",
            IRule::ImpE => "ImpE",
            IRule::AllI => "AllI",
            IRule::AllE => "AllE",
            IRule::ExI => "ExI",
            IRule::ExE => "ExE",
            IRule::Next => "Next",
            IRule::Mon => "Mon",
            IRule::Fp => "FP",
            IRule::Weak => "Weak",
            IRule::MonL => "MonL",
            IRule::LaterAndR => "LaterAndR",
            IRule::LaterAndL => "LaterAndL",
            IRule::LaterAllR => "LaterAllR",
            IRule::LaterAllL => "LaterAllL",
            IRule::AndLaterI => "AndLaterI",
            IRule::AllLaterI => "AllLaterI",
            IRule::Hole => "Hole",
        }
    }

    pub fn from_name(s: &str) -> Option<IRule> {
        IRule::ALL.into_iter().find(|r| r.name() == s)
    }

    pub fn is_derived(self) -> bool {
        matches!(
            self,
            IRule::Weak
                | IRule::MonL
                | IRule::LaterAndR
                | IRule::LaterAndL
                | IRule::LaterAllR
                | IRule::LaterAllL
                | IRule::AndLaterI
                | IRule::AllLaterI
        )
    }
}

impl fmt::Display for IRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IPayload {
    None,
    /// An assumption index into Δ.
    Index(usize),
    Witness(Term),
    Fresh(Sym),
    /// `∃E`: the eliminated assumption and the fresh variable.
    Open(usize, Sym),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct INode {
    pub rule: IRule,
    pub conclusion: ISequent,
    pub payload: IPayload,
    pub children: Vec<INode>,
}

impl INode {
    pub fn new(
        rule: IRule,
        conclusion: ISequent,
        payload: IPayload,
        children: Vec<INode>,
    ) -> INode {
        INode {
            rule,
            conclusion,
            payload,
            children,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(INode::size).sum::<usize>()
    }

    pub fn main_branch(&self) -> Vec<IRule> {
        let mut out = vec![self.rule];
        let mut n = self;
        while let Some(c) = n.children.first() {
            out.push(c.rule);
            n = c;
        }
        out
    }

    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a INode)) {
        f(self);
        for c in &self.children {
            c.visit(f);
        }
    }

    pub fn count(&self, rule: IRule) -> usize {
        let mut n = 0;
        self.visit(&mut |x| n += (x.rule == rule) as usize);
        n
    }

    /// Whether `pred` holds at every node.
    pub fn visit_all(&self, pred: impl Fn(&INode) -> bool) -> bool {
        let mut ok = true;
        self.visit(&mut |x| ok &= pred(x));
        ok
    }
}

/// An iFOL▷ derivation with a name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IfolProof {
    pub name: Sym,
    pub root: INode,
}
