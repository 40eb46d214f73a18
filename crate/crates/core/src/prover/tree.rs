use std::fmt;

use crate::kernel::{SimpleType, Sym, Term};
use crate::logic::{Clause, Formula, LogicId};

/// The right-hand side of a CUP sequent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Judgment {
    /// `⊢co φ`, concluded only by `Cofix`.
    Co(Formula),
    /// `⊢ ⟨φ⟩`, between `Cofix` and the discharging `DecG`.
    Guarded(Formula),
    /// `⊢ G`.
    Goal(Formula),
    /// `--D→ A`: focus on the definite clause `D` against the atom `A`.
    Focus(Formula, Formula),
}

/// `Σ, c̄; P, ext; Δ ⊢ J`. The base signature and program are fixed per
/// proof; `eigen` lists constants introduced by `∀R`/`∀Rg`, `ext` clauses
/// added by `→R`, and `delta` the coinduction hypotheses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub eigen: Vec<(Sym, SimpleType)>,
    pub ext: Vec<Formula>,
    pub delta: Vec<Formula>,
    pub judgment: Judgment,
}

impl Sequent {
    pub fn with_judgment(&self, judgment: Judgment) -> Sequent {
        Sequent {
            eigen: self.eigen.clone(),
            ext: self.ext.clone(),
            delta: self.delta.clone(),
            judgment,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Cofix,
    DecG,
    AllRg,
    AndRg,
    ImpRg,
    Dec,
    Init,
    TopR,
    ImpL,
    ImpR,
    AndL1,
    AndL2,
    AndR,
    AllL,
    AllR,
    ExR,
    OrR1,
    OrR2,
}

impl Rule {
    pub const ALL: [Rule; 18] = [
        Rule::Cofix,
        Rule::DecG,
        Rule::AllRg,
        Rule::AndRg,
        Rule::ImpRg,
        Rule::Dec,
        Rule::Init,
        Rule::TopR,
        Rule::ImpL,
        Rule::ImpR,
        Rule::AndL1,
        Rule::AndL2,
        Rule::AndR,
        Rule::AllL,
        Rule::AllR,
        Rule::ExR,
        Rule::OrR1,
        Rule::OrR2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Cofix => "Cofix",
            Rule::DecG => "DecG",
            Rule::AllRg => "AllRg",
            Rule::AndRg => "AndRg",
            Rule::ImpRg => "ImpRg",
            Rule::Dec => "Dec",
            Rule::Init => "Init",
            Rule::TopR => "TopR",
            Rule::ImpL => "ImpL",
            Rule::ImpR => "ImpR",
            Rule::AndL1 => "AndL1",
            Rule::AndL2 => "AndL2",
            Rule::AndR => "AndR",
            Rule::AllL => "AllL",
            Rule::AllR => "AllR",
            Rule::ExR => "ExR",
            Rule::OrR1 => "OrR1",
            Rule::OrR2 => "OrR2",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == s)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which assumption a decide rule selects.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Selected {
    /// A program clause (or an admitted lemma) by name.
    Clause(Sym),
    /// The `i`-th coinduction hypothesis in `Δ`.
    Hyp(usize),
    /// The `i`-th clause added by `→R`.
    Ext(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Payload {
    None,
    Select(Selected),
    Witness(Term),
    Fresh(Sym),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofNode {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub payload: Payload,
    pub children: Vec<ProofNode>,
}

impl ProofNode {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ProofNode::size).sum::<usize>()
    }

    /// Rules along the leftmost root-to-leaf path.
    pub fn main_branch(&self) -> Vec<Rule> {
        let mut out = vec![self.rule];
        let mut n = self;
        while let Some(c) = n.children.first() {
            out.push(c.rule);
            n = c;
        }
        out
    }

    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a ProofNode)) {
        f(self);
        for c in &self.children {
            c.visit(f);
        }
    }

    pub fn count(&self, rule: Rule) -> usize {
        let mut n = 0;
        self.visit(&mut |x| n += (x.rule == rule) as usize);
        n
    }
}

/// A complete CUP derivation with its header. `uses` lists lemmas admitted
/// as extra program clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupProof {
    pub name: Sym,
    pub logic: LogicId,
    pub uses: Vec<Clause>,
    pub root: ProofNode,
}

impl CupProof {
    /// The proven formula.
    pub fn goal(&self) -> &Formula {
        match &self.root.conclusion.judgment {
            Judgment::Co(f) | Judgment::Goal(f) | Judgment::Guarded(f) => f,
            Judgment::Focus(_, a) => a,
        }
    }
}
