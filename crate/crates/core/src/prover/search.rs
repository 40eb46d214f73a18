//! Goal-directed CUP proof search with iterative deepening on the number of
//! decide steps.

use std::cell::Cell;
use std::collections::BTreeSet;
use std::rc::Rc;

use crate::kernel::{Hint, SimpleType, Sym, Term, DEFAULT_FUEL};
use crate::logic::{
    is_coinduction_goal, is_d_formula, is_g_formula, Clause, Formula, LogicId, Program,
};

use super::tree::{CupProof, Judgment, Payload, ProofNode, Rule, Selected, Sequent};
use super::unify::{MetaStore, Unifier, UnifyMode};
use super::SearchError;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub logic: LogicId,
    /// Largest number of `Dec`/`DecG` steps tried by iterative deepening.
    pub max_depth: usize,
    pub fuel: usize,
    pub mode: UnifyMode,
    /// Proven coinduction goals admitted as extra program clauses.
    pub lemmas: Vec<Clause>,
    /// Upper bound on expanded sequents per deepening round.
    pub max_steps: usize,
}

impl SearchConfig {
    /// Defaults: depth 64, modulo-whnf unification in logics with fixed
    /// points and syntactic unification otherwise.
    pub fn new(logic: LogicId) -> SearchConfig {
        SearchConfig {
            logic,
            max_depth: 64,
            fuel: DEFAULT_FUEL,
            mode: if logic.fix {
                UnifyMode::ModuloWhnf
            } else {
                UnifyMode::Syntactic
            },
            lemmas: Vec::new(),
            max_steps: 200_000,
        }
    }

    pub fn with_depth(mut self, d: usize) -> SearchConfig {
        self.max_depth = d;
        self
    }

    pub fn with_lemmas(mut self, lemmas: Vec<Clause>) -> SearchConfig {
        self.lemmas = lemmas;
        self
    }
}

/// Searches for a CUP proof of the coinduction goal `goal`, rooted at
/// `Cofix`.
pub fn search(
    program: &Program,
    goal: &Formula,
    cfg: &SearchConfig,
) -> Result<CupProof, SearchError> {
    let p = program.extended(&cfg.lemmas);
    if cfg.max_depth == 0 {
        return Err(SearchError::IllFormedGoal(
            "depth bound must be at least 1".into(),
        ));
    }
    check_program(&p, cfg.logic)?;
    if !goal.is_closed() || !is_coinduction_goal(&p.sig, cfg.logic, goal) {
        return Err(SearchError::IllFormedGoal(format!(
            "not a coinduction goal of {}",
            cfg.logic
        )));
    }
    check_guarded_hyps(&p, cfg.logic, goal, &mut Vec::new())?;
    run_deepening(&p, cfg, Judgment::Co(goal.clone()))
}

/// Searches for a uniform proof of a goal formula without a `Cofix` root.
pub fn search_goal(
    program: &Program,
    goal: &Formula,
    cfg: &SearchConfig,
) -> Result<CupProof, SearchError> {
    let p = program.extended(&cfg.lemmas);
    check_program(&p, cfg.logic)?;
    if !goal.is_closed() || !is_g_formula(&p.sig, &mut Vec::new(), cfg.logic, goal) {
        return Err(SearchError::IllFormedGoal(format!(
            "not a goal of {}",
            cfg.logic
        )));
    }
    run_deepening(&p, cfg, Judgment::Goal(goal.clone()))
}

/// Proves `lemma` from the program, then `target` from the program extended
/// by the lemma. Targets that are coinduction goals get a `Cofix` root.
pub fn prove_with_lemma(
    program: &Program,
    lemma_name: &str,
    lemma: &Formula,
    target: &Formula,
    cfg: &SearchConfig,
) -> Result<(CupProof, CupProof), SearchError> {
    let first = search(program, lemma, cfg).map_err(|e| SearchError::Lemma(Box::new(e)))?;
    let mut cfg2 = cfg.clone();
    cfg2.lemmas.push(Clause {
        name: Sym::from(lemma_name),
        formula: lemma.clone(),
    });
    let sig = &program.sig;
    let second = if is_coinduction_goal(sig, cfg.logic, target) {
        search(program, target, &cfg2)
    } else {
        search_goal(program, target, &cfg2)
    };
    Ok((first, second?))
}

fn check_program(p: &Program, logic: LogicId) -> Result<(), SearchError> {
    for c in &p.clauses {
        if !is_d_formula(&p.sig, &mut Vec::new(), logic, &c.formula) {
            return Err(SearchError::IllFormedGoal(format!(
                "clause `{}` is not a D-formula of {}",
                c.name, logic
            )));
        }
    }
    Ok(())
}

/// Every hypothesis that `→Rg` would add must be a D-formula.
fn check_guarded_hyps(
    p: &Program,
    logic: LogicId,
    f: &Formula,
    ctx: &mut Vec<SimpleType>,
) -> Result<(), SearchError> {
    match f {
        Formula::Forall(_, ty, b) => {
            ctx.push(ty.clone());
            let r = check_guarded_hyps(p, logic, b, ctx);
            ctx.pop();
            r
        }
        Formula::And(a, b) => {
            check_guarded_hyps(p, logic, a, ctx)?;
            check_guarded_hyps(p, logic, b, ctx)
        }
        Formula::Imp(a, b) => {
            if !is_d_formula(&p.sig, &mut ctx.clone(), logic, a) {
                return Err(SearchError::IllFormedGoal(
                    "hypothesis of a guarded implication is not a D-formula".into(),
                ));
            }
            check_guarded_hyps(p, logic, b, ctx)
        }
        _ => Ok(()),
    }
}

fn run_deepening(p: &Program, cfg: &SearchConfig, root: Judgment) -> Result<CupProof, SearchError> {
    let uses = cfg.lemmas.clone();
    for depth in 1..=cfg.max_depth {
        let engine = Engine {
            p,
            cfg,
            hit_bound: Cell::new(false),
            steps: Cell::new(0),
            over_steps: Cell::new(false),
        };
        let st = State {
            store: MetaStore::new(),
            nodes: vec![None],
            agenda: vec![(
                0,
                Sequent {
                    eigen: vec![],
                    ext: vec![],
                    delta: vec![],
                    judgment: root.clone(),
                },
            )],
            budget: depth,
            fresh: 0,
        };
        if let Some(done) = engine.run(st) {
            let root = engine.finish(done)?;
            return Ok(CupProof {
                name: Sym::from("goal"),
                logic: cfg.logic,
                uses,
                root,
            });
        }
        if !engine.hit_bound.get() || engine.over_steps.get() {
            return Err(SearchError::Exhausted(depth));
        }
    }
    Err(SearchError::Exhausted(cfg.max_depth))
}

#[derive(Debug)]
struct Slot {
    rule: Rule,
    seq: Sequent,
    payload: Payload,
    children: Vec<usize>,
}

#[derive(Clone)]
struct State {
    store: MetaStore,
    nodes: Vec<Option<Rc<Slot>>>,
    agenda: Vec<(usize, Sequent)>,
    budget: usize,
    fresh: usize,
}

impl State {
    fn fill(
        &mut self,
        id: usize,
        rule: Rule,
        seq: Sequent,
        payload: Payload,
        premises: Vec<Sequent>,
    ) {
        let base = self.nodes.len();
        let children: Vec<usize> = (base..base + premises.len()).collect();
        self.nodes.extend(premises.iter().map(|_| None));
        for (k, s) in premises.into_iter().enumerate().rev() {
            self.agenda.push((base + k, s));
        }
        self.nodes[id] = Some(Rc::new(Slot {
            rule,
            seq,
            payload,
            children,
        }));
    }
}

enum Alt {
    DecG(Sym, Formula),
    Dec(Selected, Formula),
    AndL(bool),
    OrR(bool),
}

struct Engine<'a> {
    p: &'a Program,
    cfg: &'a SearchConfig,
    hit_bound: Cell<bool>,
    steps: Cell<usize>,
    over_steps: Cell<bool>,
}

impl Engine<'_> {
    fn run(&self, mut st: State) -> Option<State> {
        while let Some((id, seq)) = st.agenda.pop() {
            self.steps.set(self.steps.get() + 1);
            if self.steps.get() > self.cfg.max_steps {
                self.over_steps.set(true);
                return None;
            }
            let seq = zonk_sequent(&st.store, &seq);
            let alts = match self.expand(&mut st, id, &seq) {
                Ok(()) => continue,
                Err(None) => return None,
                Err(Some(alts)) => alts,
            };
            for alt in alts {
                let mut s = st.clone();
                if self.apply(&mut s, id, &seq, alt) {
                    if let Some(r) = self.run(s) {
                        return Some(r);
                    }
                }
            }
            return None;
        }
        Some(st)
    }

    /// Applies the deterministic rule for `seq`, or returns the
    /// alternatives to branch over (`Err(None)` when none apply).
    fn expand(&self, st: &mut State, id: usize, seq: &Sequent) -> Result<(), Option<Vec<Alt>>> {
        let with = |j: Judgment| seq.with_judgment(j);
        match &seq.judgment {
            Judgment::Co(phi) => {
                let mut s = with(Judgment::Guarded(phi.clone()));
                s.delta.push(phi.clone());
                st.fill(id, Rule::Cofix, seq.clone(), Payload::None, vec![s]);
                Ok(())
            }
            Judgment::Guarded(Formula::Forall(_, ty, body))
            | Judgment::Goal(Formula::Forall(_, ty, body)) => {
                let c = self.fresh_name(st, seq);
                let guarded = matches!(seq.judgment, Judgment::Guarded(_));
                let inst = body.instantiate(&Term::Const(c.clone()));
                let mut s = with(if guarded {
                    Judgment::Guarded(inst)
                } else {
                    Judgment::Goal(inst)
                });
                s.eigen.push((c.clone(), ty.clone()));
                let rule = if guarded { Rule::AllRg } else { Rule::AllR };
                st.fill(id, rule, seq.clone(), Payload::Fresh(c), vec![s]);
                Ok(())
            }
            Judgment::Guarded(Formula::And(a, b)) => {
                let ps = vec![
                    with(Judgment::Guarded((**a).clone())),
                    with(Judgment::Guarded((**b).clone())),
                ];
                st.fill(id, Rule::AndRg, seq.clone(), Payload::None, ps);
                Ok(())
            }
            Judgment::Guarded(Formula::Imp(a, b)) => {
                let mut s = with(Judgment::Guarded((**b).clone()));
                s.delta.push((**a).clone());
                st.fill(id, Rule::ImpRg, seq.clone(), Payload::None, vec![s]);
                Ok(())
            }
            Judgment::Guarded(Formula::Atom(pred, _)) => {
                let alts: Vec<Alt> = self
                    .p
                    .clauses
                    .iter()
                    .filter(|c| heads(&c.formula).contains(pred))
                    .map(|c| Alt::DecG(c.name.clone(), c.formula.clone()))
                    .collect();
                Err(Some(alts))
            }
            Judgment::Guarded(_) => Err(None),
            Judgment::Goal(Formula::Top) => {
                st.fill(id, Rule::TopR, seq.clone(), Payload::None, vec![]);
                Ok(())
            }
            Judgment::Goal(Formula::And(a, b)) => {
                let ps = vec![
                    with(Judgment::Goal((**a).clone())),
                    with(Judgment::Goal((**b).clone())),
                ];
                st.fill(id, Rule::AndR, seq.clone(), Payload::None, ps);
                Ok(())
            }
            Judgment::Goal(Formula::Imp(d, g)) => {
                let mut s = with(Judgment::Goal((**g).clone()));
                s.ext.push((**d).clone());
                st.fill(id, Rule::ImpR, seq.clone(), Payload::None, vec![s]);
                Ok(())
            }
            Judgment::Goal(Formula::Or(..)) => Err(Some(vec![Alt::OrR(false), Alt::OrR(true)])),
            Judgment::Goal(Formula::Exists(h, ty, g)) => {
                let m = st.store.fresh(h.as_str(), ty.clone(), seq.eigen.len());
                let s = with(Judgment::Goal(g.instantiate(&m)));
                st.fill(id, Rule::ExR, seq.clone(), Payload::Witness(m), vec![s]);
                Ok(())
            }
            Judgment::Goal(Formula::Atom(pred, _)) => {
                let mut alts = Vec::new();
                for (i, d) in seq.delta.iter().enumerate() {
                    if heads(d).contains(pred) {
                        alts.push(Alt::Dec(Selected::Hyp(i), d.clone()));
                    }
                }
                for c in &self.p.clauses {
                    if heads(&c.formula).contains(pred) {
                        alts.push(Alt::Dec(
                            Selected::Clause(c.name.clone()),
                            c.formula.clone(),
                        ));
                    }
                }
                for (i, d) in seq.ext.iter().enumerate() {
                    if heads(d).contains(pred) {
                        alts.push(Alt::Dec(Selected::Ext(i), d.clone()));
                    }
                }
                Err(Some(alts))
            }
            Judgment::Goal(_) => Err(None),
            Judgment::Focus(d, a) => match d {
                Formula::Atom(..) => {
                    let sig = self.p.sig.with(&seq.eigen);
                    let mut u = Unifier::new(
                        &sig,
                        &seq.eigen,
                        self.cfg.mode,
                        &mut st.store,
                        self.cfg.fuel,
                    );
                    if u.atoms(d, a).is_err() {
                        return Err(None);
                    }
                    st.fill(id, Rule::Init, seq.clone(), Payload::None, vec![]);
                    Ok(())
                }
                Formula::Imp(g, d2) => {
                    let ps = vec![
                        with(Judgment::Focus((**d2).clone(), a.clone())),
                        with(Judgment::Goal((**g).clone())),
                    ];
                    st.fill(id, Rule::ImpL, seq.clone(), Payload::None, ps);
                    Ok(())
                }
                Formula::And(d1, d2) => {
                    let Formula::Atom(pred, _) = a else {
                        return Err(None);
                    };
                    let mut alts = Vec::new();
                    if heads(d1).contains(pred) {
                        alts.push(Alt::AndL(false));
                    }
                    if heads(d2).contains(pred) {
                        alts.push(Alt::AndL(true));
                    }
                    Err(Some(alts))
                }
                Formula::Forall(h, ty, body) => {
                    let m = st.store.fresh(h.as_str(), ty.clone(), seq.eigen.len());
                    let s = with(Judgment::Focus(body.instantiate(&m), a.clone()));
                    st.fill(id, Rule::AllL, seq.clone(), Payload::Witness(m), vec![s]);
                    Ok(())
                }
                _ => Err(None),
            },
        }
    }

    fn apply(&self, st: &mut State, id: usize, seq: &Sequent, alt: Alt) -> bool {
        let with = |j: Judgment| seq.with_judgment(j);
        match alt {
            Alt::DecG(name, d) => {
                if !self.spend(st) {
                    return false;
                }
                let Judgment::Guarded(a) = &seq.judgment else {
                    return false;
                };
                let s = with(Judgment::Focus(d, a.clone()));
                st.fill(
                    id,
                    Rule::DecG,
                    seq.clone(),
                    Payload::Select(Selected::Clause(name)),
                    vec![s],
                );
                true
            }
            Alt::Dec(sel, d) => {
                if !self.spend(st) {
                    return false;
                }
                let Judgment::Goal(a) = &seq.judgment else {
                    return false;
                };
                let s = with(Judgment::Focus(d, a.clone()));
                st.fill(id, Rule::Dec, seq.clone(), Payload::Select(sel), vec![s]);
                true
            }
            Alt::AndL(second) => {
                let Judgment::Focus(Formula::And(d1, d2), a) = &seq.judgment else {
                    return false;
                };
                let (rule, d) = if second {
                    (Rule::AndL2, d2)
                } else {
                    (Rule::AndL1, d1)
                };
                let s = with(Judgment::Focus((**d).clone(), a.clone()));
                st.fill(id, rule, seq.clone(), Payload::None, vec![s]);
                true
            }
            Alt::OrR(second) => {
                let Judgment::Goal(Formula::Or(g1, g2)) = &seq.judgment else {
                    return false;
                };
                let (rule, g) = if second {
                    (Rule::OrR2, g2)
                } else {
                    (Rule::OrR1, g1)
                };
                st.fill(
                    id,
                    rule,
                    seq.clone(),
                    Payload::None,
                    vec![with(Judgment::Goal((**g).clone()))],
                );
                true
            }
        }
    }

    fn spend(&self, st: &mut State) -> bool {
        if st.budget == 0 {
            self.hit_bound.set(true);
            return false;
        }
        st.budget -= 1;
        true
    }

    fn fresh_name(&self, st: &mut State, seq: &Sequent) -> Sym {
        loop {
            let name = if st.fresh == 0 {
                "c".to_string()
            } else {
                format!("c{}", st.fresh)
            };
            st.fresh += 1;
            let taken = self.p.sig.consts.contains_key(name.as_str())
                || self.p.sig.preds.contains_key(name.as_str())
                || seq.eigen.iter().any(|(c, _)| &**c == name);
            if !taken {
                return Sym::from(name.as_str());
            }
        }
    }

    /// Grounds metas left unconstrained and materializes the proof tree.
    fn finish(&self, mut st: State) -> Result<ProofNode, SearchError> {
        for m in 0..st.store.len() {
            if st.store.binding(m).is_some() {
                continue;
            }
            let ty = st.store.ty(m).clone();
            let t = inhabitant(&self.p.sig, &ty).ok_or_else(|| {
                SearchError::IllFormedGoal(format!("no closed guarded term of type {}", ty))
            })?;
            st.store.bind(m, t);
        }
        Ok(build(&st, 0))
    }
}

fn build(st: &State, id: usize) -> ProofNode {
    let slot = st.nodes[id].as_ref().expect("complete proof");
    let payload = match &slot.payload {
        Payload::Witness(t) => Payload::Witness(st.store.zonk(t)),
        p => p.clone(),
    };
    ProofNode {
        rule: slot.rule,
        conclusion: zonk_sequent(&st.store, &slot.seq),
        payload,
        children: slot.children.iter().map(|&c| build(st, c)).collect(),
    }
}

fn zonk_sequent(store: &MetaStore, s: &Sequent) -> Sequent {
    let z = |f: &Formula| store.zonk_formula(f);
    Sequent {
        eigen: s.eigen.clone(),
        ext: s.ext.iter().map(z).collect(),
        delta: s.delta.iter().map(z).collect(),
        judgment: match &s.judgment {
            Judgment::Co(f) => Judgment::Co(z(f)),
            Judgment::Guarded(f) => Judgment::Guarded(z(f)),
            Judgment::Goal(f) => Judgment::Goal(z(f)),
            Judgment::Focus(d, a) => Judgment::Focus(z(d), z(a)),
        },
    }
}

/// Predicates that focusing on `d` can reach.
pub fn heads(d: &Formula) -> BTreeSet<Sym> {
    let mut out = BTreeSet::new();
    fn go(d: &Formula, out: &mut BTreeSet<Sym>) {
        match d {
            Formula::Atom(p, _) => {
                out.insert(p.clone());
            }
            Formula::Imp(_, b) | Formula::Forall(_, _, b) => go(b, out),
            Formula::And(a, b) => {
                go(a, out);
                go(b, out);
            }
            _ => {}
        }
    }
    go(d, &mut out);
    out
}

/// A closed guarded base term of type `ty` over the signature: a constant
/// of that type, or a fixed point looping through some constant.
pub fn inhabitant(sig: &crate::kernel::Signature, ty: &SimpleType) -> Option<Term> {
    if let Some((c, _)) = sig.consts.iter().find(|(_, t)| *t == ty) {
        return Some(Term::Const(c.clone()));
    }
    let n = ty.arity()?;
    let nullary = sig
        .consts
        .iter()
        .find(|(_, t)| t.is_base())
        .map(|(c, _)| Term::Const(c.clone()));
    let (f, fty) = sig.consts.iter().find(|(_, t)| {
        let (ps, cod) = t.uncurry();
        cod.is_base() && ps.iter().all(SimpleType::is_base)
    })?;
    let k = fty.uncurry().0.len();
    let arg = nullary.unwrap_or(Term::Var(0));
    let mut body = Term::apps(Term::Const(f.clone()), (0..k).map(|_| arg.clone()));
    for _ in 0..n {
        body = Term::Lam(Hint::new("y"), SimpleType::Base, body.into());
    }
    let t = Term::Fix(Hint::new("x"), ty.clone(), body.into());
    crate::kernel::guard::guarded_base_type(sig, &mut Vec::new(), &t).map(|_| t)
}
