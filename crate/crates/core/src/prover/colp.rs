//! Coinductive SLD resolution with ancestor loop detection and circular
//! unifiers, for comparison with CUP search.

use std::rc::Rc;

use crate::herbrand::minimal_form;
use crate::kernel::{Term, DEFAULT_FUEL};
use crate::logic::{normalize_to_horn, Formula, LogicError, Program};

use super::unify::{max_meta, MetaStore, Substitution, Unifier, UnifyMode};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColpAnswer {
    /// Bindings of the query variables, each in minimal rational form.
    Answer(Substitution),
    Fail,
}

/// Solves `query`, whose unknowns are `Meta(0..)`, by SLD resolution over
/// the Horn clauses of `program`. A subgoal that unifies (rationally) with
/// one of its ancestors succeeds. At most `bound` resolution steps are made
/// on any derivation.
pub fn colp_solve(
    program: &Program,
    query: &Formula,
    bound: usize,
) -> Result<ColpAnswer, LogicError> {
    let clauses = normalize_to_horn(
        &program
            .clauses
            .iter()
            .map(|c| c.formula.clone())
            .collect::<Vec<_>>(),
    )?;
    for c in &clauses {
        if !c.is_h(&program.sig) {
            return Err(LogicError::NotAFohcD);
        }
    }
    let Formula::Atom(..) = query else {
        return Err(LogicError::NotAnAtom);
    };
    let mut n = 0;
    query.for_each_term(&mut |t, _| n = n.max(max_meta(t)));
    let mut store = MetaStore::new();
    for _ in 0..n {
        store.fresh("x", crate::kernel::SimpleType::Base, 0);
    }
    let solver = Solver {
        program,
        clauses: clauses.iter().map(|c| c.to_formula()).collect(),
    };
    let st = Goals {
        store,
        goals: vec![(query.clone(), None)],
        steps: bound,
    };
    Ok(match solver.run(st) {
        Some(done) => {
            let sub = done.store.substitution(n);
            ColpAnswer::Answer(Substitution(
                sub.0
                    .into_iter()
                    .map(|(m, t)| (m, minimal_form(&t, DEFAULT_FUEL)))
                    .collect(),
            ))
        }
        None => ColpAnswer::Fail,
    })
}

/// The chain of ancestors of a subgoal.
struct Ancestors {
    atom: Formula,
    parent: Option<Rc<Ancestors>>,
}

#[derive(Clone)]
struct Goals {
    store: MetaStore,
    goals: Vec<(Formula, Option<Rc<Ancestors>>)>,
    steps: usize,
}

struct Solver<'a> {
    program: &'a Program,
    clauses: Vec<Formula>,
}

impl Solver<'_> {
    fn run(&self, mut st: Goals) -> Option<Goals> {
        let Some((goal, anc)) = st.goals.pop() else {
            return Some(st);
        };
        let goal = st.store.zonk_formula(&goal);
        let mut a = anc.clone();
        while let Some(node) = a {
            let mut s = st.clone();
            if self.unify(&mut s.store, &node.atom, &goal) {
                if let Some(r) = self.run(s) {
                    return Some(r);
                }
            }
            a = node.parent.clone();
        }
        if st.steps == 0 {
            return None;
        }
        let here = Some(Rc::new(Ancestors {
            atom: goal.clone(),
            parent: anc,
        }));
        for c in &self.clauses {
            let mut s = st.clone();
            s.steps -= 1;
            let mut d = c.clone();
            while let Formula::Forall(h, ty, body) = d {
                let m = s.store.fresh(h.as_str(), ty.clone(), 0);
                d = body.instantiate(&m);
            }
            let (body, head) = match d {
                Formula::Imp(b, h) => (conjuncts(&b), (*h).clone()),
                h => (Vec::new(), h),
            };
            if !self.unify(&mut s.store, &head, &goal) {
                continue;
            }
            for b in body.into_iter().rev() {
                s.goals.push((b, here.clone()));
            }
            if let Some(r) = self.run(s) {
                return Some(r);
            }
        }
        None
    }

    fn unify(&self, store: &mut MetaStore, a: &Formula, b: &Formula) -> bool {
        let mut u = Unifier::new(
            &self.program.sig,
            &[],
            UnifyMode::Rational,
            store,
            DEFAULT_FUEL,
        );
        u.atoms(a, b).is_ok()
    }
}

fn conjuncts(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::And(a, b) => {
            let mut v = conjuncts(a);
            v.extend(conjuncts(b));
            v
        }
        Formula::Top => Vec::new(),
        a => vec![a.clone()],
    }
}

/// Substitutes the answer into the query, grounding query variables left
/// unbound with `ground`.
pub fn instantiate_query(query: &Formula, answer: &Substitution, ground: &Term) -> Formula {
    query.map_terms(&mut |t, _| {
        t.map_metas(&mut |m| Some(answer.0.get(&m).cloned().unwrap_or_else(|| ground.clone())))
    })
}
