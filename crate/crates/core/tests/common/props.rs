//! Single-case bodies of the property suites, shared by the proptest
//! targets and the acceptance run. Each returns a description of the first
//! violated property.

use std::collections::BTreeMap;

use rand::Rng;

use cup::herbrand::{interpret_guarded, phi_step, Interpretation, KleisliSubst};
use cup::ifol::{check_ifol_proof, guarded_context, translate};
use cup::kernel::guard::head_normal_form;
use cup::kernel::reduce::step_head;
use cup::kernel::{
    infer_type, is_first_order_guarded, Context, Head, SimpleType, Term, DEFAULT_FUEL,
};
use cup::logic::LogicId;
use cup::prover::{check_proof, search, search_goal, CupProof, SearchConfig, SearchError};

use super::gen::{self, TermShape};

const TERM_DEPTH: usize = 4;

fn ctx(n: usize) -> Context {
    Context::from_entries(
        (0..n)
            .map(|i| (format!("z{}", i).into(), SimpleType::Base))
            .collect(),
    )
}

/// Every head reduction step from a typed term preserves its type.
pub fn subject_reduction(seed: u64) -> Result<(), String> {
    let sig = gen::stream_sig();
    let mut r = gen::rng(seed);
    let shape = TermShape {
        redexes: true,
        leaves: false,
    };
    let t = gen::base_term(&mut r, TERM_DEPTH, &mut vec![SimpleType::Base], shape);
    let g = ctx(1);
    let ty = infer_type(&sig, &g, &t).map_err(|e| format!("generated term ill-typed: {}", e))?;
    let mut cur = t;
    for _ in 0..DEFAULT_FUEL {
        let Some(next) = step_head(&cur) else {
            return Ok(());
        };
        match infer_type(&sig, &g, &next) {
            Ok(t2) if t2 == ty => cur = next,
            other => {
                return Err(format!(
                    "{:?} reduced to {:?} with type {:?}",
                    cur, next, other
                ))
            }
        }
    }
    Err("no weak head normal form within fuel".into())
}

/// Substituting a closed guarded term into a guarded term with a free
/// base variable keeps it guarded.
pub fn guarded_substitution(seed: u64) -> Result<(), String> {
    let sig = gen::stream_sig();
    let mut r = gen::rng(seed);
    let shape = TermShape {
        redexes: r.gen_bool(0.5),
        leaves: true,
    };
    let t = gen::base_term(&mut r, TERM_DEPTH, &mut vec![SimpleType::Base], shape);
    let u = gen::base_term(&mut r, TERM_DEPTH, &mut Vec::new(), shape);
    if !is_first_order_guarded(&sig, &ctx(1), &t) || !is_first_order_guarded(&sig, &ctx(0), &u) {
        return Err("generator produced an unguarded term".into());
    }
    let s = t.instantiate(&u);
    if is_first_order_guarded(&sig, &ctx(0), &s) {
        Ok(())
    } else {
        Err(format!("{:?}[{:?}] is not guarded", t, u))
    }
}

/// Guarded first-order terms have a head normal form headed by a
/// constructor applied to all its arguments or by a context variable.
pub fn hnf_totality(seed: u64) -> Result<(), String> {
    let sig = gen::stream_sig();
    let mut r = gen::rng(seed);
    let shape = TermShape {
        redexes: true,
        leaves: true,
    };
    let t = gen::base_term(
        &mut r,
        TERM_DEPTH,
        &mut vec![SimpleType::Base, SimpleType::Base],
        shape,
    );
    if !is_first_order_guarded(&sig, &ctx(2), &t) {
        return Err("generator produced an unguarded term".into());
    }
    let (head, args) = head_normal_form(&t, DEFAULT_FUEL).map_err(|e| format!("{:?}: {}", t, e))?;
    let ok = match &head {
        Head::Const(c) => sig.arity(c) == Some(args.len()),
        Head::Var(i) => *i < 2 && args.is_empty(),
    };
    if ok {
        Ok(())
    } else {
        Err(format!(
            "{:?} has head {:?} with {} arguments",
            t,
            head,
            args.len()
        ))
    }
}

const OBSERVE_DEPTH: usize = 6;

/// `(tθ)δ = t(θ⊙δ)`, both agreeing with syntactic substitution, observed
/// to depth six.
pub fn kleisli_law(seed: u64) -> Result<(), String> {
    let sig = gen::stream_sig();
    let mut r = gen::rng(seed);
    let t = gen::base_term(
        &mut r,
        TERM_DEPTH,
        &mut Vec::new(),
        TermShape {
            redexes: true,
            leaves: true,
        },
    );
    // Images stay redex-free so that syntactic replacement inside `fix`
    // bodies keeps the oracle term guarded.
    let shape = TermShape {
        redexes: false,
        leaves: true,
    };
    let term = |r: &mut rand::rngs::StdRng| gen::base_term(r, TERM_DEPTH, &mut Vec::new(), shape);
    let mut theta_t = BTreeMap::new();
    let mut delta_t = BTreeMap::new();
    for v in ["v0", "v1"] {
        if r.gen_bool(0.7) {
            theta_t.insert(v.to_string(), term(&mut r));
        }
        delta_t.insert(v.to_string(), term(&mut r));
    }
    let interp = |m: &Term| interpret_guarded(&sig, m).map_err(|e| e.to_string());
    let subst = |m: &BTreeMap<String, Term>| -> Result<KleisliSubst, String> {
        let mut k = KleisliSubst::new();
        for (v, u) in m {
            k.insert(v.as_str().into(), interp(u)?);
        }
        Ok(k)
    };
    let (theta, delta) = (subst(&theta_t)?, subst(&delta_t)?);
    let c = interp(&t)?;
    let obs = |x: cup::herbrand::Coterm| x.observe(OBSERVE_DEPTH).map_err(|e| e.to_string());
    let stepwise = obs(c.substitute(&theta).substitute(&delta))?;
    let composed = obs(c.substitute(&theta.then(&delta)))?;
    let oracle = obs(interp(&gen::replace_consts(
        &gen::replace_consts(&t, &theta_t),
        &delta_t,
    ))?)?;
    if stepwise == composed && composed == oracle {
        Ok(())
    } else {
        Err(format!(
            "{:?}: stepwise {} composed {} syntactic {}",
            t, stepwise, composed, oracle
        ))
    }
}

const PHI_DEPTH: usize = 2;

/// `I ⊆ J` implies `Φ(I) ⊆ Φ(J)` on random subsets of the truncated base.
pub fn phi_monotone(seed: u64) -> Result<(), String> {
    let src = gen::program(seed);
    let p = &src.program;
    let mut r = gen::rng(seed ^ 0x9e37_79b9);
    let base = cup::herbrand::model::herbrand_base(&p.sig, PHI_DEPTH).map_err(|e| e.to_string())?;
    let mut i = Interpretation::new(PHI_DEPTH);
    let mut j = Interpretation::new(PHI_DEPTH);
    for x in &base.atoms {
        if r.gen_bool(0.6) {
            j.atoms.insert(x.clone());
            if r.gen_bool(0.5) {
                i.atoms.insert(x.clone());
            }
        }
    }
    let fi = phi_step(p, &i, PHI_DEPTH).map_err(|e| e.to_string())?;
    let fj = phi_step(p, &j, PHI_DEPTH).map_err(|e| e.to_string())?;
    match fi.atoms.difference(&fj.atoms).next() {
        None => Ok(()),
        Some(x) => Err(format!("{} in Φ(I) but not in Φ(J)", x)),
    }
}

pub fn fuzz_config() -> SearchConfig {
    let mut cfg = SearchConfig::new(LogicId::COFOHH).with_depth(6);
    cfg.max_steps = 20_000;
    cfg
}

/// Searches the random program's goal; a returned proof must check.
pub fn search_checks(
    seed: u64,
) -> Result<Option<(cup::cli::syntax::SourceFile, CupProof)>, String> {
    let src = gen::program(seed);
    let goal = &src.goals[0].1;
    let cfg = fuzz_config();
    let res = if cup::logic::is_coinduction_goal(&src.program.sig, cfg.logic, goal) {
        search(&src.program, goal, &cfg)
    } else {
        search_goal(&src.program, goal, &cfg)
    };
    match res {
        Ok(proof) => {
            check_proof(&src.program, &proof).map_err(|e| format!("seed {}: {}", seed, e))?;
            Ok(Some((src, proof)))
        }
        Err(SearchError::IllFormedGoal(m)) => Err(format!(
            "seed {}: generator produced an ill-formed goal: {}",
            seed, m
        )),
        Err(_) => Ok(None),
    }
}

/// Translates a proof found by [`search_checks`]; the result must check
/// and conclude `⌜P⌝ ⊢ goal`. Returns whether there was a proof.
pub fn translation_checks(seed: u64) -> Result<bool, String> {
    let Some((src, proof)) = search_checks(seed)? else {
        return Ok(false);
    };
    let t = translate(&src.program, &proof).map_err(|e| format!("seed {}: {}", seed, e))?;
    check_ifol_proof(&src.program.sig, &t.root).map_err(|e| format!("seed {}: {}", seed, e))?;
    let s = &t.root.conclusion;
    let ctx = guarded_context(&src.program, &proof).map_err(|e| e.to_string())?;
    if !s.eigen.is_empty() || s.delta != ctx || &s.goal != proof.goal() {
        return Err(format!(
            "seed {}: translation concludes the wrong sequent",
            seed
        ));
    }
    Ok(true)
}
