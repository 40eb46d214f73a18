use crate::cli::prove_source;
use crate::cli::syntax::{parse_program, SourceFile};
use crate::kernel::{SimpleType, Term};
use crate::logic::Formula;
use crate::prover::{CupProof, Rule, SearchConfig};

use super::build::*;
use super::*;

fn corpus(name: &str) -> SourceFile {
    let path = format!("{}/corpus/{}.clp", env!("CARGO_MANIFEST_DIR"), name);
    parse_program(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn proofs(src: &SourceFile) -> Vec<CupProof> {
    prove_source(src, &SearchConfig::new(src.logic.unwrap())).unwrap()
}

fn sorted(mut v: Vec<IRule>) -> Vec<&'static str> {
    v.sort_by_key(|r| r.name());
    v.into_iter().map(IRule::name).collect()
}

const CORPUS: [&str; 8] = [
    "from",
    "eq_odd_even",
    "eq_s_g",
    "nat_stream",
    "typing",
    "gamma1",
    "gamma2",
    "gamma3",
];

#[test]
fn corpus_translations_check() {
    for name in CORPUS {
        let src = corpus(name);
        for proof in proofs(&src) {
            let t = translate(&src.program, &proof).unwrap_or_else(|e| panic!("{}: {}", name, e));
            check_ifol_proof(&src.program.sig, &t.root)
                .unwrap_or_else(|e| panic!("{}/{}: {}", name, proof.name, e));
            let s = &t.root.conclusion;
            assert!(s.eigen.is_empty());
            assert_eq!(s.delta, guarded_context(&src.program, &proof).unwrap());
            assert_eq!(&s.goal, proof.goal());
            assert_eq!(t.root.count(IRule::Fp), proof.root.count(Rule::Cofix));
        }
    }
}

#[test]
fn from_translation_main_branch() {
    let src = corpus("from");
    let proof = &proofs(&src)[0];
    let t = translate(&src.program, proof).unwrap();
    let expected = [
        IRule::Fp,
        IRule::LaterAllL,
        IRule::AllI,
        IRule::Conv,
        IRule::ImpE,
        IRule::AllE,
        IRule::AllE,
        IRule::Proj,
    ];
    assert_eq!(sorted(t.root.main_branch()), sorted(expected.to_vec()));
    // The hypothesis branch instantiates ∀x. ▷from x (fromFun x) at s c.
    let mut imp = &t.root;
    while imp.rule != IRule::ImpE {
        imp = &imp.children[0];
    }
    let spade = &imp.children[1];
    assert_eq!(spade.rule, IRule::AllE);
    assert_eq!(
        spade.payload,
        IPayload::Witness(Term::app(Term::cnst("s"), Term::cnst("c")))
    );
    assert_eq!(spade.children[0].rule, IRule::Proj);
}

#[test]
fn eq_odd_hypothesis_used_after_next() {
    let src = corpus("eq_odd_even");
    let proof = &proofs(&src)[0];
    let t = translate(&src.program, proof).unwrap();
    let hyp = Formula::later(proof.goal().clone());
    fn find(n: &INode, under_next: bool, hyp: &Formula) -> bool {
        if n.rule == IRule::Proj && n.conclusion.goal == *hyp {
            return under_next;
        }
        n.children
            .iter()
            .any(|c| find(c, under_next || n.rule == IRule::Next, hyp))
    }
    assert!(find(&t.root, false, &hyp));
}

#[test]
fn fact_translation_needs_no_next() {
    let src = parse_program(
        "logic cofohc.\nconst a : i.\npred q : i -> o.\nclause f: q a.\ngoal g: q a.\n",
    )
    .unwrap();
    let proof = &proofs(&src)[0];
    let t = translate(&src.program, proof).unwrap();
    check_ifol_proof(&src.program.sig, &t.root).unwrap();
    assert_eq!(t.root.main_branch(), vec![IRule::Fp, IRule::Proj]);
    assert_eq!(t.root.count(IRule::Next), 0);
}

fn eq_sig() -> crate::kernel::Signature {
    corpus("eq_odd_even").program.sig
}

fn eq(t: Term) -> Formula {
    Formula::atom("eq", vec![t])
}

#[test]
fn next_of_top() {
    let cx = ISequent {
        eigen: vec![],
        delta: vec![eq(Term::cnst("Int"))],
        goal: Formula::Top,
    };
    let t = next(top_i(&cx));
    assert_eq!(t.conclusion.goal, Formula::later(Formula::Top));
    check_ifol_proof(&eq_sig(), &t).unwrap();
}

#[test]
fn fp_with_wrong_premise_is_rejected() {
    let phi = eq(Term::cnst("Int"));
    let cx = ISequent {
        eigen: vec![],
        delta: vec![Formula::later(phi.clone())],
        goal: Formula::Top,
    };
    let premise = proj(&cx, 0);
    let bad = INode::new(
        IRule::Fp,
        ISequent {
            eigen: vec![],
            delta: vec![],
            goal: phi,
        },
        IPayload::None,
        vec![premise],
    );
    let err = check_ifol_proof(&eq_sig(), &bad).unwrap_err();
    assert!(err.path.is_empty());
}

#[test]
fn derived_rules_expand_and_check() {
    let sig = eq_sig();
    let int = Term::cnst("Int");
    let a = eq(int.clone());
    let b = eq(Term::app(Term::cnst("odd"), int.clone()));
    let all = Formula::forall("x", SimpleType::Base, eq(Term::Var(0)));
    let hyps = vec![
        Formula::later(Formula::and(a.clone(), b.clone())),
        Formula::later(all.clone()),
        Formula::later(Formula::imp(a.clone(), b.clone())),
        a.clone(),
    ];
    let cx = ISequent {
        eigen: vec![],
        delta: hyps,
        goal: Formula::Top,
    };
    let cases: Vec<INode> = vec![
        // ▷(A ∧ B) ⊢ ▷A ∧ ▷B
        derived(
            IRule::LaterAndR,
            cx.with_goal(Formula::and(
                Formula::later(a.clone()),
                Formula::later(b.clone()),
            )),
            IPayload::None,
            proj(&cx, 0),
        ),
        derived(
            IRule::LaterAllR,
            cx.with_goal(Formula::forall(
                "x",
                SimpleType::Base,
                Formula::later(eq(Term::Var(0))),
            )),
            IPayload::None,
            proj(&cx, 1),
        ),
        {
            let inner = cx.assuming(
                Formula::and(Formula::later(a.clone()), Formula::later(b.clone())),
                Formula::Top,
            );
            let leaf = and_e(true, proj_last(&inner)).unwrap();
            derived(
                IRule::LaterAndL,
                cx.with_goal(Formula::later(b.clone())),
                IPayload::Index(0),
                leaf,
            )
        },
        {
            let inner = cx.assuming(
                Formula::forall("x", SimpleType::Base, Formula::later(eq(Term::Var(0)))),
                Formula::Top,
            );
            let leaf = all_e(proj_last(&inner), int.clone()).unwrap();
            derived(
                IRule::LaterAllL,
                cx.with_goal(Formula::later(a.clone())),
                IPayload::Index(1),
                leaf,
            )
        },
        {
            let inner = cx.assuming(
                Formula::imp(Formula::later(a.clone()), Formula::later(b.clone())),
                Formula::Top,
            );
            let leaf = imp_e(proj_last(&inner), next(proj(&inner, 3))).unwrap();
            derived(
                IRule::MonL,
                cx.with_goal(Formula::later(b.clone())),
                IPayload::Index(2),
                leaf,
            )
        },
        derived(
            IRule::AndLaterI,
            cx.with_goal(Formula::later(Formula::and(a.clone(), a.clone()))),
            IPayload::None,
            and_i(next(proj(&cx, 3)), next(proj(&cx, 3))),
        ),
    ];
    for n in cases {
        check_ifol_proof(&sig, &n).unwrap_or_else(|e| panic!("{}: {}", n.rule, e));
        let e = expand_derived(&sig, &n).unwrap();
        assert!(e.visit_all(|x| !x.rule.is_derived()), "{}", n.rule);
        check_ifol_proof(&sig, &e).unwrap();
    }
}

#[test]
fn weak_on_projection() {
    let sig = eq_sig();
    let cx = ISequent {
        eigen: vec![],
        delta: vec![eq(Term::cnst("Int"))],
        goal: Formula::Top,
    };
    let mut big = cx.clone();
    big.eigen.push(("d".into(), SimpleType::Base));
    let n = derived(
        IRule::Weak,
        big.with_goal(cx.delta[0].clone()),
        IPayload::Fresh("d".into()),
        proj(&cx, 0),
    );
    check_ifol_proof(&sig, &n).unwrap();
    let e = expand_derived(&sig, &n).unwrap();
    assert_eq!(e.rule, IRule::Proj);
    assert_eq!(e.conclusion, n.conclusion);
}

#[test]
fn all_later_intro_is_rejected() {
    let sig = eq_sig();
    let body = Formula::later(eq(Term::Var(0)));
    let cx = ISequent {
        eigen: vec![],
        delta: vec![Formula::forall("x", SimpleType::Base, body)],
        goal: Formula::Top,
    };
    let goal = Formula::later(Formula::forall("x", SimpleType::Base, eq(Term::Var(0))));
    let n = derived(
        IRule::AllLaterI,
        cx.with_goal(goal),
        IPayload::None,
        proj(&cx, 0),
    );
    assert!(matches!(
        expand_derived(&sig, &n),
        Err(IfolError::NotDerived(_))
    ));
    assert!(check_ifol_proof(&sig, &n).is_err());
}

#[test]
fn checking_agrees_with_full_expansion() {
    for name in CORPUS {
        let src = corpus(name);
        for proof in proofs(&src) {
            let t = translate(&src.program, &proof).unwrap();
            let e = expand_all(&src.program.sig, &t.root).unwrap();
            assert!(e.visit_all(|x| !x.rule.is_derived()));
            assert_eq!(e.conclusion, t.root.conclusion);
            check_ifol_proof(&src.program.sig, &e).unwrap();
        }
    }
}
