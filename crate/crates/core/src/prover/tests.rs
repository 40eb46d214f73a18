use crate::cli::syntax::{parse_formula, parse_program, SourceFile};
use crate::kernel::{Term, DEFAULT_FUEL};
use crate::logic::{Formula, LogicId};

use super::*;

fn corpus(name: &str) -> SourceFile {
    let path = format!("{}/corpus/{}.clp", env!("CARGO_MANIFEST_DIR"), name);
    parse_program(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn cfg(src: &SourceFile) -> SearchConfig {
    SearchConfig::new(src.logic.unwrap())
}

fn sorted(mut v: Vec<Rule>) -> Vec<&'static str> {
    v.sort_by_key(|r| r.name());
    v.into_iter().map(Rule::name).collect()
}

#[test]
fn eq_odd_int_has_expected_main_branch() {
    let src = corpus("eq_odd_even");
    let proof = search(&src.program, &src.goals[0].1, &cfg(&src)).unwrap();
    check_proof(&src.program, &proof).unwrap();
    assert_eq!(
        sorted(proof.root.main_branch()),
        sorted(vec![
            Rule::Cofix,
            Rule::DecG,
            Rule::AllL,
            Rule::ImpL,
            Rule::Init
        ])
    );
    assert_eq!(
        proof.root.children[0].payload,
        Payload::Select(Selected::Clause("k_odd".into()))
    );
    assert_eq!(proof.root.count(Rule::AndR), 2);
    assert_eq!(proof.root.count(Rule::Dec), 4);
}

#[test]
fn from_proof_and_corollary() {
    let src = corpus("from");
    let (lemma_name, lemma) = &src.lemmas[0];
    let (p1, p2) =
        prove_with_lemma(&src.program, lemma_name, lemma, &src.goals[0].1, &cfg(&src)).unwrap();
    check_proof(&src.program, &p1).unwrap();
    check_proof(&src.program, &p2).unwrap();
    assert_eq!(
        sorted(p1.root.main_branch()),
        sorted(vec![
            Rule::Cofix,
            Rule::AllRg,
            Rule::DecG,
            Rule::AllL,
            Rule::AllL,
            Rule::ImpL,
            Rule::Init
        ])
    );
    let from_fun = src.defs[0].1.clone();
    let mut witnesses = Vec::new();
    p1.root.visit(&mut |n| {
        if let Payload::Witness(w) = &n.payload {
            witnesses.push(w.clone());
        }
    });
    let c = Term::cnst("c");
    assert!(witnesses.contains(&Term::app(from_fun.clone(), Term::app(Term::cnst("s"), c))));
    assert_eq!(p2.root.rule, Rule::ExR);
    assert_eq!(
        p2.root.payload,
        Payload::Witness(Term::app(from_fun, Term::cnst("0")))
    );
}

#[test]
fn corpus_goals_are_provable() {
    for name in ["nat_stream", "typing", "gamma1", "gamma3"] {
        let src = corpus(name);
        for (_, g) in &src.goals {
            let proof =
                search(&src.program, g, &cfg(&src)).unwrap_or_else(|e| panic!("{}: {}", name, e));
            check_proof(&src.program, &proof).unwrap();
        }
    }
}

#[test]
fn lemma_routes() {
    for name in ["gamma2", "eq_s_g"] {
        let src = corpus(name);
        let (n, l) = &src.lemmas[0];
        let (p1, p2) = prove_with_lemma(&src.program, n, l, &src.goals[0].1, &cfg(&src)).unwrap();
        check_proof(&src.program, &p1).unwrap();
        check_proof(&src.program, &p2).unwrap();
    }
}

#[test]
fn gamma2_without_lemma_is_exhausted() {
    let src = corpus("gamma2");
    let c = SearchConfig::new(LogicId::COFOHC).with_depth(12);
    assert_eq!(
        search(&src.program, &src.goals[0].1, &c),
        Err(SearchError::Exhausted(12))
    );
}

#[test]
fn decg_on_hypothesis_is_rejected() {
    let src = corpus("eq_odd_even");
    let mut proof = search(&src.program, &src.goals[0].1, &cfg(&src)).unwrap();
    let decg = &mut proof.root.children[0];
    decg.payload = Payload::Select(Selected::Hyp(0));
    let err = check_proof(&src.program, &proof).unwrap_err();
    assert_eq!(err.path, vec![0]);
}

#[test]
fn unify_examples() {
    let sig = &corpus("gamma3").program.sig;
    let x = Term::Meta(0);
    let f = |t: Term| Term::app(Term::cnst("f"), t);
    let s = unify(sig, &x, &f(x.clone()), UnifyMode::Rational).unwrap();
    let expected = Term::fix("x", crate::kernel::SimpleType::Base, f(Term::Var(0)));
    assert_eq!(s.0[&0], expected);
    assert_eq!(
        unify(sig, &x, &f(x.clone()), UnifyMode::Syntactic),
        Err(UnifyError::OccursCheck(0))
    );
    let a = Term::cnst("a");
    for mode in [
        UnifyMode::Syntactic,
        UnifyMode::Rational,
        UnifyMode::ModuloWhnf,
    ] {
        assert_eq!(
            unify(sig, &a, &f(a.clone()), mode),
            Err(UnifyError::NoUnifier)
        );
        assert!(unify(sig, &f(a.clone()), &f(a.clone()), mode)
            .unwrap()
            .is_empty());
    }
}

#[test]
fn colp_table() {
    let q = |src: &SourceFile, text: &str| -> Formula {
        let f = parse_formula(text, &src.program.sig, &src.defs, &[]).unwrap();
        // The query variable `x` is parsed as a bound name; reopen it as a meta.
        match f {
            Formula::Forall(_, _, b) => b.instantiate(&Term::Meta(0)),
            f => f,
        }
    };
    let fx = Term::fix(
        "x",
        crate::kernel::SimpleType::Base,
        Term::app(Term::cnst("f"), Term::Var(0)),
    );
    let expect_pa = [true, false, false];
    for (k, name) in ["gamma1", "gamma2", "gamma3"].iter().enumerate() {
        let src = corpus(name);
        let pa = colp_solve(&src.program, &q(&src, "p a"), 16).unwrap();
        assert_eq!(
            matches!(pa, ColpAnswer::Answer(ref s) if s.is_empty()),
            expect_pa[k],
            "{}",
            name
        );
        let px = colp_solve(&src.program, &q(&src, "forall x. p x"), 16).unwrap();
        let ColpAnswer::Answer(s) = px else {
            panic!("{}", name)
        };
        if k == 0 {
            assert!(s.is_empty());
        } else {
            assert_eq!(s.0[&0], fx);
        }
    }
    let _ = DEFAULT_FUEL;
}
