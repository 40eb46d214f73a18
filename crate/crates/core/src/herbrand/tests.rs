use std::collections::BTreeSet;

use crate::cli::prove_source;
use crate::cli::syntax::{parse_formula, parse_program, SourceFile};
use crate::kernel::{from_fun, Term};
use crate::logic::Formula;
use crate::prover::SearchConfig;

use super::*;

fn corpus(name: &str) -> SourceFile {
    let path = format!("{}/corpus/{}.clp", env!("CARGO_MANIFEST_DIR"), name);
    parse_program(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn atom(src: &SourceFile, text: &str) -> Formula {
    parse_formula(text, &src.program.sig, &src.defs, &[]).unwrap()
}

fn c(s: &str) -> Term {
    Term::cnst(s)
}

fn node(h: &str, cs: Vec<Tree>) -> Tree {
    Tree::Node(h.into(), cs)
}

fn set(atoms: Vec<(&str, Vec<Tree>)>) -> BTreeSet<TruncatedAtom> {
    atoms
        .into_iter()
        .map(|(p, args)| TruncatedAtom {
            pred: p.into(),
            args,
        })
        .collect()
}

#[test]
fn from_fun_observation() {
    let sig = corpus("from").program.sig;
    let t = interpret_guarded(&sig, &Term::app(from_fun(), c("0"))).unwrap();
    assert!(!t.is_rational());
    let bot = Tree::Bot;
    // scons 0 (scons (s ⊥) (scons ⊥ ⊥))
    let expected = node(
        "scons",
        vec![
            Tree::leaf("0"),
            node(
                "scons",
                vec![
                    node("s", vec![bot.clone()]),
                    node("scons", vec![bot.clone(), bot]),
                ],
            ),
        ],
    );
    assert_eq!(t.observe(3).unwrap(), expected);
    assert_eq!(
        interpret_guarded(&sig, &c("0"))
            .unwrap()
            .observe(4)
            .unwrap(),
        Tree::leaf("0")
    );
}

#[test]
fn zeros_is_rational() {
    let sig = corpus("nat_stream").program.sig;
    let zeros = Term::fix(
        "x",
        crate::kernel::SimpleType::Base,
        Term::apps(c("scons"), [c("0"), Term::Var(0)]),
    );
    let g = interpret_guarded(&sig, &zeros).unwrap();
    assert!(g.is_rational());
    let Coterm::Graph(graph, _) = &g else {
        unreachable!()
    };
    assert_eq!(graph.minimize().nodes.len(), 2);
    let lazy = Coterm::Thunk(zeros);
    assert_eq!(g.observe(5).unwrap(), lazy.observe(5).unwrap());
    let from0 =
        interpret_guarded(&corpus("from").program.sig, &Term::app(from_fun(), c("0"))).unwrap();
    assert!(coterm_equal(&g, &from0, 2).unwrap());
    assert!(!coterm_equal(&g, &from0, 3).unwrap());
    assert!(coterm_equal(&from0, &from0, 50).unwrap());
}

#[test]
fn substitution_on_variable_leaves() {
    let src = corpus("from");
    let ext_names = [("x".into(), crate::kernel::SimpleType::Base)];
    let ext = src.program.sig.with(&ext_names);
    let from0 = interpret_guarded(&src.program.sig, &Term::app(from_fun(), c("0"))).unwrap();
    let mut theta = KleisliSubst::new();
    theta.insert("x".into(), from0.clone());
    let x = interpret_guarded(&ext, &c("x")).unwrap();
    assert!(coterm_equal(&x.substitute(&theta), &from0, 8).unwrap());
    let t = interpret_guarded(&ext, &Term::apps(c("scons"), [c("x"), c("x")])).unwrap();
    let mut zero = KleisliSubst::new();
    zero.insert(
        "x".into(),
        interpret_guarded(&src.program.sig, &c("0")).unwrap(),
    );
    assert_eq!(
        t.substitute(&zero).observe(3).unwrap(),
        node("scons", vec![Tree::leaf("0"), Tree::leaf("0")])
    );
}

#[test]
fn fact_only_step() {
    let src = parse_program("const a : i.\npred q : i -> o.\nclause f: q a.\n").unwrap();
    for k in 1..4 {
        let out = phi_step(&src.program, &Interpretation::new(k), k).unwrap();
        assert_eq!(out.atoms, set(vec![("q", vec![Tree::leaf("a")])]));
    }
}

#[test]
fn gamma_models_at_depth_three() {
    let a = || Tree::leaf("a");
    let f = |t: Tree| node("f", vec![t]);
    let g1 = gfp_truncated(&corpus("gamma1").program, 3).unwrap();
    assert_eq!(g1.atoms, set(vec![("p", vec![a()])]));
    let g2 = gfp_truncated(&corpus("gamma2").program, 3).unwrap();
    let all = set(vec![
        ("p", vec![a()]),
        ("p", vec![f(a())]),
        ("p", vec![f(f(a()))]),
        ("p", vec![f(f(Tree::Bot))]),
    ]);
    assert_eq!(g2.atoms, all);
    let g3 = gfp_truncated(&corpus("gamma3").program, 3).unwrap();
    assert_eq!(g3.atoms, set(vec![("p", vec![f(f(Tree::Bot))])]));
    assert_eq!(phi_step(&corpus("gamma3").program, &g3, 3).unwrap(), g3);
}

#[test]
fn nat_and_stream_models() {
    let src = corpus("nat_stream");
    let p = &src.program;
    let s = |t: Tree| node("s", vec![t]);
    let g = gfp_truncated(p, 3).unwrap();
    assert!(g.contains(&TruncatedAtom {
        pred: "nat".into(),
        args: vec![s(s(Tree::Bot))]
    }));
    let g2 = gfp_truncated(p, 2).unwrap();
    assert!(g2.contains(&TruncatedAtom {
        pred: "stream".into(),
        args: vec![node("scons", vec![Tree::Bot, Tree::Bot])]
    }));
    assert!(model_member(p, &atom(&src, "stream (fix x. scons 0 x)"), 3).unwrap());
    assert!(!model_member(p, &atom(&src, "stream 0"), 3).unwrap());
}

#[test]
fn gamma3_membership() {
    let src = corpus("gamma3");
    assert!(!model_member(&src.program, &atom(&src, "p a"), 2).unwrap());
    assert!(model_member(&src.program, &atom(&src, "p (fix x. f x)"), 4).unwrap());
}

#[test]
fn local_exploration_agrees_on_small_programs() {
    for name in ["gamma1", "gamma2", "gamma3", "eq_odd_even"] {
        let src = corpus(name);
        for k in 1..4 {
            let g = gfp_truncated(&src.program, k).unwrap();
            let base = model::herbrand_base(&src.program.sig, k).unwrap();
            for x in &base.atoms {
                let local = model::local_member(&src.program, x, k).unwrap();
                // Local exploration over-approximates the exact fixed point.
                assert!(!g.contains(x) || local, "{} {} k={}", name, x, k);
            }
        }
    }
}

fn from_invariant() -> (SourceFile, Invariant) {
    let src = corpus("from");
    let proofs = prove_source(&src, &SearchConfig::new(src.logic.unwrap())).unwrap();
    let mut theta0 = KleisliSubst::new();
    theta0.insert(
        "c".into(),
        interpret_guarded(&src.program.sig, &c("0")).unwrap(),
    );
    let inv = extract_invariant(&src.program, &proofs[0], theta0).unwrap();
    (src, inv)
}

#[test]
fn from_invariant_checks() {
    let (src, inv) = from_invariant();
    assert_eq!(inv.agents.len(), 1);
    let ext_names = inv.eigen.clone();
    let ext = src.program.sig.with(&ext_names);
    let agent = inv.agents[0].get("c").unwrap();
    let sc = interpret_guarded(&ext, &Term::app(c("s"), c("c"))).unwrap();
    assert!(coterm_equal(agent, &sc, 6).unwrap());
    let fc = |t: Term| Term::app(src.defs[0].1.clone(), t);
    let d1 = Formula::atom("from", vec![c("c"), fc(c("c"))]);
    assert!(inv.atoms.contains(&d1));
    let sc_t = Term::app(c("s"), c("c"));
    let d2 = Formula::atom("from", vec![sc_t.clone(), fc(sc_t)]);
    assert!(inv
        .atoms
        .iter()
        .any(|a| crate::logic::formula_convertible(a, &d2, 1000) == crate::kernel::Conv::Yes));
    assert_eq!(
        check_invariant(&src.program, &inv, 4, 4).unwrap(),
        Verdict::Ok
    );
}

#[test]
fn corrupted_invariant_has_counterexample() {
    let (src, mut inv) = from_invariant();
    // Drop the hypothesis use: its proven atom and its agent.
    inv.atoms
        .retain(|a| matches!(a, Formula::Atom(_, args) if args[0] == c("c")));
    inv.agents.clear();
    let v = check_invariant(&src.program, &inv, 4, 4).unwrap();
    let Verdict::Counterexample(x) = v else {
        panic!("expected a counterexample")
    };
    assert_eq!(
        x.to_string(),
        "from 0 (scons 0 (scons (s 0) (scons _|_ _|_)))"
    );
}
