//! Random generators for the property suites. Everything is driven by a
//! seed so that proptest can supply and replay cases.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cup::cli::syntax::{parse_program, SourceFile};
use cup::kernel::{sym, Signature, SimpleType, Term};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// `0 : ι`, `s : ι → ι`, `scons : ι → ι → ι`, and the variable leaves
/// `v0`, `v1` used by the substitution suites.
pub fn stream_sig() -> Signature {
    let mut s = Signature::new();
    s.add_const(sym("0"), SimpleType::Base).unwrap();
    s.add_const(sym("s"), SimpleType::first_order(1)).unwrap();
    s.add_const(sym("scons"), SimpleType::first_order(2))
        .unwrap();
    s.add_const(sym("v0"), SimpleType::Base).unwrap();
    s.add_const(sym("v1"), SimpleType::Base).unwrap();
    s
}

fn arrow1() -> SimpleType {
    SimpleType::first_order(1)
}

/// Options for [`base_term`].
#[derive(Clone, Copy)]
pub struct TermShape {
    /// Admit `β`-redexes outside `fix` bodies.
    pub redexes: bool,
    /// Admit the leaves `v0`, `v1`.
    pub leaves: bool,
}

/// A well-typed term of type `ι` in the variable context `stack`, whose
/// `fix`-subterms are all closed guarded base terms.
pub fn base_term(
    r: &mut StdRng,
    depth: usize,
    stack: &mut Vec<SimpleType>,
    shape: TermShape,
) -> Term {
    base(r, depth, stack, shape, false)
}

fn base(
    r: &mut StdRng,
    depth: usize,
    stack: &mut Vec<SimpleType>,
    shape: TermShape,
    in_fix: bool,
) -> Term {
    let base_vars: Vec<usize> = (0..stack.len())
        .filter(|&i| stack[stack.len() - 1 - i].is_base())
        .collect();
    let fun_vars: Vec<usize> = (0..stack.len())
        .filter(|&i| stack[stack.len() - 1 - i] == arrow1())
        .collect();
    let leaf = |r: &mut StdRng| -> Term {
        let k = r.gen_range(0..4);
        if k < 2 && !base_vars.is_empty() {
            Term::Var(base_vars[r.gen_range(0..base_vars.len())])
        } else if k == 2 && shape.leaves {
            Term::cnst(if r.gen_bool(0.5) { "v0" } else { "v1" })
        } else {
            Term::cnst("0")
        }
    };
    if depth == 0 {
        return leaf(r);
    }
    match r.gen_range(0..10) {
        0 => leaf(r),
        1 | 2 => Term::app(Term::cnst("s"), base(r, depth - 1, stack, shape, in_fix)),
        3 | 4 => {
            let a = base(r, depth - 1, stack, shape, in_fix);
            let b = base(r, depth - 1, stack, shape, in_fix);
            Term::apps(Term::cnst("scons"), [a, b])
        }
        5 if shape.redexes && !in_fix => {
            stack.push(SimpleType::Base);
            let body = base(r, depth - 1, stack, shape, false);
            stack.pop();
            let arg = base(r, depth - 1, stack, shape, false);
            Term::app(Term::lam("x", SimpleType::Base, body), arg)
        }
        6 => fix_base(r, depth - 1, shape),
        7 => {
            let f = fix_fun(r, depth - 1, shape);
            Term::app(f, base(r, depth - 1, stack, shape, in_fix))
        }
        8 if !fun_vars.is_empty() => {
            let f = Term::Var(fun_vars[r.gen_range(0..fun_vars.len())]);
            Term::app(f, base(r, depth - 1, stack, shape, in_fix))
        }
        _ => leaf(r),
    }
}

/// A constructor applied to arguments built in `stack`.
fn guarded_body(
    r: &mut StdRng,
    depth: usize,
    stack: &mut Vec<SimpleType>,
    shape: TermShape,
) -> Term {
    if r.gen_bool(0.5) {
        Term::app(Term::cnst("s"), base(r, depth, stack, shape, true))
    } else {
        let a = base(r, depth, stack, shape, true);
        let b = base(r, depth, stack, shape, true);
        Term::apps(Term::cnst("scons"), [a, b])
    }
}

/// `fix x : ι. c M̄`, closed.
fn fix_base(r: &mut StdRng, depth: usize, shape: TermShape) -> Term {
    let mut stack = vec![SimpleType::Base];
    Term::fix(
        "x",
        SimpleType::Base,
        guarded_body(r, depth, &mut stack, shape),
    )
}

/// `fix f : ι → ι. λy. c M̄`, closed.
fn fix_fun(r: &mut StdRng, depth: usize, shape: TermShape) -> Term {
    let mut stack = vec![arrow1(), SimpleType::Base];
    let body = guarded_body(r, depth, &mut stack, shape);
    Term::fix("f", arrow1(), Term::lam("y", SimpleType::Base, body))
}

/// Simultaneous replacement of constants by closed terms.
pub fn replace_consts(t: &Term, map: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Const(c) => map.get(&c[..]).cloned().unwrap_or_else(|| t.clone()),
        Term::Var(_) | Term::Meta(_) => t.clone(),
        Term::App(f, a) => Term::App(
            Arc::new(replace_consts(f, map)),
            Arc::new(replace_consts(a, map)),
        ),
        Term::Lam(h, ty, b) => Term::Lam(h.clone(), ty.clone(), Arc::new(replace_consts(b, map))),
        Term::Fix(h, ty, b) => Term::Fix(h.clone(), ty.clone(), Arc::new(replace_consts(b, map))),
    }
}

/// Source text of a small random first-order program and goal over the
/// constants `a`, `b`, `f`, `g`, `h` and the predicates `p`, `q`, `r`.
/// The goal is a ground atom, `∀x. A(x)` or `∀x. B(x) → A(x)`.
pub fn program_text(r: &mut StdRng) -> String {
    let mut out = String::from(
        "logic cofohh.\nconst a : i.\nconst b : i.\nconst f : i -> i.\nconst g : i -> i.\n\
         const h : i -> i -> i.\npred p : i -> o.\npred q : i -> o.\npred r : i -> i -> o.\n",
    );
    let n = r.gen_range(1..=4);
    let mut heads = Vec::new();
    for k in 0..n {
        let vars: &[&str] = if r.gen_bool(0.3) { &["x"] } else { &["x", "y"] };
        let head = atom_text(r, vars, 2);
        heads.push(head.clone());
        let nb = r.gen_range(0..=2);
        let body: Vec<String> = (0..nb).map(|_| atom_text(r, vars, 1)).collect();
        let q = format!("forall {}. ", vars.join(" "));
        if body.is_empty() {
            out.push_str(&format!("clause c{}: {}{}.\n", k, q, head));
        } else {
            out.push_str(&format!(
                "clause c{}: {}{} => {}.\n",
                k,
                q,
                body.join(" /\\ "),
                head
            ));
        }
    }
    // Half of the goals are instances of a clause head, which makes a
    // proof likelier.
    let head = heads[r.gen_range(0..heads.len())].clone();
    let goal = match r.gen_range(0..8) {
        0 | 1 => atom_text(r, &[], 2),
        2 => format!("forall x. {}", atom_text(r, &["x"], 1)),
        3 => format!(
            "forall x. {} => {}",
            atom_text(r, &["x"], 1),
            atom_text(r, &["x"], 1)
        ),
        4 | 5 => head.replace('x', "a").replace('y', "(f b)"),
        6 => format!("forall x. {}", head.replace('y', "x")),
        _ => format!(
            "forall x. {} => {}",
            atom_text(r, &["x"], 1),
            head.replace('y', "x")
        ),
    };
    out.push_str(&format!("goal g0: {}.\n", goal));
    out
}

pub fn program(seed: u64) -> SourceFile {
    parse_program(&program_text(&mut rng(seed))).unwrap()
}

fn atom_text(r: &mut StdRng, vars: &[&str], depth: usize) -> String {
    match r.gen_range(0..3) {
        0 => format!("p {}", term_text(r, vars, depth)),
        1 => format!("q {}", term_text(r, vars, depth)),
        _ => format!(
            "r {} {}",
            term_text(r, vars, depth),
            term_text(r, vars, depth)
        ),
    }
}

fn term_text(r: &mut StdRng, vars: &[&str], depth: usize) -> String {
    let leaf = |r: &mut StdRng| -> String {
        if !vars.is_empty() && r.gen_bool(0.6) {
            vars[r.gen_range(0..vars.len())].to_string()
        } else if r.gen_bool(0.5) {
            "a".into()
        } else {
            "b".into()
        }
    };
    if depth == 0 || r.gen_bool(0.5) {
        return leaf(r);
    }
    match r.gen_range(0..3) {
        0 => format!("(f {})", term_text(r, vars, depth - 1)),
        1 => format!("(g {})", term_text(r, vars, depth - 1)),
        _ => format!(
            "(h {} {})",
            term_text(r, vars, depth - 1),
            term_text(r, vars, depth - 1)
        ),
    }
}
