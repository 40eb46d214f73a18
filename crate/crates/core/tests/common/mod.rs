#![allow(dead_code)]

use cup::cli::prove_source;
use cup::cli::syntax::{parse_formula, parse_program, SourceFile};
use cup::herbrand::KleisliSubst;
use cup::kernel::Term;
use cup::logic::Formula;
use cup::prover::search::inhabitant;
use cup::prover::{CupProof, Payload, SearchConfig};

pub mod gen;
pub mod props;

pub const CORPUS: [&str; 8] = [
    "from",
    "eq_odd_even",
    "eq_s_g",
    "nat_stream",
    "typing",
    "gamma1",
    "gamma2",
    "gamma3",
];

pub fn corpus(name: &str) -> SourceFile {
    let path = format!("{}/corpus/{}.clp", env!("CARGO_MANIFEST_DIR"), name);
    parse_program(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn config(src: &SourceFile) -> SearchConfig {
    SearchConfig::new(src.logic.unwrap())
}

/// Every proof of a corpus file: the lemma first when there is one.
pub fn corpus_proofs(src: &SourceFile) -> Vec<CupProof> {
    prove_source(src, &config(src)).unwrap()
}

pub fn formula(src: &SourceFile, text: &str) -> Formula {
    parse_formula(text, &src.program.sig, &src.defs, &[]).unwrap()
}

/// `θ₀` sending every eigenvariable of the proof to an inhabitant of its
/// type.
pub fn default_theta0(src: &SourceFile, proof: &CupProof) -> KleisliSubst {
    cup::herbrand::default_theta0(&src.program.sig, proof, KleisliSubst::new()).unwrap()
}

/// Ground atoms that the proof's goal asserts: universals are instantiated
/// by inhabitants, existentials by the proof's witness, and an implication
/// contributes its head when every body atom is itself a model member of
/// the instance chosen.
pub fn ground_instances(src: &SourceFile, proof: &CupProof) -> Vec<(Formula, Vec<Formula>)> {
    fn go(
        src: &SourceFile,
        f: &Formula,
        witness: Option<&Term>,
        body: Vec<Formula>,
        out: &mut Vec<(Formula, Vec<Formula>)>,
    ) {
        match f {
            Formula::Forall(_, ty, b) => {
                let w = inhabitant(&src.program.sig, ty).unwrap();
                go(src, &b.instantiate(&w), None, body, out)
            }
            Formula::Exists(_, _, b) => {
                if let Some(w) = witness {
                    go(src, &b.instantiate(w), None, body, out)
                }
            }
            Formula::Imp(a, h) => {
                let mut body = body;
                let mut atoms = Vec::new();
                split(a, &mut atoms);
                body.extend(atoms);
                go(src, h, None, body, out)
            }
            Formula::And(a, b) => {
                go(src, a, None, body.clone(), out);
                go(src, b, None, body, out);
            }
            a if a.is_atom() => out.push((a.clone(), body)),
            _ => {}
        }
    }
    fn split(f: &Formula, out: &mut Vec<Formula>) {
        match f {
            Formula::And(a, b) => {
                split(a, out);
                split(b, out);
            }
            f => out.push(f.clone()),
        }
    }
    let witness = match &proof.root.payload {
        Payload::Witness(w) => Some(w),
        _ => None,
    };
    let mut out = Vec::new();
    go(src, proof.goal(), witness, Vec::new(), &mut out);
    out
}
