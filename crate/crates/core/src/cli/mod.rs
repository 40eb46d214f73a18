//! Concrete syntax, proof files and the command-line front end.

pub mod print;
pub mod proof_io;
pub mod run;

pub use run::run;
pub mod syntax;

use crate::logic::is_coinduction_goal;
use crate::prover::{prove_with_lemma, search, search_goal, CupProof, SearchConfig, SearchError};
use syntax::SourceFile;

/// Proves every goal of a source file in its declared logic. With a lemma
/// directive the first lemma is proven first and admitted for each goal;
/// the lemma's proof comes first in the result.
pub fn prove_source(src: &SourceFile, cfg: &SearchConfig) -> Result<Vec<CupProof>, SearchError> {
    let mut out = Vec::new();
    for (name, goal) in &src.goals {
        let mut proof = match src.lemmas.first() {
            Some((lname, lemma)) => {
                let (mut first, second) = prove_with_lemma(&src.program, lname, lemma, goal, cfg)?;
                if out.is_empty() {
                    first.name = lname.clone();
                    out.push(first);
                }
                second
            }
            None if is_coinduction_goal(&src.program.sig, cfg.logic, goal) => {
                search(&src.program, goal, cfg)?
            }
            None => search_goal(&src.program, goal, cfg)?,
        };
        proof.name = name.clone();
        out.push(proof);
    }
    Ok(out)
}
