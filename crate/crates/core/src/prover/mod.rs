//! Coinductive uniform proofs: proof trees, the rule checker, unification,
//! goal-directed search and a coinductive SLD resolution for comparison.

pub mod check;
pub mod colp;
pub mod search;
pub mod tree;
pub mod unify;

pub use check::{check_proof, check_proof_with_fuel};
pub use colp::{colp_solve, ColpAnswer};
pub use search::{prove_with_lemma, search, search_goal, SearchConfig};
pub use tree::{CupProof, Judgment, Payload, ProofNode, Rule, Selected, Sequent};
pub use unify::{unify, unify_atoms, MetaStore, Substitution, Unifier, UnifyError, UnifyMode};

/// A rule violation at the node reached by following child indices `path`
/// from the root.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rule error at {}: {reason}", show_path(.path))]
pub struct RuleError {
    pub path: Vec<usize>,
    pub reason: String,
}

fn show_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".into()
    } else {
        path.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("ill-formed goal: {0}")]
    IllFormedGoal(String),
    #[error("no proof within depth {0}")]
    Exhausted(usize),
    #[error("lemma: {0}")]
    Lemma(Box<SearchError>),
}

#[cfg(test)]
mod tests;
