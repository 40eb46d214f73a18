//! The later-modality logic: sequents, the rule checker, derived rules and
//! the translation of CUP proofs over guarded programs.

mod build;
pub mod check;
pub mod derived;
pub mod translate;
pub mod tree;

pub use check::check_ifol_proof;
pub use derived::{expand_all, expand_derived};
pub use translate::{guarded_context, translate};
pub use tree::{INode, IPayload, IRule, ISequent, IfolProof};

use crate::prover::RuleError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IfolError {
    #[error("not derivable: {0}")]
    NotDerived(String),
    #[error("unsupported proof shape: {0}")]
    UnsupportedShape(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

#[cfg(test)]
mod tests;
