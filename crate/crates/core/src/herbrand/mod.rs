//! Complete Herbrand models: coterms, truncated consequence operators,
//! model membership and invariant extraction from CUP proofs.

pub mod coterm;
pub mod invariant;
pub mod model;
pub mod rational;

pub use coterm::{coterm_equal, interpret_guarded, Coterm, KleisliSubst, Tree};
pub use invariant::{check_invariant, default_theta0, extract_invariant, Invariant, Verdict};
pub use model::{
    gfp_truncated, model_member, phi_step, truncate_atom, Interpretation, TruncatedAtom,
};
pub use rational::{minimal_form, rational_equal, Label, RationalGraph};

use crate::logic::LogicError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HerbrandError {
    #[error("not a first-order guarded term: {0}")]
    NotGuarded(String),
    #[error("not ground: {0}")]
    NotGround(String),
    #[error("goal is not of the form ∀x̄. A₁ ∧ … ∧ Aₙ → A₀: {0}")]
    NotHgGoal(String),
    #[error("predicate `{0}` has a non-base argument")]
    NotFirstOrder(String),
    #[error("program is not a set of Horn clauses")]
    NotHorn,
    #[error("truncated base too large ({0} atoms)")]
    TooLarge(usize),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[cfg(test)]
mod tests;
