//! Formulae, atom classes, the D/G grammars of the logic cube, Horn clause
//! normalization and program guarding.

pub mod classify;
pub mod formula;
pub mod horn;

pub use classify::{
    classify_atom, is_coinduction_goal, is_d_formula, is_g_formula, well_formed, AtomClass, LogicId,
};
pub use formula::{formula_convertible, Formula};
pub use horn::{guard_clause, guard_program, normalize_to_horn, Clause, HornClause, Program};

use crate::kernel::KernelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("not an atom")]
    NotAnAtom,
    #[error("not a fohc definite clause")]
    NotAFohcD,
    #[error("clause is not an Hg-formula")]
    NotHg,
    #[error("unknown logic `{0}`")]
    UnknownLogic(String),
    #[error("duplicate clause `{0}`")]
    DuplicateClause(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
