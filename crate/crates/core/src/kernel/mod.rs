//! Simply typed terms with fixed points: typing, reduction, conversion and
//! guardedness.

pub mod guard;
pub mod reduce;
pub mod sig;
pub mod term;
pub mod types;
pub mod typing;

pub use guard::{head_normal_form, is_first_order_guarded, is_guarded, is_guarded_base, Head};
pub use reduce::{convertible, whnf, Conv, Fuel, DEFAULT_FUEL};
pub use sig::{Context, Extended, Signature, SymbolTable};
pub use term::{sym, Hint, Sym, Term};
pub use types::{PropType, SimpleType};
pub use typing::infer_type;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("unbound variable #{0}")]
    UnboundVariable(usize),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("ill-typed application: {0}")]
    ArrowMismatch(String),
    #[error("unresolved metavariable ?{0}")]
    UnresolvedMeta(usize),
    #[error("reduction fuel exhausted")]
    FuelExhausted,
    #[error("term has no head normal form")]
    NoHeadNormalForm,
    #[error("duplicate declaration of `{0}`")]
    Duplicate(String),
}

/// `fix f : i -> i. \x. scons x (f (s x))`, the stream of numerals from `x`.
#[cfg(test)]
pub(crate) fn from_fun() -> Term {
    let base = SimpleType::Base;
    Term::fix(
        "f",
        SimpleType::first_order(1),
        Term::lam(
            "x",
            base,
            Term::apps(
                Term::cnst("scons"),
                [
                    Term::Var(0),
                    Term::app(Term::Var(1), Term::app(Term::cnst("s"), Term::Var(0))),
                ],
            ),
        ),
    )
}
