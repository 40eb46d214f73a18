use super::reduce::{whnf_with, Fuel};
use super::sig::{Context, SymbolTable};
use super::term::Term;
use super::types::SimpleType;
use super::typing::infer;
use super::KernelError;

/// `Γ ⊢g M : τ`: the type-driven guarded base term judgement.
pub fn is_guarded_base(sig: &dyn SymbolTable, ctx: &Context, m: &Term, ty: &SimpleType) -> bool {
    let mut stack = ctx.types();
    guarded_base_type(sig, &mut stack, m).as_ref() == Some(ty)
}

/// Synthesizes the type of a guarded base term, or `None` when no guarded
/// base derivation exists.
pub fn guarded_base_type(
    sig: &dyn SymbolTable,
    stack: &mut Vec<SimpleType>,
    m: &Term,
) -> Option<SimpleType> {
    match m {
        Term::Var(i) => {
            let n = stack.len();
            let t = stack.get(n.checked_sub(i + 1)?)?;
            (t.order() <= 1).then(|| t.clone())
        }
        Term::Const(c) => sig.const_type(c).cloned(),
        Term::App(f, a) => match guarded_base_type(sig, stack, f)? {
            SimpleType::Arrow(s, t) => {
                let ta = guarded_base_type(sig, stack, a)?;
                (ta == *s).then(|| (*t).clone())
            }
            SimpleType::Base => None,
        },
        Term::Fix(_, ty, body) => {
            let n = ty.arity()?;
            let base = stack.len();
            stack.push(ty.clone());
            let ok = guarded_fix_body(sig, stack, body, n);
            stack.truncate(base);
            ok.then(|| ty.clone())
        }
        Term::Lam(..) | Term::Meta(_) => None,
    }
}

/// Checks `λy₁…yₙ. f M̄` with all `yᵢ : ι`, `f` a signature symbol applied
/// to all its arguments, and every `Mᵢ` guarded base of type `ι`.
fn guarded_fix_body(
    sig: &dyn SymbolTable,
    stack: &mut Vec<SimpleType>,
    body: &Term,
    lambdas: usize,
) -> bool {
    let mut t = body;
    for _ in 0..lambdas {
        match t {
            Term::Lam(_, ty, b) if ty.is_base() => {
                stack.push(SimpleType::Base);
                t = b;
            }
            _ => return false,
        }
    }
    let (head, args) = t.spine();
    let Term::Const(f) = head else { return false };
    let Some(fty) = sig.const_type(f) else {
        return false;
    };
    let (params, cod) = fty.uncurry();
    if !cod.is_base() || params.len() != args.len() || !params.iter().all(SimpleType::is_base) {
        return false;
    }
    args.iter()
        .all(|a| guarded_base_type(sig, stack, a).map_or(false, |t| t.is_base()))
}

/// Every `fix`-subterm is a closed guarded base term.
pub fn is_guarded(sig: &dyn SymbolTable, m: &Term) -> bool {
    match m {
        Term::Fix(..) => m.is_closed() && guarded_base_type(sig, &mut Vec::new(), m).is_some(),
        Term::Var(_) | Term::Const(_) | Term::Meta(_) => true,
        Term::App(f, a) => is_guarded(sig, f) && is_guarded(sig, a),
        Term::Lam(_, _, b) => is_guarded(sig, b),
    }
}

/// `M ∈ Λg(Σ)(Γ)`: guarded, of type `ι`, with every occurring context
/// variable of base type.
pub fn is_first_order_guarded(sig: &dyn SymbolTable, ctx: &Context, m: &Term) -> bool {
    if !is_guarded(sig, m) {
        return false;
    }
    let vars_ok = m
        .loose_vars()
        .iter()
        .all(|i| ctx.get(*i).map_or(false, |(_, t)| t.is_base()));
    if !vars_ok {
        return false;
    }
    let mut stack = ctx.types();
    matches!(infer(sig, &mut stack, m), Ok(SimpleType::Base))
}

/// Head symbol or variable of a head normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Head {
    Const(super::term::Sym),
    Var(usize),
}

/// Reduces a first-order guarded term to `f N̄` or to a context variable.
pub fn head_normal_form(m: &Term, fuel: usize) -> Result<(Head, Vec<Term>), KernelError> {
    let mut f = Fuel(fuel);
    hnf_with(m, &mut f)
}

pub fn hnf_with(m: &Term, fuel: &mut Fuel) -> Result<(Head, Vec<Term>), KernelError> {
    let w = whnf_with(m, fuel)?;
    let (h, args) = w.spine();
    let head = match h {
        Term::Const(c) => Head::Const(c.clone()),
        Term::Var(i) => Head::Var(*i),
        _ => return Err(KernelError::NoHeadNormalForm),
    };
    Ok((head, args.into_iter().cloned().collect()))
}
