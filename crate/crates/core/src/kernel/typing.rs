use super::sig::{Context, SymbolTable};
use super::term::Term;
use super::types::SimpleType;
use super::KernelError;

/// Infers the type of `m` under `ctx`. Binder annotations make this
/// syntax-directed, so the result is unique.
pub fn infer_type(
    sig: &dyn SymbolTable,
    ctx: &Context,
    m: &Term,
) -> Result<SimpleType, KernelError> {
    let mut stack = ctx.types();
    infer(sig, &mut stack, m)
}

/// Same as [`infer_type`] with the context given as a type stack.
pub fn infer(
    sig: &dyn SymbolTable,
    stack: &mut Vec<SimpleType>,
    m: &Term,
) -> Result<SimpleType, KernelError> {
    match m {
        Term::Var(i) => {
            let n = stack.len();
            if *i < n {
                Ok(stack[n - 1 - i].clone())
            } else {
                Err(KernelError::UnboundVariable(*i))
            }
        }
        Term::Const(c) => sig
            .const_type(c)
            .cloned()
            .ok_or_else(|| KernelError::UnknownConstant(c.to_string())),
        Term::Meta(k) => Err(KernelError::UnresolvedMeta(*k)),
        Term::App(f, a) => {
            let tf = infer(sig, stack, f)?;
            let ta = infer(sig, stack, a)?;
            match tf {
                SimpleType::Arrow(s, t) if *s == ta => Ok((*t).clone()),
                SimpleType::Arrow(s, _) => Err(KernelError::ArrowMismatch(format!(
                    "argument has type {}, expected {}",
                    ta, s
                ))),
                SimpleType::Base => Err(KernelError::ArrowMismatch(
                    "application of a term of base type".into(),
                )),
            }
        }
        Term::Lam(_, ty, body) => {
            stack.push(ty.clone());
            let r = infer(sig, stack, body);
            stack.pop();
            Ok(SimpleType::arrow(ty.clone(), r?))
        }
        Term::Fix(_, ty, body) => {
            stack.push(ty.clone());
            let r = infer(sig, stack, body);
            stack.pop();
            let r = r?;
            if r == *ty {
                Ok(r)
            } else {
                Err(KernelError::ArrowMismatch(format!(
                    "fixed point body has type {}, expected {}",
                    r, ty
                )))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::sig::Signature;
    use crate::kernel::term::sym;

    fn stream_sig() -> Signature {
        let mut s = Signature::new();
        s.add_const(sym("0"), SimpleType::Base).unwrap();
        s.add_const(sym("s"), SimpleType::first_order(1)).unwrap();
        s.add_const(sym("scons"), SimpleType::first_order(2))
            .unwrap();
        s
    }

    #[test]
    fn typing_examples() {
        let sig = stream_sig();
        let i = SimpleType::Base;
        let ii = SimpleType::first_order(1);
        let from_fun = crate::kernel::from_fun();
        assert_eq!(infer_type(&sig, &Context::new(), &from_fun).unwrap(), ii);

        let mut ctx = Context::new();
        ctx.push(sym("x"), i.clone());
        let k = Term::lam("y", i.clone(), Term::Var(1));
        assert_eq!(infer_type(&sig, &ctx, &k).unwrap(), ii);

        let bad = Term::app(Term::cnst("0"), Term::cnst("0"));
        assert!(matches!(
            infer_type(&sig, &Context::new(), &bad),
            Err(KernelError::ArrowMismatch(_))
        ));
    }

    #[test]
    fn unbound_and_unknown() {
        let sig = stream_sig();
        assert!(matches!(
            infer_type(&sig, &Context::new(), &Term::Var(0)),
            Err(KernelError::UnboundVariable(0))
        ));
        assert!(matches!(
            infer_type(&sig, &Context::new(), &Term::cnst("nope")),
            Err(KernelError::UnknownConstant(_))
        ));
    }
}
