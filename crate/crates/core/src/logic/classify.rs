use std::fmt;
use std::str::FromStr;

use crate::kernel::typing::infer;
use crate::kernel::{is_guarded, SimpleType, SymbolTable, Term};

use super::formula::Formula;
use super::LogicError;

/// Checks `Γ ⊢ φ : o`. The later modality is accepted everywhere; callers
/// on the CUP side reject it separately.
pub fn well_formed(
    sig: &dyn SymbolTable,
    ctx: &mut Vec<SimpleType>,
    phi: &Formula,
) -> Result<(), LogicError> {
    match phi {
        Formula::Atom(p, args) => {
            let pt = sig
                .pred_type(p)
                .ok_or_else(|| LogicError::UnknownPredicate(p.to_string()))?;
            if pt.args.len() != args.len() {
                return Err(LogicError::ArityMismatch(format!(
                    "`{}` expects {} arguments, got {}",
                    p,
                    pt.args.len(),
                    args.len()
                )));
            }
            for (i, (t, expected)) in args.iter().zip(&pt.args).enumerate() {
                let ty = infer(sig, ctx, t)?;
                if ty != *expected {
                    return Err(LogicError::ArityMismatch(format!(
                        "argument {} of `{}` has type {}, expected {}",
                        i + 1,
                        p,
                        ty,
                        expected
                    )));
                }
            }
            Ok(())
        }
        Formula::Top => Ok(()),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            well_formed(sig, ctx, a)?;
            well_formed(sig, ctx, b)
        }
        Formula::Forall(_, t, b) | Formula::Exists(_, t, b) => {
            ctx.push(t.clone());
            let r = well_formed(sig, ctx, b);
            ctx.pop();
            r
        }
        Formula::Later(a) => well_formed(sig, ctx, a),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AtomClass {
    pub first_order: bool,
    pub guarded: bool,
    pub simple: bool,
}

/// Computes the atom flags; `ctx` holds the types of the bound variables in
/// scope (innermost last).
pub fn classify_atom(
    sig: &dyn SymbolTable,
    ctx: &[SimpleType],
    a: &Formula,
) -> Result<AtomClass, LogicError> {
    match a {
        Formula::Top => Ok(AtomClass {
            first_order: true,
            guarded: true,
            simple: true,
        }),
        Formula::Atom(p, args) => {
            let pred_fo = sig.pred_type(p).map_or(false, |t| t.is_first_order());
            let first_order = pred_fo && args.iter().all(|t| first_order_term(ctx, t));
            let guarded = args.iter().all(|t| is_guarded(sig, t));
            let simple = args.iter().all(|t| !t.has_fix());
            Ok(AtomClass {
                first_order,
                guarded,
                simple,
            })
        }
        _ => Err(LogicError::NotAnAtom),
    }
}

/// All variables occurring in `t` have base type.
fn first_order_term(ctx: &[SimpleType], t: &Term) -> bool {
    let n = ctx.len();
    t.loose_vars()
        .iter()
        .all(|&i| i < n && ctx[n - 1 - i].is_base())
}

/// The eight logics of the cube: first- or higher-order atoms, Horn or
/// hereditary Harrop goals, with or without fixed-point terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LogicId {
    pub higher_order: bool,
    pub hereditary: bool,
    pub fix: bool,
}

impl LogicId {
    pub const COFOHC: LogicId = LogicId {
        higher_order: false,
        hereditary: false,
        fix: false,
    };
    pub const COFOHH: LogicId = LogicId {
        higher_order: false,
        hereditary: true,
        fix: false,
    };
    pub const COHOHC: LogicId = LogicId {
        higher_order: true,
        hereditary: false,
        fix: false,
    };
    pub const COHOHH: LogicId = LogicId {
        higher_order: true,
        hereditary: true,
        fix: false,
    };

    pub fn with_fix(self) -> LogicId {
        LogicId { fix: true, ..self }
    }

    pub fn all() -> Vec<LogicId> {
        let mut v = Vec::new();
        for fix in [false, true] {
            for higher_order in [false, true] {
                for hereditary in [false, true] {
                    v.push(LogicId {
                        higher_order,
                        hereditary,
                        fix,
                    });
                }
            }
        }
        v
    }

    /// Reachability along the arrows of the cube.
    pub fn le(self, other: LogicId) -> bool {
        (!self.higher_order || other.higher_order)
            && (!self.hereditary || other.hereditary)
            && (!self.fix || other.fix)
    }

    /// Whether an atom of the given class is admitted by this logic.
    pub fn admits(self, class: AtomClass) -> bool {
        (self.higher_order || class.first_order)
            && if self.fix {
                class.guarded
            } else {
                class.simple
            }
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "co{}{}{}",
            if self.higher_order { "ho" } else { "fo" },
            if self.hereditary { "hh" } else { "hc" },
            if self.fix { "_fix" } else { "" }
        )
    }
}

impl FromStr for LogicId {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<LogicId, LogicError> {
        LogicId::all()
            .into_iter()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| LogicError::UnknownLogic(s.to_string()))
    }
}

fn atom_ok(sig: &dyn SymbolTable, ctx: &[SimpleType], logic: LogicId, a: &Formula) -> bool {
    classify_atom(sig, ctx, a).map_or(false, |c| logic.admits(c))
}

/// D-formula membership for `logic`.
pub fn is_d_formula(
    sig: &dyn SymbolTable,
    ctx: &mut Vec<SimpleType>,
    logic: LogicId,
    phi: &Formula,
) -> bool {
    match phi {
        Formula::Atom(..) | Formula::Top => atom_ok(sig, ctx, logic, phi),
        Formula::Imp(g, d) => is_g_formula(sig, ctx, logic, g) && is_d_formula(sig, ctx, logic, d),
        Formula::And(a, b) => is_d_formula(sig, ctx, logic, a) && is_d_formula(sig, ctx, logic, b),
        Formula::Forall(_, t, b) => {
            ctx.push(t.clone());
            let r = is_d_formula(sig, ctx, logic, b);
            ctx.pop();
            r
        }
        _ => false,
    }
}

/// G-formula membership for `logic`.
pub fn is_g_formula(
    sig: &dyn SymbolTable,
    ctx: &mut Vec<SimpleType>,
    logic: LogicId,
    phi: &Formula,
) -> bool {
    match phi {
        Formula::Atom(..) | Formula::Top => atom_ok(sig, ctx, logic, phi),
        Formula::And(a, b) | Formula::Or(a, b) => {
            is_g_formula(sig, ctx, logic, a) && is_g_formula(sig, ctx, logic, b)
        }
        Formula::Exists(_, t, b) => {
            ctx.push(t.clone());
            let r = is_g_formula(sig, ctx, logic, b);
            ctx.pop();
            r
        }
        Formula::Imp(d, g) if logic.hereditary => {
            is_d_formula(sig, ctx, logic, d) && is_g_formula(sig, ctx, logic, g)
        }
        Formula::Forall(_, t, b) if logic.hereditary => {
            ctx.push(t.clone());
            let r = is_g_formula(sig, ctx, logic, b);
            ctx.pop();
            r
        }
        _ => false,
    }
}

/// A formula that is both a D- and a G-formula of `logic`.
pub fn is_coinduction_goal(sig: &dyn SymbolTable, logic: LogicId, phi: &Formula) -> bool {
    let mut ctx = Vec::new();
    is_d_formula(sig, &mut ctx, logic, phi) && is_g_formula(sig, &mut ctx, logic, phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logic_names_round_trip() {
        for l in LogicId::all() {
            assert_eq!(l.to_string().parse::<LogicId>().unwrap(), l);
        }
        assert_eq!(LogicId::COHOHH.with_fix().to_string(), "cohohh_fix");
    }

    #[test]
    fn cube_order() {
        assert!(LogicId::COFOHC.le(LogicId::COHOHH.with_fix()));
        assert!(!LogicId::COFOHH.le(LogicId::COHOHC));
    }
}
