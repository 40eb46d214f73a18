use std::collections::HashSet;
use std::sync::Arc;

use super::term::Term;
use super::KernelError;

pub const DEFAULT_FUEL: usize = 10_000;

/// Remaining reduction steps, shared across nested calls.
#[derive(Clone, Copy, Debug)]
pub struct Fuel(pub usize);

impl Fuel {
    pub fn tick(&mut self) -> Result<(), KernelError> {
        if self.0 == 0 {
            return Err(KernelError::FuelExhausted);
        }
        self.0 -= 1;
        Ok(())
    }
}

/// Weak head normal form: contracts head β- and fix-redexes until the head
/// is a variable, constant, metavariable or an unapplied abstraction.
pub fn whnf(m: &Term, fuel: usize) -> Result<Term, KernelError> {
    let mut f = Fuel(fuel);
    whnf_with(m, &mut f)
}

pub fn whnf_with(m: &Term, fuel: &mut Fuel) -> Result<Term, KernelError> {
    let mut cur = m.clone();
    loop {
        match step_head(&cur) {
            Some(next) => {
                fuel.tick()?;
                cur = next;
            }
            None => return Ok(cur),
        }
    }
}

/// One head reduction step, if the term has a head redex.
pub fn step_head(m: &Term) -> Option<Term> {
    let (head, args) = m.spine();
    match head {
        Term::Lam(_, _, body) if !args.is_empty() => {
            let reduced = body.instantiate(args[0]);
            Some(Term::apps(reduced, args[1..].iter().map(|a| (*a).clone())))
        }
        Term::Fix(_, _, body) => {
            let unfolded = body.instantiate(head);
            Some(Term::apps(unfolded, args.into_iter().cloned()))
        }
        _ => None,
    }
}

/// Result of the conversion semi-decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conv {
    Yes,
    No,
    Unknown,
}

impl Conv {
    fn and(self, other: Conv) -> Conv {
        match (self, other) {
            (Conv::No, _) | (_, Conv::No) => Conv::No,
            (Conv::Unknown, _) | (_, Conv::Unknown) => Conv::Unknown,
            _ => Conv::Yes,
        }
    }
}

/// Decides `m ≃ n` by comparing weak head normal forms and descending into
/// arguments. Pairs already under comparison are assumed equal, so rational
/// unfoldings close with `Yes`.
pub fn convertible(m: &Term, n: &Term, fuel: usize) -> Conv {
    let mut cx = ConvCx {
        fuel: Fuel(fuel),
        visited: HashSet::new(),
    };
    cx.go(m, n, 0)
}

struct ConvCx {
    fuel: Fuel,
    visited: HashSet<(usize, Term, Term)>,
}

impl ConvCx {
    fn go(&mut self, m: &Term, n: &Term, depth: usize) -> Conv {
        if m == n {
            return Conv::Yes;
        }
        if !self.visited.insert((depth, m.clone(), n.clone())) {
            return Conv::Yes;
        }
        let (m, n) = match (whnf_with(m, &mut self.fuel), whnf_with(n, &mut self.fuel)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Conv::Unknown,
        };
        if m == n {
            return Conv::Yes;
        }
        match (&m, &n) {
            (Term::Lam(_, t1, b1), Term::Lam(_, t2, b2)) => {
                if t1 != t2 {
                    return Conv::No;
                }
                self.go(b1, b2, depth + 1)
            }
            (Term::Lam(..), _) | (_, Term::Lam(..)) => Conv::No,
            _ => {
                let (h1, a1) = m.spine();
                let (h2, a2) = n.spine();
                if h1 != h2 || a1.len() != a2.len() {
                    return Conv::No;
                }
                if self.fuel.tick().is_err() {
                    return Conv::Unknown;
                }
                let mut acc = Conv::Yes;
                for (x, y) in a1.iter().zip(a2.iter()) {
                    acc = acc.and(self.go(x, y, depth));
                    if acc == Conv::No {
                        break;
                    }
                }
                acc
            }
        }
    }
}

/// Fully unfolds head redexes and then the arguments, down to `depth`
/// levels of application spines. Used for diagnostics and tests.
pub fn unfold_to_depth(m: &Term, depth: usize, fuel: usize) -> Result<Term, KernelError> {
    let mut f = Fuel(fuel);
    unfold_rec(m, depth, &mut f)
}

fn unfold_rec(m: &Term, depth: usize, fuel: &mut Fuel) -> Result<Term, KernelError> {
    if depth == 0 {
        return Ok(m.clone());
    }
    let w = whnf_with(m, fuel)?;
    let (h, args) = w.spine();
    let mut out = h.clone();
    for a in args {
        out = Term::App(Arc::new(out), Arc::new(unfold_rec(a, depth - 1, fuel)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::types::SimpleType;

    fn c(n: &str) -> Term {
        Term::cnst(n)
    }

    #[test]
    fn from_fun_zero_unfolds_to_scons() {
        let t = Term::app(crate::kernel::from_fun(), c("0"));
        let r = whnf(&t, DEFAULT_FUEL).unwrap();
        let expected = Term::apps(
            c("scons"),
            [
                c("0"),
                Term::app(crate::kernel::from_fun(), Term::app(c("s"), c("0"))),
            ],
        );
        assert_eq!(r, expected);
    }

    #[test]
    fn beta_identity() {
        let t = Term::app(Term::lam("x", SimpleType::Base, Term::Var(0)), c("0"));
        assert_eq!(whnf(&t, 10).unwrap(), c("0"));
    }

    #[test]
    fn self_loop_exhausts_fuel() {
        let t = Term::fix("x", SimpleType::Base, Term::Var(0));
        assert!(matches!(whnf(&t, 100), Err(KernelError::FuelExhausted)));
    }

    #[test]
    fn conversion_examples() {
        assert_eq!(
            convertible(&c("0"), &Term::app(c("s"), c("0")), 100),
            Conv::No
        );
        let fx = Term::fix("x", SimpleType::Base, Term::app(c("s"), Term::Var(0)));
        let sfx = Term::app(c("s"), fx.clone());
        assert_eq!(convertible(&fx, &sfx, 100), Conv::Yes);
        assert_eq!(convertible(&sfx, &fx, 100), Conv::Yes);
    }
}
