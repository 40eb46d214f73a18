//! Name-preserving printer for terms, formulae and source files.

use std::collections::HashSet;

use crate::kernel::{Signature, SimpleType, Sym, Term};
use crate::logic::Formula;

use super::syntax::SourceFile;

const RESERVED: &[&str] = &["fix", "forall", "exists", "true", "later", "i", "o"];

/// Prints terms and formulae with binder names chosen to avoid clashes with
/// constants, abbreviations and names already in scope. Closed subterms that
/// are α-equal to an abbreviation print as its name.
pub struct Printer<'a> {
    defs: &'a [(Sym, Term)],
    reserved: HashSet<String>,
}

impl<'a> Printer<'a> {
    pub fn new(
        sig: &Signature,
        defs: &'a [(Sym, Term)],
        extra: &[(Sym, SimpleType)],
    ) -> Printer<'a> {
        let mut reserved: HashSet<String> = RESERVED.iter().map(|s| s.to_string()).collect();
        reserved.extend(sig.consts.keys().map(|k| k.to_string()));
        reserved.extend(sig.preds.keys().map(|k| k.to_string()));
        reserved.extend(defs.iter().map(|(n, _)| n.to_string()));
        reserved.extend(extra.iter().map(|(n, _)| n.to_string()));
        Printer { defs, reserved }
    }

    /// Picks a binder name based on `hint` that is neither reserved nor in
    /// scope.
    pub fn fresh(&self, hint: &str, scope: &[String]) -> String {
        let base: String = hint
            .trim_end_matches(|c: char| c.is_ascii_digit())
            .to_string();
        let base = if base.is_empty() {
            "x".to_string()
        } else {
            base
        };
        let taken = |n: &str| self.reserved.contains(n) || scope.iter().any(|s| s == n);
        if !taken(hint) && !hint.is_empty() {
            return hint.to_string();
        }
        (1..)
            .map(|k| format!("{}{}", base, k))
            .find(|n| !taken(n))
            .unwrap()
    }

    pub fn term(&self, t: &Term, scope: &mut Vec<String>) -> String {
        let mut out = String::new();
        self.term_prec(t, scope, 0, &mut out);
        out
    }

    fn fold_def(&self, t: &Term) -> Option<&Sym> {
        if matches!(t, Term::Const(_) | Term::Var(_) | Term::Meta(_)) || !t.is_closed() {
            return None;
        }
        self.defs.iter().find(|(_, d)| d == t).map(|(n, _)| n)
    }

    fn term_prec(&self, t: &Term, scope: &mut Vec<String>, prec: u8, out: &mut String) {
        if let Some(n) = self.fold_def(t) {
            out.push_str(n);
            return;
        }
        match t {
            Term::Var(i) => match scope.len().checked_sub(i + 1) {
                Some(k) => out.push_str(&scope[k]),
                None => out.push_str(&format!("#{}", i)),
            },
            Term::Const(c) => out.push_str(c),
            Term::Meta(m) => out.push_str(&format!("?{}", m)),
            Term::App(f, a) => {
                if prec >= 2 {
                    out.push('(');
                }
                self.term_prec(f, scope, 1, out);
                out.push(' ');
                self.term_prec(a, scope, 2, out);
                if prec >= 2 {
                    out.push(')');
                }
            }
            Term::Lam(h, ty, body) | Term::Fix(h, ty, body) => {
                if prec >= 1 {
                    out.push('(');
                }
                let name = self.fresh(h.as_str(), scope);
                out.push_str(if matches!(t, Term::Fix(..)) {
                    "fix "
                } else {
                    "\\"
                });
                out.push_str(&name);
                if !ty.is_base() {
                    out.push_str(&format!(" : {}", ty));
                }
                out.push_str(". ");
                scope.push(name);
                self.term_prec(body, scope, 0, out);
                scope.pop();
                if prec >= 1 {
                    out.push(')');
                }
            }
        }
    }

    pub fn formula(&self, f: &Formula, scope: &mut Vec<String>) -> String {
        let mut out = String::new();
        self.formula_prec(f, scope, 0, &mut out);
        out
    }

    fn formula_prec(&self, f: &Formula, scope: &mut Vec<String>, prec: u8, out: &mut String) {
        match f {
            Formula::Atom(p, args) => {
                out.push_str(p);
                for a in args {
                    out.push(' ');
                    self.term_prec(a, scope, 2, out);
                }
            }
            Formula::Top => out.push_str("true"),
            Formula::Imp(a, b) => self.binary(a, b, " => ", 0, scope, prec, out),
            Formula::Or(a, b) => self.binary(a, b, " \\/ ", 1, scope, prec, out),
            Formula::And(a, b) => self.binary(a, b, " /\\ ", 2, scope, prec, out),
            Formula::Later(a) => {
                out.push_str("later ");
                self.formula_prec(a, scope, 3, out);
            }
            Formula::Forall(..) | Formula::Exists(..) => {
                if prec > 0 {
                    out.push('(');
                }
                let is_all = matches!(f, Formula::Forall(..));
                let (h, ty, mut body) = match f {
                    Formula::Forall(h, t, b) | Formula::Exists(h, t, b) => (h, t, b),
                    _ => unreachable!(),
                };
                out.push_str(if is_all { "forall" } else { "exists" });
                let pushed = scope.len();
                let name = self.fresh(h.as_str(), scope);
                out.push(' ');
                out.push_str(&name);
                scope.push(name);
                loop {
                    let next = match (&**body, is_all) {
                        (Formula::Forall(h2, t2, b2), true)
                        | (Formula::Exists(h2, t2, b2), false)
                            if t2 == ty =>
                        {
                            Some((h2, b2))
                        }
                        _ => None,
                    };
                    let Some((h2, b2)) = next else { break };
                    let n2 = self.fresh(h2.as_str(), scope);
                    out.push(' ');
                    out.push_str(&n2);
                    scope.push(n2);
                    body = b2;
                }
                if !ty.is_base() {
                    out.push_str(&format!(" : {}", ty));
                }
                out.push_str(". ");
                self.formula_prec(body, scope, 0, out);
                scope.truncate(pushed);
                if prec > 0 {
                    out.push(')');
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn binary(
        &self,
        a: &Formula,
        b: &Formula,
        op: &str,
        level: u8,
        scope: &mut Vec<String>,
        prec: u8,
        out: &mut String,
    ) {
        if prec > level {
            out.push('(');
        }
        self.formula_prec(a, scope, level + 1, out);
        out.push_str(op);
        self.formula_prec(b, scope, level, out);
        if prec > level {
            out.push(')');
        }
    }
}

/// Prints a closed formula over a signature.
pub fn show_formula(
    sig: &Signature,
    defs: &[(Sym, Term)],
    extra: &[(Sym, SimpleType)],
    f: &Formula,
) -> String {
    Printer::new(sig, defs, extra).formula(f, &mut Vec::new())
}

/// Prints a closed term over a signature.
pub fn show_term(
    sig: &Signature,
    defs: &[(Sym, Term)],
    extra: &[(Sym, SimpleType)],
    t: &Term,
) -> String {
    Printer::new(sig, defs, extra).term(t, &mut Vec::new())
}

/// Prints a source file in the syntax accepted by `parse_program`.
pub fn print_source(src: &SourceFile) -> String {
    let sig = &src.program.sig;
    let mut out = String::new();
    if let Some(l) = src.logic {
        out.push_str(&format!("logic {}.\n", l));
    }
    for (n, t) in &sig.consts {
        out.push_str(&format!("const {} : {}.\n", n, t));
    }
    for (n, t) in &sig.preds {
        out.push_str(&format!("pred {} : {}.\n", n, t));
    }
    for (k, (n, t)) in src.defs.iter().enumerate() {
        let p = Printer::new(sig, &src.defs[..k], &[]);
        let ty = crate::kernel::infer_type(sig, &crate::kernel::Context::new(), t)
            .map(|t| t.to_string())
            .unwrap_or_else(|_| "i".into());
        out.push_str(&format!(
            "def {} : {} = {}.\n",
            n,
            ty,
            p.term(t, &mut Vec::new())
        ));
    }
    let p = Printer::new(sig, &src.defs, &[]);
    for c in &src.program.clauses {
        out.push_str(&format!(
            "clause {}: {}.\n",
            c.name,
            p.formula(&c.formula, &mut Vec::new())
        ));
    }
    for (n, f) in &src.lemmas {
        out.push_str(&format!(
            "lemma {}: {}.\n",
            n,
            p.formula(f, &mut Vec::new())
        ));
    }
    for (n, f) in &src.goals {
        out.push_str(&format!("goal {}: {}.\n", n, p.formula(f, &mut Vec::new())));
    }
    out
}
