//! Lexer and recursive-descent parser for `.clp` sources, formulae and terms.

use std::sync::Arc;

use crate::kernel::{infer_type, sym, Context, Hint, PropType, SimpleType, Sym, SymbolTable, Term};
use crate::logic::{Formula, LogicError, LogicId, Program};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: expected {expected}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("{line}:{col}: unbound variable `{name}`")]
    Unbound {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: {msg}")]
    Semantic {
        line: usize,
        col: usize,
        msg: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Dot,
    Colon,
    Comma,
    Eq,
    Arrow,
    Imp,
    And,
    Or,
    Lambda,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{}`", s),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Imp => "`=>`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::Lambda => "`\\`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const KEYWORDS: &[&str] = &["fix", "forall", "exists", "true", "later"];

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let tok = match two.as_str() {
            "->" => Some((Tok::Arrow, 2)),
            "=>" => Some((Tok::Imp, 2)),
            "/\\" => Some((Tok::And, 2)),
            "\\/" => Some((Tok::Or, 2)),
            _ => None,
        };
        if let Some((t, n)) = tok {
            out.push(Spanned {
                tok: t,
                line: l0,
                col: c0,
            });
            advance(n, &mut i);
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            '\\' => Some(Tok::Lambda),
            _ => None,
        };
        if let Some(t) = single {
            out.push(Spanned {
                tok: t,
                line: l0,
                col: c0,
            });
            advance(1, &mut i);
            continue;
        }
        if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
            continue;
        }
        return Err(ParseError::Syntax {
            line: l0,
            col: c0,
            expected: format!("a token, found `{}`", c),
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// A parsed source file: the program plus abbreviations and directives.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceFile {
    pub program: Program,
    pub defs: Vec<(Sym, Term)>,
    pub logic: Option<LogicId>,
    pub lemmas: Vec<(Sym, Formula)>,
    pub goals: Vec<(Sym, Formula)>,
}

/// Symbols visible while parsing: a signature, optional extra constants
/// (eigenvariables) and abbreviations.
pub struct Scope<'a> {
    pub sig: &'a dyn SymbolTable,
    pub defs: &'a [(Sym, Term)],
}

struct Parser<'a> {
    toks: Arc<[Spanned]>,
    pos: usize,
    scope: Scope<'a>,
    bound: Vec<Sym>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, scope: Scope<'a>, bound: Vec<Sym>) -> Result<Parser<'a>, ParseError> {
        Ok(Parser {
            toks: lex(text)?.into(),
            pos: 0,
            scope,
            bound,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &str) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax {
            line,
            col,
            expected: format!("{}, found {}", expected, self.peek().describe()),
        })
    }

    fn semantic<T>(&self, msg: String) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Semantic { line, col, msg })
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(&t.describe())
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("an identifier"),
        }
    }

    // Types

    fn ty(&mut self) -> Result<SimpleType, ParseError> {
        let (args, cod_is_o) = self.arrow_chain()?;
        if cod_is_o {
            return self.err("a term type (`o` is only allowed in predicate types)");
        }
        Ok(args)
    }

    /// Parses `T -> … -> T`; reports whether the final codomain is `o`.
    fn arrow_chain(&mut self) -> Result<(SimpleType, bool), ParseError> {
        let mut parts = Vec::new();
        let mut last_o = false;
        loop {
            if self.is_kw("o") {
                self.bump();
                last_o = true;
                parts.push(SimpleType::Base);
                break;
            }
            parts.push(self.ty_atom()?);
            if *self.peek() == Tok::Arrow {
                self.bump();
            } else {
                break;
            }
        }
        if last_o {
            let n = parts.len() - 1;
            parts.truncate(n);
            let t = parts
                .into_iter()
                .rev()
                .fold(SimpleType::Base, |acc, a| SimpleType::arrow(a, acc));
            return Ok((t, true));
        }
        let last = parts.pop().unwrap();
        Ok((
            parts
                .into_iter()
                .rev()
                .fold(last, |acc, a| SimpleType::arrow(a, acc)),
            false,
        ))
    }

    fn ty_atom(&mut self) -> Result<SimpleType, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == "i" => {
                self.bump();
                Ok(SimpleType::Base)
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => self.err("a type"),
        }
    }

    fn pred_ty(&mut self) -> Result<PropType, ParseError> {
        let (t, is_o) = self.arrow_chain()?;
        if !is_o {
            return self.err("a predicate type ending in `o`");
        }
        Ok(PropType::new(t.uncurry().0))
    }

    // Terms

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.is_kw("fix") || *self.peek() == Tok::Lambda {
            return self.binder_term();
        }
        let mut t = self.term_atom()?;
        loop {
            if self.starts_term_atom() {
                let a = self.term_atom()?;
                t = Term::app(t, a);
            } else if self.is_kw("fix") || *self.peek() == Tok::Lambda {
                let a = self.binder_term()?;
                t = Term::app(t, a);
                break;
            } else {
                break;
            }
        }
        Ok(t)
    }

    fn starts_term_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen => true,
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()),
            _ => false,
        }
    }

    fn binder_term(&mut self) -> Result<Term, ParseError> {
        let is_fix = self.is_kw("fix");
        self.bump();
        let name = self.ident()?;
        let ty = if *self.peek() == Tok::Colon {
            self.bump();
            self.ty()?
        } else {
            SimpleType::Base
        };
        self.expect(Tok::Dot)?;
        self.bound.push(sym(&name));
        let body = self.term();
        self.bound.pop();
        let body = Arc::new(body?);
        Ok(if is_fix {
            Term::Fix(Hint::new(&name), ty, body)
        } else {
            Term::Lam(Hint::new(&name), ty, body)
        })
    }

    fn term_atom(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let t = self.term()?;
            self.expect(Tok::RParen)?;
            return Ok(t);
        }
        let (line, col) = self.here();
        let name = self.ident()?;
        self.resolve(&name, line, col)
    }

    fn resolve(&self, name: &str, line: usize, col: usize) -> Result<Term, ParseError> {
        if let Some(i) = self.bound.iter().rev().position(|b| &**b == name) {
            return Ok(Term::Var(i));
        }
        if let Some((_, t)) = self.scope.defs.iter().find(|(n, _)| &**n == name) {
            return Ok(t.shift(self.bound.len() as isize, 0));
        }
        if self.scope.sig.const_type(name).is_some() {
            return Ok(Term::cnst(name));
        }
        Err(ParseError::Unbound {
            line,
            col,
            name: name.to_string(),
        })
    }

    // Formulae

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.conj()?;
        if *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.disj()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::And {
            self.bump();
            let rhs = self.conj()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.is_kw("forall") || self.is_kw("exists") {
            return self.quantifier();
        }
        if self.is_kw("later") {
            self.bump();
            return Ok(Formula::later(self.unary()?));
        }
        if self.is_kw("true") {
            self.bump();
            return Ok(Formula::Top);
        }
        if *self.peek() == Tok::LParen {
            self.bump();
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        self.atom()
    }

    fn quantifier(&mut self) -> Result<Formula, ParseError> {
        let is_all = self.is_kw("forall");
        self.bump();
        let mut names = vec![self.ident()?];
        while let Tok::Ident(s) = self.peek() {
            if KEYWORDS.contains(&s.as_str()) {
                break;
            }
            names.push(self.ident()?);
        }
        let ty = if *self.peek() == Tok::Colon {
            self.bump();
            self.ty()?
        } else {
            SimpleType::Base
        };
        self.expect(Tok::Dot)?;
        let n = names.len();
        for x in &names {
            self.bound.push(sym(x));
        }
        let body = self.formula();
        self.bound.truncate(self.bound.len() - n);
        let mut f = body?;
        for x in names.iter().rev() {
            f = if is_all {
                Formula::forall(x, ty.clone(), f)
            } else {
                Formula::exists(x, ty.clone(), f)
            };
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let (line, col) = self.here();
        let p = match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => s,
            _ => return self.err("a formula"),
        };
        let Some(pt) = self.scope.sig.pred_type(&p) else {
            if self.bound.iter().any(|b| &**b == p) || self.scope.sig.const_type(&p).is_some() {
                return self.err("a predicate");
            }
            return Err(ParseError::Semantic {
                line,
                col,
                msg: format!("unknown predicate `{}`", p),
            });
        };
        let arity = pt.args.len();
        self.bump();
        let mut args = Vec::new();
        while self.starts_term_atom() || self.is_kw("fix") || *self.peek() == Tok::Lambda {
            if self.starts_term_atom() {
                args.push(self.term_atom()?);
            } else {
                args.push(self.binder_term()?);
                break;
            }
        }
        if args.len() != arity {
            return Err(ParseError::Semantic {
                line,
                col,
                msg: format!(
                    "predicate `{}` expects {} arguments, got {}",
                    p,
                    arity,
                    args.len()
                ),
            });
        }
        Ok(Formula::Atom(sym(&p), args))
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }
}

fn check_formula(
    sig: &dyn SymbolTable,
    bound: &[SimpleType],
    f: &Formula,
) -> Result<(), LogicError> {
    crate::logic::well_formed(sig, &mut bound.to_vec(), f)
}

/// Parses a standalone formula. `bound` lists variables already in scope
/// (outermost first) with their types.
pub fn parse_formula(
    text: &str,
    sig: &dyn SymbolTable,
    defs: &[(Sym, Term)],
    bound: &[(Sym, SimpleType)],
) -> Result<Formula, ParseError> {
    let names = bound.iter().map(|(n, _)| n.clone()).collect();
    let mut p = Parser::new(text, Scope { sig, defs }, names)?;
    let f = p.formula()?;
    if !p.at_eof() {
        return p.err("end of formula");
    }
    let types: Vec<SimpleType> = bound.iter().map(|(_, t)| t.clone()).collect();
    check_formula(sig, &types, &f).map_err(|e| ParseError::Semantic {
        line: 1,
        col: 1,
        msg: e.to_string(),
    })?;
    Ok(f)
}

/// Parses a standalone term and checks that it is well typed.
pub fn parse_term(
    text: &str,
    sig: &dyn SymbolTable,
    defs: &[(Sym, Term)],
    bound: &[(Sym, SimpleType)],
) -> Result<Term, ParseError> {
    let names = bound.iter().map(|(n, _)| n.clone()).collect();
    let mut p = Parser::new(text, Scope { sig, defs }, names)?;
    let t = p.term()?;
    if !p.at_eof() {
        return p.err("end of term");
    }
    let ctx = Context::from_entries(bound.to_vec());
    infer_type(sig, &ctx, &t).map_err(|e| ParseError::Semantic {
        line: 1,
        col: 1,
        msg: e.to_string(),
    })?;
    Ok(t)
}

/// Parses a simple type.
pub fn parse_type(text: &str) -> Result<SimpleType, ParseError> {
    let sig = crate::kernel::Signature::new();
    let mut p = Parser::new(
        text,
        Scope {
            sig: &sig,
            defs: &[],
        },
        Vec::new(),
    )?;
    let t = p.ty()?;
    if !p.at_eof() {
        return p.err("end of type");
    }
    Ok(t)
}

/// Parses a `.clp` source file.
pub fn parse_program(text: &str) -> Result<SourceFile, ParseError> {
    let toks: Arc<[Spanned]> = lex(text)?.into();
    let mut src = SourceFile::default();
    let mut pos = 0;
    loop {
        let empty = crate::kernel::Signature::new();
        let (sig_ptr, defs_ptr): (&dyn SymbolTable, &[(Sym, Term)]) = (&empty, &[]);
        let mut p = Parser {
            toks: toks.clone(),
            pos,
            scope: Scope {
                sig: sig_ptr,
                defs: defs_ptr,
            },
            bound: Vec::new(),
        };
        if p.at_eof() {
            break;
        }
        let (line, col) = p.here();
        let kw = match p.peek().clone() {
            Tok::Ident(s) => s,
            _ => return p.err("a declaration"),
        };
        p.bump();
        match kw.as_str() {
            "const" | "pred" => {
                let mut names = vec![p.ident()?];
                while *p.peek() == Tok::Comma {
                    p.bump();
                    names.push(p.ident()?);
                }
                p.expect(Tok::Colon)?;
                if kw == "const" {
                    let t = p.ty()?;
                    for n in names {
                        src.program.sig.add_const(sym(&n), t.clone()).map_err(|e| {
                            ParseError::Semantic {
                                line,
                                col,
                                msg: e.to_string(),
                            }
                        })?;
                    }
                } else {
                    let t = p.pred_ty()?;
                    for n in names {
                        src.program.sig.add_pred(sym(&n), t.clone()).map_err(|e| {
                            ParseError::Semantic {
                                line,
                                col,
                                msg: e.to_string(),
                            }
                        })?;
                    }
                }
                p.expect(Tok::Dot)?;
                pos = p.pos;
            }
            "logic" => {
                let name = p.ident()?;
                let l = name
                    .parse::<LogicId>()
                    .or_else(|e| p.semantic(e.to_string()))?;
                src.logic = Some(l);
                p.expect(Tok::Dot)?;
                pos = p.pos;
            }
            "def" | "clause" | "goal" | "lemma" => {
                let name = p.ident()?;
                let annot = if kw == "def" && *p.peek() == Tok::Colon {
                    p.bump();
                    Some(p.ty()?)
                } else {
                    None
                };
                if kw == "def" {
                    p.expect(Tok::Eq)?;
                } else {
                    p.expect(Tok::Colon)?;
                }
                let start = p.pos;
                let mut q = Parser {
                    toks: toks.clone(),
                    pos: start,
                    scope: Scope {
                        sig: &src.program.sig,
                        defs: &src.defs,
                    },
                    bound: Vec::new(),
                };
                let (bl, bc) = q.here();
                if kw == "def" {
                    let t = q.term()?;
                    let ty = infer_type(&src.program.sig, &Context::new(), &t).map_err(|e| {
                        ParseError::Semantic {
                            line: bl,
                            col: bc,
                            msg: e.to_string(),
                        }
                    })?;
                    if let Some(a) = annot {
                        if a != ty {
                            return q
                                .semantic(format!("`{}` has type {}, annotated {}", name, ty, a));
                        }
                    }
                    q.expect(Tok::Dot)?;
                    pos = q.pos;
                    if src.defs.iter().any(|(n, _)| &**n == name) {
                        return Err(ParseError::Semantic {
                            line,
                            col,
                            msg: format!("duplicate definition `{}`", name),
                        });
                    }
                    src.defs.push((sym(&name), t));
                } else {
                    let f = q.formula()?;
                    q.expect(Tok::Dot)?;
                    pos = q.pos;
                    check_formula(&src.program.sig, &[], &f).map_err(|e| ParseError::Semantic {
                        line: bl,
                        col: bc,
                        msg: e.to_string(),
                    })?;
                    let n = sym(&name);
                    let dup = |v: &[(Sym, Formula)]| v.iter().any(|(m, _)| *m == n);
                    match kw.as_str() {
                        "clause" => {
                            src.program
                                .add_clause(n, f)
                                .map_err(|e| ParseError::Semantic {
                                    line,
                                    col,
                                    msg: e.to_string(),
                                })?
                        }
                        "goal" if !dup(&src.goals) => src.goals.push((n, f)),
                        "lemma" if !dup(&src.lemmas) => src.lemmas.push((n, f)),
                        _ => {
                            return Err(ParseError::Semantic {
                                line,
                                col,
                                msg: format!("duplicate name `{}`", name),
                            })
                        }
                    }
                }
            }
            _ => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    expected: format!(
                        "`const`, `pred`, `def`, `clause`, `lemma`, `goal` or `logic`, found `{}`",
                        kw
                    ),
                })
            }
        }
    }
    Ok(src)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FROM: &str =
        "const 0 : i.\nconst s : i -> i.\nconst scons : i -> i -> i.\npred from : i -> i -> o.\n\
                        clause k_from: forall x y. from (s x) y => from x (scons x y).\n";

    #[test]
    fn from_clause_is_hg() {
        let src = parse_program(FROM).unwrap();
        assert_eq!(src.program.clauses.len(), 1);
        let hc =
            crate::logic::normalize_to_horn(&[src.program.clauses[0].formula.clone()]).unwrap();
        assert!(hc.len() == 1 && hc[0].is_hg(&src.program.sig));
    }

    #[test]
    fn empty_source() {
        let src = parse_program("").unwrap();
        assert!(src.program.clauses.is_empty() && src.goals.is_empty() && src.logic.is_none());
    }

    #[test]
    fn unbound_variable_is_reported() {
        let err = parse_program("const a : i.\npred p : i -> o.\nclause bad: p x.\n").unwrap_err();
        assert!(
            matches!(err, ParseError::Unbound { line: 3, ref name, .. } if name == "x"),
            "{:?}",
            err
        );
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_program("const a : i.\npred p : i -> o\nclause c: p a.\n").unwrap_err();
        assert!(
            matches!(
                err,
                ParseError::Syntax {
                    line: 3,
                    col: 1,
                    ..
                }
            ),
            "{:?}",
            err
        );
    }

    #[test]
    fn terms_and_types() {
        let src = parse_program(FROM).unwrap();
        let t = parse_term(
            "fix f : i -> i. \\x. scons x (f (s x))",
            &src.program.sig,
            &[],
            &[],
        )
        .unwrap();
        assert!(matches!(t, Term::Fix(_, ref ty, _) if *ty == SimpleType::first_order(1)));
        assert_eq!(
            parse_type("i -> i -> i").unwrap(),
            SimpleType::first_order(2)
        );
        assert!(parse_type("i -> o").is_err());
    }
}
