//! Proof files: an s-expression format for CUP and iFOL▷ derivations, with a
//! JSON mirror. Formulae and terms are embedded as strings in the surface
//! syntax, printed and parsed against the source file's signature extended
//! by the sequent's eigenvariables. Node fields appear in the fixed order
//! rule, conclusion, payload, children.

use lexpr::Value;
use serde_json::json;

use crate::ifol::{INode, IPayload, IRule, ISequent, IfolProof};
use crate::kernel::{SimpleType, Sym, Term};
use crate::logic::{Clause, Formula, LogicId};
use crate::prover::{CupProof, Judgment, Payload, ProofNode, Rule, Selected, Sequent};

use super::print::Printer;
use super::syntax::{parse_formula, parse_term, parse_type, ParseError, SourceFile};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofIoError {
    #[error("malformed s-expression: {0}")]
    Sexp(String),
    #[error("expected {0}")]
    Shape(String),
    #[error("in `{text}`: {err}")]
    Syntax { text: String, err: ParseError },
}

const WIDTH: usize = 100;

/// Renders a value over several lines: a list that does not fit keeps its
/// head on the first line and puts each further element on its own line.
pub fn pretty(v: &Value) -> String {
    let mut out = String::new();
    pretty_into(v, 0, &mut out);
    out
}

fn flat(v: &Value) -> String {
    lexpr::to_string(v).expect("printing to a string cannot fail")
}

fn pretty_into(v: &Value, indent: usize, out: &mut String) {
    let s = flat(v);
    let items = match v.to_vec() {
        Some(items) if indent + s.len() > WIDTH && items.len() > 1 => items,
        _ => {
            out.push_str(&s);
            return;
        }
    };
    out.push('(');
    pretty_into(&items[0], indent + 1, out);
    for it in &items[1..] {
        out.push('\n');
        out.push_str(&" ".repeat(indent + 2));
        pretty_into(it, indent + 2, out);
    }
    out.push(')');
}

fn sym(s: &str) -> Value {
    Value::symbol(s)
}

fn list(items: Vec<Value>) -> Value {
    Value::list(items)
}

fn tagged(tag: &str, rest: Vec<Value>) -> Value {
    let mut v = vec![sym(tag)];
    v.extend(rest);
    list(v)
}

/// Formula and term printing in the scope of a sequent.
struct Show<'a> {
    src: &'a SourceFile,
}

impl Show<'_> {
    fn formula(&self, eigen: &[(Sym, SimpleType)], f: &Formula) -> Value {
        let p = Printer::new(&self.src.program.sig, &self.src.defs, eigen);
        Value::string(p.formula(f, &mut Vec::new()))
    }

    fn term(&self, eigen: &[(Sym, SimpleType)], t: &Term) -> Value {
        let p = Printer::new(&self.src.program.sig, &self.src.defs, eigen);
        Value::string(p.term(t, &mut Vec::new()))
    }

    fn formula_str(&self, eigen: &[(Sym, SimpleType)], f: &Formula) -> String {
        Printer::new(&self.src.program.sig, &self.src.defs, eigen).formula(f, &mut Vec::new())
    }

    fn term_str(&self, eigen: &[(Sym, SimpleType)], t: &Term) -> String {
        Printer::new(&self.src.program.sig, &self.src.defs, eigen).term(t, &mut Vec::new())
    }
}

fn eigen_sexp(eigen: &[(Sym, SimpleType)]) -> Value {
    tagged(
        "eigen",
        eigen
            .iter()
            .map(|(c, t)| list(vec![Value::string(&**c), Value::string(t.to_string())]))
            .collect(),
    )
}

fn eigen_json(eigen: &[(Sym, SimpleType)]) -> serde_json::Value {
    eigen
        .iter()
        .map(|(c, t)| json!({"name": &**c, "type": t.to_string()}))
        .collect()
}

// CUP proofs

fn cup_node_sexp(sh: &Show, n: &ProofNode) -> Value {
    let s = &n.conclusion;
    let e = &s.eigen;
    let judgment = match &s.judgment {
        Judgment::Co(f) => tagged("co", vec![sh.formula(e, f)]),
        Judgment::Guarded(f) => tagged("guarded", vec![sh.formula(e, f)]),
        Judgment::Goal(f) => tagged("goal", vec![sh.formula(e, f)]),
        Judgment::Focus(d, a) => tagged("focus", vec![sh.formula(e, d), sh.formula(e, a)]),
    };
    let conclusion = tagged(
        "conclusion",
        vec![
            eigen_sexp(e),
            tagged("ext", s.ext.iter().map(|f| sh.formula(e, f)).collect()),
            tagged("delta", s.delta.iter().map(|f| sh.formula(e, f)).collect()),
            judgment,
        ],
    );
    let payload = match &n.payload {
        Payload::None => sym("none"),
        Payload::Select(Selected::Clause(c)) => tagged("clause", vec![Value::string(&**c)]),
        Payload::Select(Selected::Hyp(i)) => tagged("hyp", vec![Value::from(*i as u64)]),
        Payload::Select(Selected::Ext(i)) => tagged("ext", vec![Value::from(*i as u64)]),
        Payload::Witness(t) => tagged("witness", vec![sh.term(e, t)]),
        Payload::Fresh(c) => tagged("fresh", vec![Value::string(&**c)]),
    };
    tagged(
        "node",
        vec![
            tagged("rule", vec![sym(n.rule.name())]),
            conclusion,
            tagged("payload", vec![payload]),
            tagged(
                "children",
                n.children.iter().map(|c| cup_node_sexp(sh, c)).collect(),
            ),
        ],
    )
}

pub fn cup_proof_sexp(src: &SourceFile, p: &CupProof) -> Value {
    let sh = Show { src };
    let uses = p.uses.iter().map(|c| {
        tagged(
            "clause",
            vec![Value::string(&*c.name), sh.formula(&[], &c.formula)],
        )
    });
    tagged(
        "cup-proof",
        vec![
            tagged("name", vec![Value::string(&*p.name)]),
            tagged("logic", vec![sym(&p.logic.to_string())]),
            tagged("uses", uses.collect()),
            cup_node_sexp(&sh, &p.root),
        ],
    )
}

/// Proofs as consecutive s-expressions, one blank line apart.
pub fn write_cup_proofs(src: &SourceFile, proofs: &[CupProof]) -> String {
    proofs
        .iter()
        .map(|p| pretty(&cup_proof_sexp(src, p)) + "\n")
        .collect::<Vec<_>>()
        .join("\n")
}

fn cup_node_json(sh: &Show, n: &ProofNode) -> serde_json::Value {
    let s = &n.conclusion;
    let e = &s.eigen;
    let judgment = match &s.judgment {
        Judgment::Co(f) => json!({"kind": "co", "formula": sh.formula_str(e, f)}),
        Judgment::Guarded(f) => json!({"kind": "guarded", "formula": sh.formula_str(e, f)}),
        Judgment::Goal(f) => json!({"kind": "goal", "formula": sh.formula_str(e, f)}),
        Judgment::Focus(d, a) => {
            json!({"kind": "focus", "clause": sh.formula_str(e, d), "atom": sh.formula_str(e, a)})
        }
    };
    let payload = match &n.payload {
        Payload::None => serde_json::Value::Null,
        Payload::Select(Selected::Clause(c)) => json!({"clause": &**c}),
        Payload::Select(Selected::Hyp(i)) => json!({"hyp": i}),
        Payload::Select(Selected::Ext(i)) => json!({"ext": i}),
        Payload::Witness(t) => json!({"witness": sh.term_str(e, t)}),
        Payload::Fresh(c) => json!({"fresh": &**c}),
    };
    json!({
        "rule": n.rule.name(),
        "conclusion": {
            "eigen": eigen_json(e),
            "ext": s.ext.iter().map(|f| sh.formula_str(e, f)).collect::<Vec<_>>(),
            "delta": s.delta.iter().map(|f| sh.formula_str(e, f)).collect::<Vec<_>>(),
            "judgment": judgment,
        },
        "payload": payload,
        "children": n.children.iter().map(|c| cup_node_json(sh, c)).collect::<Vec<_>>(),
    })
}

pub fn cup_proof_json(src: &SourceFile, p: &CupProof) -> serde_json::Value {
    let sh = Show { src };
    json!({
        "format": "cup-proof",
        "name": &*p.name,
        "logic": p.logic.to_string(),
        "uses": p.uses.iter().map(|c| json!({"name": &*c.name, "formula": sh.formula_str(&[], &c.formula)})).collect::<Vec<_>>(),
        "root": cup_node_json(&sh, &p.root),
    })
}

// iFOL▷ proofs

fn ifol_node_sexp(sh: &Show, n: &INode) -> Value {
    let s = &n.conclusion;
    let e = &s.eigen;
    let conclusion = tagged(
        "conclusion",
        vec![
            eigen_sexp(e),
            tagged("delta", s.delta.iter().map(|f| sh.formula(e, f)).collect()),
            tagged("goal", vec![sh.formula(e, &s.goal)]),
        ],
    );
    let payload = match &n.payload {
        IPayload::None => sym("none"),
        IPayload::Index(i) => tagged("index", vec![Value::from(*i as u64)]),
        IPayload::Witness(t) => tagged("witness", vec![sh.term(e, t)]),
        IPayload::Fresh(c) => tagged("fresh", vec![Value::string(&**c)]),
        IPayload::Open(i, c) => tagged("open", vec![Value::from(*i as u64), Value::string(&**c)]),
    };
    tagged(
        "node",
        vec![
            tagged("rule", vec![sym(n.rule.name())]),
            conclusion,
            tagged("payload", vec![payload]),
            tagged(
                "children",
                n.children.iter().map(|c| ifol_node_sexp(sh, c)).collect(),
            ),
        ],
    )
}

pub fn ifol_proof_sexp(src: &SourceFile, p: &IfolProof) -> Value {
    let sh = Show { src };
    tagged(
        "ifol-proof",
        vec![
            tagged("name", vec![Value::string(&*p.name)]),
            ifol_node_sexp(&sh, &p.root),
        ],
    )
}

pub fn write_ifol_proofs(src: &SourceFile, proofs: &[IfolProof]) -> String {
    proofs
        .iter()
        .map(|p| pretty(&ifol_proof_sexp(src, p)) + "\n")
        .collect::<Vec<_>>()
        .join("\n")
}

fn ifol_node_json(sh: &Show, n: &INode) -> serde_json::Value {
    let s = &n.conclusion;
    let e = &s.eigen;
    let payload = match &n.payload {
        IPayload::None => serde_json::Value::Null,
        IPayload::Index(i) => json!({"index": i}),
        IPayload::Witness(t) => json!({"witness": sh.term_str(e, t)}),
        IPayload::Fresh(c) => json!({"fresh": &**c}),
        IPayload::Open(i, c) => json!({"open": i, "fresh": &**c}),
    };
    json!({
        "rule": n.rule.name(),
        "conclusion": {
            "eigen": eigen_json(e),
            "delta": s.delta.iter().map(|f| sh.formula_str(e, f)).collect::<Vec<_>>(),
            "goal": sh.formula_str(e, &s.goal),
        },
        "payload": payload,
        "children": n.children.iter().map(|c| ifol_node_json(sh, c)).collect::<Vec<_>>(),
    })
}

pub fn ifol_proof_json(src: &SourceFile, p: &IfolProof) -> serde_json::Value {
    json!({"format": "ifol-proof", "name": &*p.name, "root": ifol_node_json(&Show { src }, &p.root)})
}

// Reading

fn shape<T>(what: &str) -> Result<T, ProofIoError> {
    Err(ProofIoError::Shape(what.to_string()))
}

/// The elements after the head of `(tag …)`.
fn fields<'v>(v: &'v Value, tag: &str) -> Result<Vec<&'v Value>, ProofIoError> {
    let items = v.to_ref_vec().unwrap_or_default();
    match items.split_first() {
        Some((h, rest)) if h.as_symbol() == Some(tag) => Ok(rest.to_vec()),
        _ => shape(&format!("`({} …)`, found {}", tag, flat(v))),
    }
}

fn one<'v>(v: &'v Value, tag: &str) -> Result<&'v Value, ProofIoError> {
    match fields(v, tag)?.as_slice() {
        [x] => Ok(x),
        _ => shape(&format!("exactly one element in `({} …)`", tag)),
    }
}

fn string(v: &Value) -> Result<&str, ProofIoError> {
    v.as_str()
        .map_or_else(|| shape(&format!("a string, found {}", flat(v))), Ok)
}

fn index(v: &Value) -> Result<usize, ProofIoError> {
    v.as_u64().map_or_else(
        || shape(&format!("an index, found {}", flat(v))),
        |i| Ok(i as usize),
    )
}

fn head(v: &Value) -> Option<&str> {
    v.as_symbol().or_else(|| {
        v.list_iter()
            .and_then(|mut it| it.next())
            .and_then(Value::as_symbol)
    })
}

struct Reader<'a> {
    src: &'a SourceFile,
}

impl Reader<'_> {
    fn formula(&self, eigen: &[(Sym, SimpleType)], v: &Value) -> Result<Formula, ProofIoError> {
        let text = string(v)?;
        let sig = self.src.program.sig.with(eigen);
        parse_formula(text, &sig, &self.src.defs, &[]).map_err(|err| ProofIoError::Syntax {
            text: text.to_string(),
            err,
        })
    }

    fn term(&self, eigen: &[(Sym, SimpleType)], v: &Value) -> Result<Term, ProofIoError> {
        let text = string(v)?;
        let sig = self.src.program.sig.with(eigen);
        parse_term(text, &sig, &self.src.defs, &[]).map_err(|err| ProofIoError::Syntax {
            text: text.to_string(),
            err,
        })
    }

    fn formulas(
        &self,
        eigen: &[(Sym, SimpleType)],
        v: &Value,
        tag: &str,
    ) -> Result<Vec<Formula>, ProofIoError> {
        fields(v, tag)?
            .into_iter()
            .map(|f| self.formula(eigen, f))
            .collect()
    }

    fn eigen(&self, v: &Value) -> Result<Vec<(Sym, SimpleType)>, ProofIoError> {
        let mut out = Vec::new();
        for e in fields(v, "eigen")? {
            let pair = e.to_ref_vec().unwrap_or_default();
            let [name, ty] = pair.as_slice() else {
                return shape("an eigenvariable `(\"name\" \"type\")`");
            };
            let ty = parse_type(string(ty)?).map_err(|err| ProofIoError::Syntax {
                text: flat(ty),
                err,
            })?;
            out.push((Sym::from(string(name)?), ty));
        }
        Ok(out)
    }

    /// Splits `(node (rule R) (conclusion …) (payload P) (children …))`.
    fn node_parts<'v>(
        &self,
        v: &'v Value,
    ) -> Result<(&'v str, &'v Value, &'v Value, Vec<&'v Value>), ProofIoError> {
        let parts = fields(v, "node")?;
        let [rule, conclusion, payload, children] = parts.as_slice() else {
            return shape("`(node (rule …) (conclusion …) (payload …) (children …))`");
        };
        let rule = one(rule, "rule")?
            .as_symbol()
            .map_or_else(|| shape("a rule name"), Ok)?;
        Ok((
            rule,
            *conclusion,
            one(payload, "payload")?,
            fields(children, "children")?,
        ))
    }

    fn cup_node(&self, v: &Value) -> Result<ProofNode, ProofIoError> {
        let (rule, conclusion, payload, children) = self.node_parts(v)?;
        let rule = Rule::from_name(rule)
            .map_or_else(|| shape(&format!("a CUP rule, found `{}`", rule)), Ok)?;
        let parts = fields(conclusion, "conclusion")?;
        let [eigen, ext, delta, judgment] = parts.as_slice() else {
            return shape("`(conclusion (eigen …) (ext …) (delta …) judgment)`");
        };
        let eigen = self.eigen(eigen)?;
        let e = &eigen;
        let judgment = match head(judgment) {
            Some("co") => Judgment::Co(self.formula(e, one(judgment, "co")?)?),
            Some("guarded") => Judgment::Guarded(self.formula(e, one(judgment, "guarded")?)?),
            Some("goal") => Judgment::Goal(self.formula(e, one(judgment, "goal")?)?),
            Some("focus") => match fields(judgment, "focus")?.as_slice() {
                [d, a] => Judgment::Focus(self.formula(e, d)?, self.formula(e, a)?),
                _ => return shape("`(focus clause atom)`"),
            },
            _ => return shape("a judgment `co`, `guarded`, `goal` or `focus`"),
        };
        let payload = match head(payload) {
            Some("none") if payload.is_symbol() => Payload::None,
            Some("clause") => Payload::Select(Selected::Clause(Sym::from(string(one(
                payload, "clause",
            )?)?))),
            Some("hyp") => Payload::Select(Selected::Hyp(index(one(payload, "hyp")?)?)),
            Some("ext") => Payload::Select(Selected::Ext(index(one(payload, "ext")?)?)),
            Some("witness") => Payload::Witness(self.term(e, one(payload, "witness")?)?),
            Some("fresh") => Payload::Fresh(Sym::from(string(one(payload, "fresh")?)?)),
            _ => return shape("a payload"),
        };
        let conclusion = Sequent {
            ext: self.formulas(e, ext, "ext")?,
            delta: self.formulas(e, delta, "delta")?,
            eigen,
            judgment,
        };
        let children = children
            .into_iter()
            .map(|c| self.cup_node(c))
            .collect::<Result<_, _>>()?;
        Ok(ProofNode {
            rule,
            conclusion,
            payload,
            children,
        })
    }

    fn cup_proof(&self, v: &Value) -> Result<CupProof, ProofIoError> {
        let parts = fields(v, "cup-proof")?;
        let [name, logic, uses, root] = parts.as_slice() else {
            return shape("`(cup-proof (name …) (logic …) (uses …) (node …))`");
        };
        let logic_name = one(logic, "logic")?
            .as_symbol()
            .map_or_else(|| shape("a logic name"), Ok)?;
        let logic: LogicId = logic_name
            .parse()
            .map_or_else(|_| shape("a known logic"), Ok)?;
        let mut clauses = Vec::new();
        for u in fields(uses, "uses")? {
            match fields(u, "clause")?.as_slice() {
                [n, f] => clauses.push(Clause {
                    name: Sym::from(string(n)?),
                    formula: self.formula(&[], f)?,
                }),
                _ => return shape("`(clause \"name\" \"formula\")`"),
            }
        }
        Ok(CupProof {
            name: Sym::from(string(one(name, "name")?)?),
            logic,
            uses: clauses,
            root: self.cup_node(root)?,
        })
    }

    fn ifol_node(&self, v: &Value) -> Result<INode, ProofIoError> {
        let (rule, conclusion, payload, children) = self.node_parts(v)?;
        let rule = IRule::from_name(rule)
            .map_or_else(|| shape(&format!("an iFOL rule, found `{}`", rule)), Ok)?;
        let parts = fields(conclusion, "conclusion")?;
        let [eigen, delta, goal] = parts.as_slice() else {
            return shape("`(conclusion (eigen …) (delta …) (goal …))`");
        };
        let eigen = self.eigen(eigen)?;
        let e = &eigen;
        let payload = match head(payload) {
            Some("none") if payload.is_symbol() => IPayload::None,
            Some("index") => IPayload::Index(index(one(payload, "index")?)?),
            Some("witness") => IPayload::Witness(self.term(e, one(payload, "witness")?)?),
            Some("fresh") => IPayload::Fresh(Sym::from(string(one(payload, "fresh")?)?)),
            Some("open") => match fields(payload, "open")?.as_slice() {
                [i, c] => IPayload::Open(index(i)?, Sym::from(string(c)?)),
                _ => return shape("`(open index \"name\")`"),
            },
            _ => return shape("a payload"),
        };
        let conclusion = ISequent {
            delta: self.formulas(e, delta, "delta")?,
            goal: self.formula(e, one(goal, "goal")?)?,
            eigen,
        };
        let children = children
            .into_iter()
            .map(|c| self.ifol_node(c))
            .collect::<Result<_, _>>()?;
        Ok(INode {
            rule,
            conclusion,
            payload,
            children,
        })
    }

    fn ifol_proof(&self, v: &Value) -> Result<IfolProof, ProofIoError> {
        match fields(v, "ifol-proof")?.as_slice() {
            [name, root] => Ok(IfolProof {
                name: Sym::from(string(one(name, "name")?)?),
                root: self.ifol_node(root)?,
            }),
            _ => shape("`(ifol-proof (name …) (node …))`"),
        }
    }
}

fn values(text: &str) -> Result<Vec<Value>, ProofIoError> {
    let mut p = lexpr::Parser::from_str(text);
    let mut out = Vec::new();
    while let Some(v) = p
        .next_value()
        .map_err(|e| ProofIoError::Sexp(e.to_string()))?
    {
        out.push(v);
    }
    Ok(out)
}

pub fn read_cup_proofs(src: &SourceFile, text: &str) -> Result<Vec<CupProof>, ProofIoError> {
    let r = Reader { src };
    values(text)?.iter().map(|v| r.cup_proof(v)).collect()
}

pub fn read_ifol_proofs(src: &SourceFile, text: &str) -> Result<Vec<IfolProof>, ProofIoError> {
    let r = Reader { src };
    values(text)?.iter().map(|v| r.ifol_proof(v)).collect()
}
