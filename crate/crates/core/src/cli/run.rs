//! Command dispatch for the `cup` binary.
//!
//! Exit codes: 0 on success, 1 when a search, check or model query fails,
//! 2 on malformed input. Errors are reported as a single line
//! `error[category]: message` on stderr.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::herbrand::{
    check_invariant, default_theta0, extract_invariant, interpret_guarded, model_member,
    HerbrandError, KleisliSubst, Verdict,
};
use crate::ifol::{check_ifol_proof, translate};
use crate::kernel::{SimpleType, Sym, Term};
use crate::logic::{is_coinduction_goal, Formula, LogicId};
use crate::prover::{
    colp_solve, prove_with_lemma, search, search_goal, ColpAnswer, CupProof, SearchConfig,
    SearchError,
};

use super::print::Printer;
use super::proof_io::{
    cup_proof_json, ifol_proof_json, read_cup_proofs, read_ifol_proofs, write_cup_proofs,
    write_ifol_proofs,
};
use super::prove_source;
use super::syntax::{parse_formula, parse_program, parse_term, SourceFile};

#[derive(Parser, Debug)]
#[command(
    name = "cup",
    version,
    about = "Coinductive uniform proofs for Horn-clause theories"
)]
struct Cli {
    /// Print structured JSON instead of the text formats.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for CUP proofs of a goal, or of every goal in the file.
    Prove {
        file: PathBuf,
        /// A goal or lemma name from the file, or a formula.
        #[arg(long)]
        goal: Option<String>,
        /// Overrides the file's `logic` directive.
        #[arg(long)]
        logic: Option<String>,
        /// A lemma name from the file, or a formula, proven first and then
        /// admitted as a clause.
        #[arg(long)]
        lemma: Option<String>,
        /// Bound on decide steps for iterative deepening.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Check CUP proofs against the program.
    Check { file: PathBuf, proof: PathBuf },
    /// Translate CUP proofs into the later-modality logic.
    Translate { file: PathBuf, proof: PathBuf },
    /// Check later-modality proofs.
    CheckIfol { file: PathBuf, proof: PathBuf },
    /// Coinductive SLD resolution; identifiers that are not declared act as
    /// query variables.
    Colp {
        file: PathBuf,
        #[arg(long)]
        query: String,
        /// Resolution steps per derivation.
        #[arg(long, default_value_t = 64)]
        bound: usize,
    },
    /// Membership of a ground atom in the truncated greatest model.
    Model {
        file: PathBuf,
        #[arg(long)]
        atom: String,
        #[arg(long)]
        depth: usize,
    },
    /// Extract and check the invariant of each proof.
    Invariant {
        file: PathBuf,
        proof: PathBuf,
        /// Values of eigenvariables, e.g. `c=0,d=s 0`; the rest default to
        /// inhabitants of their types.
        #[arg(long)]
        theta0: Option<String>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        len: usize,
    },
}

/// An outcome that ends the command with a nonzero exit code.
enum Failure {
    /// Malformed input; exit code 2.
    Input(&'static str, String),
    /// A search, check or query that did not succeed; exit code 1.
    Failed(&'static str, String),
    /// A negative answer already printed on stdout; exit code 1.
    Negative,
}

type Outcome = Result<(), Failure>;

/// Runs one command line, writing results to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e);
                return 0;
            }
            let msg = e.to_string();
            let line = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "error[usage]: {}", line);
            return 2;
        }
    };
    let mut cx = Cx {
        json: cli.json,
        out,
    };
    match cx.dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Negative) => 1,
        Err(Failure::Failed(cat, msg)) => {
            let _ = writeln!(err, "error[{}]: {}", cat, msg);
            1
        }
        Err(Failure::Input(cat, msg)) => {
            let _ = writeln!(err, "error[{}]: {}", cat, msg);
            2
        }
    }
}

struct Cx<'a> {
    json: bool,
    out: &'a mut dyn Write,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Input("io", format!("{}: {}", path.display(), e)))
}

fn load(path: &Path) -> Result<SourceFile, Failure> {
    parse_program(&read(path)?)
        .map_err(|e| Failure::Input("parse", format!("{}:{}", path.display(), e)))
}

fn formula_arg(src: &SourceFile, text: &str) -> Result<Formula, Failure> {
    parse_formula(text, &src.program.sig, &src.defs, &[])
        .map_err(|e| Failure::Input("parse", format!("`{}`: {}", text, e)))
}

/// A directive name from the file, or a formula named `fallback`.
fn named_formula(src: &SourceFile, text: &str, fallback: &str) -> Result<(Sym, Formula), Failure> {
    let named = src
        .goals
        .iter()
        .chain(&src.lemmas)
        .find(|(n, _)| &**n == text);
    match named {
        Some((n, f)) => Ok((n.clone(), f.clone())),
        None => Ok((Sym::from(fallback), formula_arg(src, text)?)),
    }
}

fn cup_proofs(src: &SourceFile, path: &Path) -> Result<Vec<CupProof>, Failure> {
    read_cup_proofs(src, &read(path)?)
        .map_err(|e| Failure::Input("parse", format!("{}: {}", path.display(), e)))
}

fn herbrand_failure(e: HerbrandError) -> Failure {
    match e {
        HerbrandError::NotGround(_)
        | HerbrandError::NotGuarded(_)
        | HerbrandError::NotFirstOrder(_) => Failure::Input("input", e.to_string()),
        e => Failure::Failed("model", e.to_string()),
    }
}

impl Cx<'_> {
    fn emit(&mut self, text: &str) -> Outcome {
        write!(self.out, "{}", text).map_err(|e| Failure::Failed("io", e.to_string()))
    }

    fn emit_json(&mut self, v: serde_json::Value) -> Outcome {
        let s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
        self.emit(&(s + "\n"))
    }

    fn dispatch(&mut self, cmd: Command) -> Outcome {
        match cmd {
            Command::Prove {
                file,
                goal,
                logic,
                lemma,
                depth,
            } => self.prove(&file, goal, logic, lemma, depth),
            Command::Check { file, proof } => self.check(&file, &proof),
            Command::Translate { file, proof } => self.translate(&file, &proof),
            Command::CheckIfol { file, proof } => self.check_ifol(&file, &proof),
            Command::Colp { file, query, bound } => self.colp(&file, &query, bound),
            Command::Model { file, atom, depth } => self.model(&file, &atom, depth),
            Command::Invariant {
                file,
                proof,
                theta0,
                depth,
                len,
            } => self.invariant(&file, &proof, theta0.as_deref(), depth, len),
        }
    }

    fn prove(
        &mut self,
        file: &Path,
        goal: Option<String>,
        logic: Option<String>,
        lemma: Option<String>,
        depth: Option<usize>,
    ) -> Outcome {
        let src = load(file)?;
        let logic = match logic {
            Some(l) => l
                .parse::<LogicId>()
                .map_err(|e| Failure::Input("usage", e.to_string()))?,
            None => src.logic.ok_or_else(|| {
                Failure::Input("usage", "no `logic` directive; pass --logic".into())
            })?,
        };
        let mut cfg = SearchConfig::new(logic);
        if let Some(d) = depth {
            cfg = cfg.with_depth(d);
        }
        let lemma = lemma
            .map(|l| named_formula(&src, &l, "lemma"))
            .transpose()?;
        let result = match goal {
            None => {
                let mut s = src.clone();
                if let Some(l) = lemma {
                    s.lemmas = vec![l];
                }
                prove_source(&s, &cfg)
            }
            Some(g) => {
                let (gname, g) = named_formula(&src, &g, "goal")?;
                let r = match &lemma {
                    Some((lname, l)) => {
                        prove_with_lemma(&src.program, lname, l, &g, &cfg).map(|(mut a, b)| {
                            a.name = lname.clone();
                            vec![a, b]
                        })
                    }
                    None if is_coinduction_goal(&src.program.sig, logic, &g) => {
                        search(&src.program, &g, &cfg).map(|p| vec![p])
                    }
                    None => search_goal(&src.program, &g, &cfg).map(|p| vec![p]),
                };
                r.map(|mut ps| {
                    if let Some(last) = ps.last_mut() {
                        last.name = gname;
                    }
                    ps
                })
            }
        };
        match result {
            Ok(proofs) if self.json => self.emit_json(
                proofs
                    .iter()
                    .map(|p| cup_proof_json(&src, p))
                    .collect::<Vec<_>>()
                    .into(),
            ),
            Ok(proofs) => self.emit(&write_cup_proofs(&src, &proofs)),
            Err(e) => self.search_failure(e),
        }
    }

    fn search_failure(&mut self, e: SearchError) -> Outcome {
        match e {
            SearchError::Exhausted(d) => {
                if self.json {
                    self.emit_json(json!({"result": "EXHAUSTED", "depth": d}))?;
                } else {
                    self.emit("EXHAUSTED\n")?;
                }
                Err(Failure::Negative)
            }
            SearchError::Lemma(inner) => match *inner {
                SearchError::Exhausted(_) => self.search_failure(*inner),
                other => Err(Failure::Input("goal", format!("lemma: {}", other))),
            },
            SearchError::IllFormedGoal(m) => Err(Failure::Input("goal", m)),
        }
    }

    /// Prints one `OK name` line (or JSON record) per successful item.
    fn report_ok(&mut self, names: &[Sym]) -> Outcome {
        if self.json {
            self.emit_json(
                names
                    .iter()
                    .map(|n| json!({"proof": &**n, "result": "OK"}))
                    .collect::<Vec<_>>()
                    .into(),
            )
        } else {
            self.emit(
                &names
                    .iter()
                    .map(|n| format!("OK {}\n", n))
                    .collect::<String>(),
            )
        }
    }

    fn check(&mut self, file: &Path, proof: &Path) -> Outcome {
        let src = load(file)?;
        let proofs = cup_proofs(&src, proof)?;
        for p in &proofs {
            crate::prover::check_proof(&src.program, p)
                .map_err(|e| Failure::Failed("check", format!("{}: {}", p.name, e)))?;
        }
        self.report_ok(&proofs.iter().map(|p| p.name.clone()).collect::<Vec<_>>())
    }

    fn translate(&mut self, file: &Path, proof: &Path) -> Outcome {
        let src = load(file)?;
        let mut out = Vec::new();
        for p in &cup_proofs(&src, proof)? {
            out.push(
                translate(&src.program, p)
                    .map_err(|e| Failure::Failed("translate", format!("{}: {}", p.name, e)))?,
            );
        }
        if self.json {
            self.emit_json(
                out.iter()
                    .map(|p| ifol_proof_json(&src, p))
                    .collect::<Vec<_>>()
                    .into(),
            )
        } else {
            self.emit(&write_ifol_proofs(&src, &out))
        }
    }

    fn check_ifol(&mut self, file: &Path, proof: &Path) -> Outcome {
        let src = load(file)?;
        let proofs = read_ifol_proofs(&src, &read(proof)?)
            .map_err(|e| Failure::Input("parse", format!("{}: {}", proof.display(), e)))?;
        for p in &proofs {
            check_ifol_proof(&src.program.sig, &p.root)
                .map_err(|e| Failure::Failed("check", format!("{}: {}", p.name, e)))?;
        }
        self.report_ok(&proofs.iter().map(|p| p.name.clone()).collect::<Vec<_>>())
    }

    fn colp(&mut self, file: &Path, query: &str, bound: usize) -> Outcome {
        let src = load(file)?;
        let vars = query_vars(&src, query);
        let bound_vars: Vec<(Sym, SimpleType)> = vars
            .iter()
            .map(|v| (Sym::from(v.as_str()), SimpleType::Base))
            .collect();
        let mut q = parse_formula(query, &src.program.sig, &src.defs, &bound_vars)
            .map_err(|e| Failure::Input("parse", format!("`{}`: {}", query, e)))?;
        for v in vars.iter().rev() {
            q = Formula::forall(v, SimpleType::Base, q);
        }
        for i in 0..vars.len() {
            let Formula::Forall(_, _, b) = q else {
                unreachable!()
            };
            q = b.instantiate(&Term::Meta(i));
        }
        let answer = colp_solve(&src.program, &q, bound)
            .map_err(|e| Failure::Input("query", e.to_string()))?;
        let ColpAnswer::Answer(sub) = answer else {
            if self.json {
                self.emit_json(json!({"answer": "FAIL"}))?;
            } else {
                self.emit("FAIL\n")?;
            }
            return Err(Failure::Negative);
        };
        let mut lines = Vec::new();
        for (i, v) in vars.iter().enumerate() {
            if let Some(t) = sub.0.get(&i) {
                lines.push((v.clone(), show_answer(&src, &vars, t)));
            }
        }
        if self.json {
            let m: serde_json::Map<String, serde_json::Value> =
                lines.into_iter().map(|(v, t)| (v, t.into())).collect();
            self.emit_json(json!({"answer": m}))
        } else if lines.is_empty() {
            self.emit("id\n")
        } else {
            self.emit(
                &lines
                    .iter()
                    .map(|(v, t)| format!("{} = {}\n", v, t))
                    .collect::<String>(),
            )
        }
    }

    fn model(&mut self, file: &Path, atom: &str, depth: usize) -> Outcome {
        let src = load(file)?;
        let a = formula_arg(&src, atom)?;
        let member = model_member(&src.program, &a, depth).map_err(herbrand_failure)?;
        let word = if member { "MEMBER" } else { "NOT-MEMBER" };
        if self.json {
            self.emit_json(json!({"atom": atom, "depth": depth, "result": word}))?;
        } else {
            self.emit(&format!("{}\n", word))?;
        }
        if member {
            Ok(())
        } else {
            Err(Failure::Negative)
        }
    }

    fn invariant(
        &mut self,
        file: &Path,
        proof: &Path,
        theta0: Option<&str>,
        depth: usize,
        len: usize,
    ) -> Outcome {
        let src = load(file)?;
        let sig = &src.program.sig;
        let mut given = KleisliSubst::new();
        for entry in theta0
            .unwrap_or("")
            .split(',')
            .map(str::trim)
            .filter(|e| !e.is_empty())
        {
            let (name, text) = entry.split_once('=').ok_or_else(|| {
                Failure::Input("usage", format!("`{}` is not of the form name=term", entry))
            })?;
            let t = parse_term(text.trim(), sig, &src.defs, &[])
                .map_err(|e| Failure::Input("parse", format!("`{}`: {}", text.trim(), e)))?;
            given.insert(
                Sym::from(name.trim()),
                interpret_guarded(sig, &t).map_err(herbrand_failure)?,
            );
        }
        let mut results = Vec::new();
        let mut all_ok = true;
        for p in &cup_proofs(&src, proof)? {
            let theta = default_theta0(sig, p, given.clone()).map_err(herbrand_failure)?;
            let inv = extract_invariant(&src.program, p, theta).map_err(herbrand_failure)?;
            let v = check_invariant(&src.program, &inv, depth, len).map_err(herbrand_failure)?;
            all_ok &= v == Verdict::Ok;
            results.push((p.name.clone(), v));
        }
        if self.json {
            let items: Vec<serde_json::Value> = results
                .iter()
                .map(|(n, v)| match v {
                    Verdict::Ok => json!({"proof": &**n, "result": "OK"}),
                    Verdict::Counterexample(x) => {
                        json!({"proof": &**n, "result": "COUNTEREXAMPLE", "atom": x.to_string()})
                    }
                })
                .collect();
            self.emit_json(items.into())?;
        } else {
            for (n, v) in &results {
                match v {
                    Verdict::Ok => self.emit(&format!("OK {}\n", n))?,
                    Verdict::Counterexample(x) => {
                        self.emit(&format!("COUNTEREXAMPLE {}: {}\n", n, x))?
                    }
                }
            }
        }
        if all_ok {
            Ok(())
        } else {
            Err(Failure::Negative)
        }
    }
}

/// Identifiers of the query that are neither declared nor keywords, in
/// order of first occurrence.
fn query_vars(src: &SourceFile, query: &str) -> Vec<String> {
    const KEYWORDS: &[&str] = &["fix", "forall", "exists", "true", "later"];
    let sig = &src.program.sig;
    let mut out: Vec<String> = Vec::new();
    for w in query.split(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '\'')) {
        let declared = sig.consts.contains_key(w)
            || sig.preds.contains_key(w)
            || src.defs.iter().any(|(n, _)| &**n == w);
        if !w.is_empty() && !declared && !KEYWORDS.contains(&w) && !out.iter().any(|o| o == w) {
            out.push(w.to_string());
        }
    }
    out
}

/// Prints an answer binding with query variables shown by name.
fn show_answer(src: &SourceFile, vars: &[String], t: &Term) -> String {
    let named = t.map_metas(&mut |m| {
        Some(Term::cnst(
            &vars.get(m).cloned().unwrap_or_else(|| format!("_G{}", m)),
        ))
    });
    let extra: Vec<(Sym, SimpleType)> = vars
        .iter()
        .filter(|v| named.mentions_const(v))
        .map(|v| (Sym::from(v.as_str()), SimpleType::Base))
        .collect();
    Printer::new(&src.program.sig, &src.defs, &extra).term(&named, &mut Vec::new())
}
