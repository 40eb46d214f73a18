//! The command-line front end: golden outputs for the corpus, exit codes,
//! and round trips through the printed formats.

mod common;

use std::path::PathBuf;
use std::process::Command;

use common::{corpus, corpus_proofs, CORPUS};
use cup::cli::print::print_source;
use cup::cli::proof_io::{read_cup_proofs, read_ifol_proofs, write_cup_proofs, write_ifol_proofs};
use cup::cli::syntax::parse_program;
use cup::ifol::translate;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn expected(name: &str) -> String {
    std::fs::read_to_string(dir().join("expected").join(name)).unwrap()
}

/// Runs the binary in the corpus directory; returns exit code, stdout and
/// stderr.
fn cup(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cup"))
        .args(args)
        .current_dir(dir())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn scratch(name: &str, contents: &str) -> String {
    let p = std::env::temp_dir().join(format!("cup-cli-{}-{}", std::process::id(), name));
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn corpus_pipeline_matches_expected_outputs() {
    for name in CORPUS {
        let file = format!("{}.clp", name);
        let (code, proofs, err) = cup(&["prove", &file]);
        assert_eq!((code, err.as_str()), (0, ""), "{}", name);
        assert_eq!(proofs, expected(&format!("{}.proof", name)), "{}", name);
        let pf = scratch(&format!("{}.proof", name), &proofs);
        let (code, ok, _) = cup(&["check", &file, &pf]);
        assert_eq!(code, 0, "{}", name);
        assert!(ok.lines().all(|l| l.starts_with("OK ")), "{}", name);
        let (code, ifol, _) = cup(&["translate", &file, &pf]);
        assert_eq!(code, 0, "{}", name);
        assert_eq!(ifol, expected(&format!("{}.ifol", name)), "{}", name);
        let ipf = scratch(&format!("{}.ifol", name), &ifol);
        assert_eq!(cup(&["check-ifol", &file, &ipf]).0, 0, "{}", name);
        let (code, inv, _) = cup(&["invariant", &file, &pf, "--depth", "4", "--len", "4"]);
        assert_eq!(code, 0, "{}: {}", name, inv);
    }
}

#[test]
fn colp_table_matches_expected_outputs() {
    let text = expected("table1.txt");
    let mut lines = text.lines().peekable();
    let mut n = 0;
    while let Some(cmd) = lines.next() {
        let rest = cmd.strip_prefix("colp ").unwrap();
        let (file, q) = rest.split_once(" --query ").unwrap();
        let mut want = String::new();
        while let Some(l) = lines.next_if(|l| l.starts_with("  ")) {
            want.push_str(&l[2..]);
            want.push('\n');
        }
        let (code, got, _) = cup(&["colp", file, "--query", q.trim_matches('"')]);
        assert_eq!(got, want, "{}", cmd);
        assert_eq!(code, if want == "FAIL\n" { 1 } else { 0 }, "{}", cmd);
        n += 1;
    }
    assert_eq!(n, 6);
}

#[test]
fn documented_invocations() {
    let (code, out, _) = cup(&[
        "prove",
        "eq_odd_even.clp",
        "--goal",
        "eq (odd Int)",
        "--logic",
        "cofohc",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("(cup-proof"));
    assert_eq!(
        cup(&["colp", "gamma2.clp", "--query", "p a"]),
        (1, "FAIL\n".into(), String::new())
    );
    assert_eq!(
        cup(&["model", "gamma1.clp", "--atom", "p a", "--depth", "4"]),
        (0, "MEMBER\n".into(), String::new())
    );
    assert_eq!(
        cup(&["model", "gamma3.clp", "--atom", "p a", "--depth", "2"]).1,
        "NOT-MEMBER\n"
    );
    let (code, out, _) = cup(&[
        "prove",
        "gamma2.clp",
        "--goal",
        "p_a",
        "--logic",
        "cofohc",
        "--depth",
        "12",
    ]);
    assert_eq!((code, out.as_str()), (1, "EXHAUSTED\n"));
    let (code, out, _) = cup(&[
        "prove",
        "gamma2.clp",
        "--goal",
        "p a",
        "--lemma",
        "forall x. p x",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("(cup-proof").count(), 2);
}

#[test]
fn exit_codes_and_error_lines() {
    let input_errors: [&[&str]; 5] = [
        &["prove", "missing.clp"],
        &["frobnicate"],
        &["model", "gamma1.clp", "--atom", "p zz", "--depth", "2"],
        &["prove", "gamma1.clp", "--logic", "nonsense"],
        &["check", "gamma1.clp", "gamma1.clp"],
    ];
    for args in input_errors {
        let (code, _, err) = cup(args);
        assert_eq!(code, 2, "{:?}", args);
        assert_eq!(err.lines().count(), 1, "{:?}", args);
        assert!(err.starts_with("error["), "{:?}: {}", args, err);
    }
    let src = corpus("eq_odd_even");
    let mut proof = corpus_proofs(&src).remove(0);
    proof.root.children[0].payload = cup::prover::Payload::Select(cup::prover::Selected::Hyp(0));
    let bad = scratch("bad.proof", &write_cup_proofs(&src, &[proof]));
    let (code, _, err) = cup(&["check", "eq_odd_even.clp", &bad]);
    assert_eq!(code, 1);
    assert!(
        err.starts_with("error[check]: eq_odd_int: rule error at 0:"),
        "{}",
        err
    );
}

#[test]
fn corrupted_invariant_is_reported() {
    let (_, proofs, _) = cup(&["prove", "from.clp"]);
    let pf = scratch("from-inv.proof", &proofs);
    let (code, out, _) = cup(&["invariant", "from.clp", &pf, "--theta0", "c=0"]);
    assert_eq!((code, out.as_str()), (0, "OK from_all\nOK from_zero\n"));
    let (code, _, err) = cup(&["invariant", "from.clp", &pf, "--theta0", "c"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error[usage]"));
}

#[test]
fn json_mirrors_proof_fields() {
    let (code, out, _) = cup(&["--json", "prove", "gamma1.clp"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let root = &v[0]["root"];
    let keys: Vec<&str> = root
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(keys, ["rule", "conclusion", "payload", "children"]);
    assert_eq!(root["rule"], "Cofix");
    assert_eq!(root["conclusion"]["judgment"]["formula"], "p a");
    let (_, out, _) = cup(&["--json", "colp", "gamma3.clp", "--query", "p x"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["answer"]["x"], "fix x. f x");
}

#[test]
fn sources_round_trip_through_the_printer() {
    for name in CORPUS {
        let src = corpus(name);
        let again = parse_program(&print_source(&src)).unwrap();
        assert_eq!(again, src, "{}", name);
    }
    assert_eq!(parse_program("").unwrap().program.clauses.len(), 0);
}

#[test]
fn proofs_round_trip_through_the_printer() {
    for name in CORPUS {
        let src = corpus(name);
        let proofs = corpus_proofs(&src);
        assert_eq!(
            read_cup_proofs(&src, &write_cup_proofs(&src, &proofs)).unwrap(),
            proofs,
            "{}",
            name
        );
        let ifol: Vec<_> = proofs
            .iter()
            .map(|p| translate(&src.program, p).unwrap())
            .collect();
        assert_eq!(
            read_ifol_proofs(&src, &write_ifol_proofs(&src, &ifol)).unwrap(),
            ifol,
            "{}",
            name
        );
    }
}

#[test]
fn fuzzed_proofs_round_trip() {
    let mut n = 0;
    for seed in 0..300 {
        let Some((src, proof)) = common::props::search_checks(seed).unwrap() else {
            continue;
        };
        let text = write_cup_proofs(&src, std::slice::from_ref(&proof));
        assert_eq!(
            read_cup_proofs(&src, &text).unwrap(),
            vec![proof],
            "seed {}",
            seed
        );
        n += 1;
    }
    assert!(n >= 50, "{} proofs", n);
}
