use std::path::{Path, PathBuf};

use opcalc_cli::format::{MatrixDoc, Rational};
use opcalc_cli::{load, run, store, Document, Outcome};
use opcalc_core::exactlin::{Matrix, Scalar, SignRule};
use opcalc_core::operads::builtin_operad;
use opcalc_core::triples::builtin_triple;
use proptest::prelude::*;
use serde_json::Value;

fn opcalc(dir: &Path, args: &[&str]) -> Outcome {
    let mut argv = vec!["opcalc".to_string()];
    for a in args {
        let p = dir.join(a);
        // paths of files created in `dir` are passed absolute
        if a.ends_with(".json") {
            argv.push(p.to_string_lossy().into_owned());
        } else {
            argv.push(a.to_string());
        }
    }
    run(argv)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn edit(dir: &Path, from: &str, to: &str, f: impl FnOnce(&mut Value)) {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(dir.join(from)).unwrap()).unwrap();
    f(&mut v);
    write(dir, to, &serde_json::to_string(&v).unwrap());
}

#[test]
fn builtin_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = opcalc(dir.path(), &["operad", "builtin", "--name", "lie", "--max-arity", "4", "--out", "lie.json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = opcalc(dir.path(), &["operad", "check", "lie.json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.ends_with("result: PASS\n"));
}

#[test]
fn induced_assoc_table() {
    let out = run(["opcalc", "operad", "induced", "--triple", "assoc", "--max-arity", "4", "--json"]);
    assert_eq!(out.code, 0);
    let Document::Report(r) = Document::parse(&out.stdout).unwrap() else { panic!("not a report") };
    assert_eq!(r["data"]["dims"], serde_json::json!([1, 2, 6, 24]));
    assert_eq!(r["holds"], Value::Bool(true));
}

#[test]
fn hh_table() {
    let out = run(["opcalc", "hh", "--vars", "2", "--q-max", "3", "--degree", "4"]);
    assert_eq!(out.code, 0);
    let line = out.stdout.lines().find(|l| l.split_whitespace().collect::<Vec<_>>() == ["2", "2", "1", "1"]);
    assert!(line.is_some(), "{}", out.stdout);
}

#[test]
fn store_load_is_the_identity_on_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let mut docs = Vec::new();
    for name in ["com", "assoc", "lie", "poisson(2)"] {
        let op = builtin_operad(name, 4, SignRule::Koszul).unwrap();
        docs.push(Document::Operad(opcalc_cli::format::OperadDoc::from_operad(&op)));
        docs.push(Document::Sequence(opcalc_cli::format::SequenceDoc::from_sequence(op.seq())));
    }
    for name in ["tensor", "symmetric", "free-lie"] {
        let t = builtin_triple(name, 3, SignRule::Plain).unwrap();
        docs.push(Document::Triple(opcalc_cli::format::TripleDoc::from_triple(&t)));
    }
    let out = opcalc(dir.path(), &["algebra", "free", "--name", "lie", "--gens", "1:2", "--relation", "1:0,1", "--kill", "3", "--out", "alg.json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    docs.push(load(&dir.path().join("alg.json")).unwrap());
    let out = opcalc(dir.path(), &["operad", "check", "--name", "com", "--out", "rep.json"]);
    assert_eq!(out.code, 0);
    docs.push(load(&dir.path().join("rep.json")).unwrap());

    for (i, doc) in docs.iter().enumerate() {
        let path = dir.path().join(format!("doc{i}.json"));
        store(doc, &path).unwrap();
        let back = load(&path).unwrap();
        assert_eq!(&back, doc);
        assert_eq!(back.emit(), std::fs::read_to_string(&path).unwrap());
    }
    // the reloaded operads are the same operads
    let Document::Operad(d) = &docs[2] else { unreachable!() };
    let op = d.to_operad().unwrap();
    assert!(opcalc_core::operads::check_operad_laws(&op).is_empty());
    assert_eq!(op.gamma_tables(), builtin_operad("assoc", 4, SignRule::Koszul).unwrap().gamma_tables());
}

#[test]
fn non_reduced_rational_is_rejected_with_its_path() {
    let dir = tempfile::tempdir().unwrap();
    opcalc(dir.path(), &["operad", "builtin", "--name", "assoc", "--max-arity", "3", "--out", "a.json"]);
    edit(dir.path(), "a.json", "bad.json", |v| v["payload"]["gamma"]["2;1,2"]["rows"][1][0] = "2/4".into());
    let out = opcalc(dir.path(), &["operad", "check", "bad.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("payload.gamma.2;1,2.rows[1][0]"), "{}", out.stderr);
    assert!(out.stderr.contains("2/4"), "{}", out.stderr);
    for bad in ["1/1", "+1", "0/3", "1.5", "-2/-3", " 1"] {
        edit(dir.path(), "a.json", "bad.json", |v| v["payload"]["unit"][0] = bad.into());
        let out = opcalc(dir.path(), &["operad", "check", "bad.json"]);
        assert_eq!(out.code, 2, "{bad}");
        assert!(out.stderr.contains("payload.unit[0]"), "{bad}: {}", out.stderr);
    }
}

#[test]
fn strictness() {
    let dir = tempfile::tempdir().unwrap();
    opcalc(dir.path(), &["operad", "builtin", "--name", "com", "--max-arity", "3", "--out", "c.json"]);
    edit(dir.path(), "c.json", "v2.json", |v| v["version"] = 2.into());
    let out = opcalc(dir.path(), &["operad", "check", "v2.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("version"), "{}", out.stderr);

    edit(dir.path(), "c.json", "extra.json", |v| v["payload"]["sequence"]["extra"] = 1.into());
    let out = opcalc(dir.path(), &["operad", "check", "extra.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("payload.sequence.extra"), "{}", out.stderr);

    edit(dir.path(), "c.json", "sign.json", |v| v["payload"]["sequence"]["sign_rule"] = "odd".into());
    let out = opcalc(dir.path(), &["operad", "check", "sign.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("payload.sequence.sign_rule"), "{}", out.stderr);

    edit(dir.path(), "c.json", "shape.json", |v| v["payload"]["gamma"]["2;1,1"]["shape"][1] = 2.into());
    let out = opcalc(dir.path(), &["operad", "check", "shape.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("payload.gamma.2;1,1.rows[0]"), "{}", out.stderr);

    edit(dir.path(), "c.json", "key.json", |v| {
        let g = v["payload"]["gamma"].as_object_mut().unwrap();
        let t = g.remove("2;1,1").unwrap();
        g.insert("2; 1,1".into(), t);
    });
    let out = opcalc(dir.path(), &["operad", "check", "key.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("not canonical"), "{}", out.stderr);

    let out = opcalc(dir.path(), &["algebra", "check", "c.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("expected an algebra document"));

    write(dir.path(), "junk.json", "{\"kind\": \"operad\"");
    assert_eq!(opcalc(dir.path(), &["operad", "check", "junk.json"]).code, 2);
    assert_eq!(opcalc(dir.path(), &["operad", "check", "absent.json"]).code, 2);
}

#[test]
fn false_verifications_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // a wrong γ entry is a law violation, not an input error
    opcalc(dir.path(), &["operad", "builtin", "--name", "com", "--max-arity", "3", "--out", "c.json"]);
    edit(dir.path(), "c.json", "broken.json", |v| v["payload"]["gamma"]["2;1,2"]["rows"][0][0] = "2".into());
    let out = opcalc(dir.path(), &["operad", "check", "broken.json"]);
    assert_eq!(out.code, 1, "{}", out.stderr);
    assert!(out.stdout.contains("2;1,2") || out.stdout.contains("associativity"), "{}", out.stdout);

    let out = opcalc(dir.path(), &["algebra", "free", "--name", "assoc", "--max-arity", "3", "--degree", "3", "--kill", "2", "--out", "k.json"]);
    assert_eq!(out.code, 0);
    let out = opcalc(dir.path(), &["algebra", "check", "k.json", "--json"]);
    assert_eq!(out.code, 1);
    let Document::Report(r) = Document::parse(&out.stdout).unwrap() else { panic!() };
    assert_eq!(r["table"][0]["signature"], "2;1,2");

    let out = opcalc(dir.path(), &["algebra", "free", "--name", "com", "--sign", "plain", "--relation", "0,0", "--out", "sq.json"]);
    assert_eq!(out.code, 0);
    let out = opcalc(dir.path(), &["algebra", "split", "sq.json", "--json"]);
    assert_eq!(out.code, 1);
    let Document::Report(r) = Document::parse(&out.stdout).unwrap() else { panic!() };
    assert_eq!(r["data"]["witness"], serde_json::json!({"n": 2, "degree": 2}));

    let out = run(["opcalc", "operad", "primgen", "--name", "com", "--sign", "plain"]);
    assert_eq!(out.code, 0);
}

#[test]
fn free_operad_on_a_ternary_generator() {
    let dir = tempfile::tempdir().unwrap();
    let seq = r#"{"kind": "sequence", "version": 1, "payload": {"sign_rule": "plain", "unital": false, "components": [
        {"arity": 0, "dims": [], "gens": []},
        {"arity": 1, "dims": [], "gens": []},
        {"arity": 2, "dims": [], "gens": [{"shape": [0, 0], "rows": []}]},
        {"arity": 3, "dims": [[0, 1]], "gens": [{"shape": [1, 1], "rows": [["1"]]}, {"shape": [1, 1], "rows": [["1"]]}]}
    ]}}"#;
    write(dir.path(), "t.json", seq);
    let out = opcalc(dir.path(), &["operad", "free", "t.json", "--max-arity", "5", "--out", "f.json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = opcalc(dir.path(), &["operad", "primgen", "f.json", "--degree", "5", "--json"]);
    assert_eq!(out.code, 1);
    let Document::Report(r) = Document::parse(&out.stdout).unwrap() else { panic!() };
    assert_eq!(r["data"]["witness"]["arity"], 2);
    assert_eq!(opcalc(dir.path(), &["operad", "check", "f.json"]).code, 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(["opcalc"]).code, 2);
    assert_eq!(run(["opcalc", "operad", "frobnicate"]).code, 2);
    assert_eq!(run(["opcalc", "operad", "builtin", "--name", "nope"]).code, 2);
    assert_eq!(run(["opcalc", "operad", "check", "--name", "com", "--sign", "odd"]).code, 2);
    assert_eq!(run(["opcalc", "operad", "check"]).code, 2);
    assert_eq!(run(["opcalc", "algebra", "free", "--name", "com", "--relation", "1/2/3:0"]).code, 2);
    assert_eq!(run(["opcalc", "algebra", "free", "--name", "com", "--relation", "0,7"]).code, 2);
    assert_eq!(run(["opcalc", "calc", "cross", "--name", "com", "--x", "one"]).code, 2);
    let help = run(["opcalc", "--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("operad"));
}

#[test]
fn calculus_and_algebra_commands() {
    let out = run(["opcalc", "calc", "split", "--name", "assoc", "--n", "3", "--degree", "3"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    let out = run(["opcalc", "calc", "diff", "--name", "com", "--sign", "plain", "--at", "1:1"]);
    assert_eq!(out.code, 0);
    let out = run(["opcalc", "calc", "cross", "--name", "assoc", "--k", "2", "--degree", "2", "--json"]);
    let Document::Report(r) = Document::parse(&out.stdout).unwrap() else { panic!() };
    assert_eq!(r["data"]["dims"], serde_json::json!([[2, 2]]));
    let out = run(["opcalc", "algebra", "pbw", "--degree", "6", "--json"]);
    let Document::Report(r) = Document::parse(&out.stdout).unwrap() else { panic!() };
    assert_eq!(r["data"]["enveloping"], serde_json::json!([1, 2, 4, 6, 9, 12, 16]));
    let out = run(["opcalc", "triple", "compat", "--name", "lie", "--sign", "plain"]);
    assert_eq!(out.code, 0);
    let out = run(["opcalc", "operad", "quadratic", "--name", "lie", "--max-arity", "5", "--json"]);
    let Document::Report(r) = Document::parse(&out.stdout).unwrap() else { panic!() };
    assert_eq!(r["data"]["dims"], serde_json::json!([1, 1, 2, 6, 24]));

    let dir = tempfile::tempdir().unwrap();
    opcalc(dir.path(), &["algebra", "free", "--name", "com", "--gens", "1:1,2:1", "--degree", "6", "--max-arity", "6", "--out", "l.json"]);
    assert_eq!(opcalc(dir.path(), &["algebra", "leray", "l.json"]).code, 0);
    for mode in ["direct", "derived"] {
        let out = opcalc(dir.path(), &["algebra", "layers", "l.json", "--mode", mode, "--sign", "koszul"]);
        assert_eq!(out.code, 0, "{mode}: {}{}", out.stdout, out.stderr);
    }
    let out = opcalc(dir.path(), &["algebra", "free", "--name", "com", "--max-arity", "3", "--degree", "5"]);
    assert!(out.stdout.contains("truncated"), "{}", out.stdout);
}

#[test]
fn repeated_invocations_are_identical() {
    let args = ["opcalc", "triple", "nu", "--name", "poisson(2)", "--max-arity", "3", "--json"];
    assert_eq!(run(args), run(args));
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-50i64..50, 1i64..30).prop_map(|(p, q)| Scalar::new(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrices_round_trip(rows in 0usize..4, cols in 0usize..4, seed in proptest::collection::vec(rational(), 16)) {
        let dense: Vec<Vec<Scalar>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j].clone()).collect()).collect();
        let m = Matrix::from_rows(&dense, cols);
        let doc = MatrixDoc::from_matrix(&m);
        let text = serde_json::to_string(&doc).unwrap();
        let back: MatrixDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_matrix("m").unwrap(), m);
    }

    #[test]
    fn rationals_parse_only_in_canonical_form(p in -1000i64..1000, q in 1i64..60) {
        let canonical = Scalar::new(p, q).to_string();
        let parsed: Rational = serde_json::from_str(&format!("{canonical:?}")).unwrap();
        prop_assert_eq!(parsed.0, Scalar::new(p, q));
        let raw = format!("\"{p}/{q}\"");
        let direct: Result<Rational, _> = serde_json::from_str(&raw);
        prop_assert_eq!(direct.is_ok(), format!("{p}/{q}") == canonical);
    }
}
