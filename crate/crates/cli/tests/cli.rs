use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn aieo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aieo"))
        .args(args)
        .env_remove("AIEO_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn translate_plural_sentence() {
    let out = aieo(&["translate", "--mode", "epsilon", "some politicians are crooks"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "crook(eps x. politician(x))");
}

#[test]
fn translate_montague_mode() {
    let out = aieo(&["translate", "--mode", "montague", "every S is P"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "forall x. S(x) -> P(x)");
}

#[test]
fn translate_print_parse_is_a_fixpoint() {
    let first = stdout(&aieo(&["translate", "no students are employees"]));
    let second = stdout(&aieo(&["print", first.trim()]));
    let third = stdout(&aieo(&["print", second.trim()]));
    assert_eq!(first, second);
    assert_eq!(second, third);
}

#[test]
fn unrecognized_sentence_is_a_usage_error() {
    let out = aieo(&["translate", "most S are P"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unrecognized sentence"));
}

#[test]
fn extra_lexicon_file() {
    let mut lex = tempfile::NamedTempFile::new().unwrap();
    writeln!(lex, "wombat : e -> t\nwombats : e -> t = wombat").unwrap();
    let path = lex.path().to_str().unwrap();
    let out = aieo(&["translate", "--lexicon", path, "not all wombats are goats"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "~goat(tau x. wombat(x))");
}

#[test]
fn entail_countermodel_fails_expectation() {
    let args = ["entail", "--gamma", "P(tau x. S(x))", "--phi", "P(eps x. S(x))", "--bound", "2"];
    assert_eq!(code(&aieo(&args)), 0);
    let mut strict = args.to_vec();
    strict.extend(["--expect-valid", "--json"]);
    let out = aieo(&strict);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "countermodel");
    assert_eq!(v["countermodel"]["model"]["domain"].as_array().unwrap().len(), 2);
}

#[test]
fn entail_valid_sequent() {
    let out = aieo(&[
        "entail",
        "--gamma",
        "exists x. S(x) & P(x)",
        "--phi",
        "S(eps x. S(x) & P(x))",
        "--expect-valid",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("valid in every model of size <= 3"));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_aieo"))
        .args(["entail", "--phi", "P(eps x. S(x))", "--bound", "3"])
        .env("AIEO_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    let bad = Command::new(env!("CARGO_BIN_EXE_aieo"))
        .args(["entail", "--phi", "P(c)"])
        .env("AIEO_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn prove_accepts_and_rejects() {
    let ok = aieo(&["prove", "--script", fixture("witness.proof").to_str().unwrap()]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).starts_with("ok: P(eps x. S(x)) & S(eps x. S(x)) |- "));

    let bad = aieo(&["prove", "--json", "--script", fixture("eigenvariable.proof").to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&bad)).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["rule"], "tau_intro");
    assert_eq!(v["label"], "2");
    assert_eq!(v["line"], 3);
}

#[test]
fn square_with_bivalence_theory() {
    let out = aieo(&["square", "--s", "S", "--p", "P", "--theory", fixture("forward.thy").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("contraries [ok]"), "{text}");
    assert!(text.contains("A->I [ok]"), "{text}");
    assert!(text.ends_with("square of opposition: yes\n"), "{text}");
}

#[test]
fn square_without_theory_fails_subalternation() {
    let out = aieo(&["square", "--s", "S", "--p", "P", "--bound", "2", "--json"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["contradictories_ok"], serde_json::json!([true, true]));
    assert_eq!(v["subalterns_ok"][0], false);
}

#[test]
fn square_selection() {
    let out = aieo(&[
        "square",
        "--s",
        "S",
        "--p",
        "P",
        "--select",
        "--theory",
        fixture("backward.thy").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("chosen: S(S, ~P)"));
    let none = aieo(&["square", "--s", "S", "--p", "P", "--select", "--bound", "2"]);
    assert_eq!(code(&none), 2);
}

#[test]
fn parse_tree_and_json() {
    let out = aieo(&["parse", "forall y. P(tau x. S(x))"]);
    assert_eq!(stdout(&out), "forall y\n  pred P/1\n    tau x\n      pred S/1\n        var x\n");
    let out = aieo(&["parse", "--json", "P(tau x. S(x))"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dual_normal_form"], "P(eps x. ~S(x))");
    assert_eq!(aieo(&["parse", "P(("]).status.code(), Some(2));
}

#[test]
fn demo_inadequacies_json() {
    let out = aieo(&["demo-inadequacies", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(aieo(&["demo-inadequacies", "--which", "4"]).status.code(), Some(2));
}

#[test]
fn unknown_subcommand() {
    assert_eq!(code(&aieo(&["bogus"])), 2);
}
