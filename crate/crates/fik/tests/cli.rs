use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use fik::model_file::{CountermodelDoc, ModelDoc};
use std::io::Write;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn fik(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fik")).args(args).env("FIK_COLOR", "never").output().unwrap()
}

fn fik_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fik"))
        .args(args)
        .env("FIK_COLOR", "never")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

/// Stdout without the timing line, which varies run to run.
fn stable(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).lines().filter(|l| !l.starts_with("time: ")).map(|l| format!("{l}\n")).collect()
}

#[test]
fn prove_provable_golden() {
    let out = fik(&["prove", "[](p\\/q) -> ((<>p -> []q) -> []q)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stable(&out),
        "PROVABLE\n\
         formula: [](p \\/ q) -> (<>p -> []q) -> []q\n\
         rule applications: 8\n\
         max sequent size: 32\n\
         derivation nodes: 12\n"
    );
}

#[test]
fn prove_unprovable_golden_with_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    let dot = dir.path().join("m.dot");
    let derivation = dir.path().join("d.txt");
    let out = fik(&[
        "prove",
        "(<>p -> []q) -> [](p -> q)",
        "--model",
        model.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
        "--derivation",
        derivation.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stable(&out),
        "UNPROVABLE\n\
         formula: (<>p -> []q) -> [](p -> q)\n\
         rule applications: 7\n\
         max sequent size: 27\n\
         derivation nodes: 10\n\
         countermodel: 4 worlds, refuted at x0\n\
         worlds: x0, x1, x2, x3\n\
         leq: x0≤x0 x0≤x1 x1≤x1 x2≤x0 x2≤x1 x2≤x2 x2≤x3 x3≤x3\n\
         r: Rx1x2\n\
         V(x0) = {}\n\
         V(x1) = {}\n\
         V(x2) = {}\n\
         V(x3) = {p}\n"
    );
    let doc: CountermodelDoc = serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(doc.model.worlds.len(), 4);
    assert_eq!(doc.sequents["x3"], "p => q");
    let m = doc.model.to_model(false).unwrap();
    assert!(m.is_valid_frame());
    assert!(!m.forces(0, &fik_core::Formula::parse("(<>p -> []q) -> [](p -> q)").unwrap()).unwrap());
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert!(dot.starts_with("digraph model {"));
    assert_eq!(dot.matches("label=\"R\"").count(), 1);
    let derivation = std::fs::read_to_string(&derivation).unwrap();
    assert_eq!(derivation.lines().count(), 10);
    assert!(derivation.contains("[global-saturated]"));
}

#[test]
fn prove_reads_stdin_and_files() {
    let out = fik_stdin(&["prove"], "top\n");
    assert_eq!(out.status.code(), Some(0));
    assert!(stable(&out).starts_with("PROVABLE\nformula: top\n"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("goal.txt");
    std::fs::write(&path, "[]p -> p\n").unwrap();
    let out = fik(&["prove", &format!("@{}", path.display())]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn prove_json_output() {
    let out = fik(&["prove", "~~[]~p -> []~p", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["result"], "UNPROVABLE");
    assert_eq!(v["countermodel"]["worlds"].as_array().unwrap().len(), 7);
    assert_eq!(v["countermodel"]["root"], "x0");
}

#[test]
fn derivation_json_mirrors_tree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let out = fik(&["prove", "p & q -> q & p", "--format", "json", "--derivation", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: fik::derivation_out::DerivationDoc = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc.node, "p & q => q & p");
    assert_eq!(doc.applied.as_ref().unwrap().rule, "andL");
}

#[test]
fn error_exit_codes() {
    let out = fik(&["prove", "p ->"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax error at byte 4"));
    assert_eq!(fik(&["prove", "--budget", "2", "[](p \\/ q) -> (<>p -> []q) -> []q"]).status.code(), Some(3));
    assert_eq!(fik(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fik(&["--help"]).status.code(), Some(0));
}

#[test]
fn check_model_interdefinability_fixtures() {
    let run = |file: &str, a: &str, w: &str| fik(&["check-model", "--close-leq", &data(file), a, "--world", w]);
    let out = run("box_model.json", "[]p", "c");
    assert_eq!((out.status.code(), stable(&out)), (Some(0), "c: forced\n".into()));
    let out = run("box_model.json", "[]p", "a");
    assert_eq!((out.status.code(), stable(&out)), (Some(1), "a: not forced\n".into()));
    assert_eq!(run("dia_model.json", "<>p", "c").status.code(), Some(0));
    assert_eq!(run("dia_model.json", "<>p", "a").status.code(), Some(1));
    assert_eq!(run("box_model.json", "p", "nowhere").status.code(), Some(2));
}

#[test]
fn check_model_reports_violations() {
    let out = fik(&["check-model", &data("no_fc_model.json"), "<>p"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stable(&out), "invalid model:\n  forward confluence: z ≤ x and R z y but no t with R x t and y ≤ t\n");
    let out = fik(&["check-model", &data("box_model.json"), "p"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stable(&out).contains("pre-order: a ≤ a missing"));
}

#[test]
fn oracle_command() {
    let out = fik(&["oracle", "[]bot", "-n", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stable(&out).starts_with("countermodel found, refuted at w0\n"));
    let out = fik(&["oracle", "top", "-n", "3"]);
    assert_eq!((out.status.code(), stable(&out)), (Some(0), "none up to 3 worlds\n".into()));
    assert_eq!(fik(&["oracle", "(<>p -> []q) -> [](p -> q)", "-n", "4"]).status.code(), Some(1));
    assert_eq!(fik(&["oracle", "top", "-n", "5"]).status.code(), Some(2));
    let out = fik(&["oracle", "<>p -> []p", "-n", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let m: ModelDoc = serde_json::from_value(v["countermodel"].clone()).unwrap();
    assert!(m.to_model(false).unwrap().is_valid_frame());
}

#[test]
fn bench_shipped_corpus() {
    for jobs in ["1", "4"] {
        let out = fik(&["bench", &data("paper.fik"), "--jobs", jobs]);
        assert_eq!(out.status.code(), Some(0), "{}", stable(&out));
        assert!(stable(&out).ends_with("22 formulas, 0 mismatches\n"));
    }
}

#[test]
fn bench_flags_wrong_expectations() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.fik");
    std::fs::write(&empty, "").unwrap();
    let out = fik(&["bench", empty.to_str().unwrap()]);
    assert_eq!((out.status.code(), stable(&out)), (Some(0), "0 formulas, 0 mismatches\n".into()));
    let wrong = dir.path().join("wrong.fik");
    std::fs::write(&wrong, "p -> p # expect: provable\n[]p -> p # expect: provable\n").unwrap();
    let out = fik(&["bench", wrong.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stable(&out).contains("line 2: expected PROVABLE, got UNPROVABLE"));
    std::fs::write(&wrong, "p -> # expect: provable\n").unwrap();
    assert_eq!(fik(&["bench", wrong.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn check_derivation_files() {
    let out = fik(&["check-derivation", &data("dia_bot.hd")]);
    assert_eq!((out.status.code(), stable(&out)), (Some(0), "valid: 1 step, conclusion ~<>bot\n".into()));
    assert_eq!(fik(&["check-derivation", &data("mp_exercise.hd")]).status.code(), Some(0));
    let out = fik(&["check-derivation", &data("mp_exercise_corrupted.hd")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stable(&out), "invalid: step 3: step 3 does not precede this step\n");
}
