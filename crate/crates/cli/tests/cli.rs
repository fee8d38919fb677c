use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_beth-forge");

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("beth-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const LEM_FRAME: &str = "states r t\nroot r\nsucc r -> r t\natoms t: p\n";
const GOOD_PROOF: &str = "a1: assume [] |- p => p\na2: impI [a1] |- p -> p\n";
const BAD_PROOF: &str = "a1: assume [] |- p => p\na2: impI [a1] |- p -> q\n";
const TABLE: &str = "level 1\n<> 0 -> 0\n<0> 1 -> 0\n<1> 1 -> 1\n";

#[test]
fn exit_code_matrix() {
    let frame = scratch("lem.frame", LEM_FRAME);
    let good = scratch("good.proof", GOOD_PROOF);
    let bad = scratch("bad.proof", BAD_PROOF);
    let junk = scratch("junk.proof", "a1: frobnicate [] |- p\n");
    let table = scratch("t.table", TABLE);
    let corpus = scratch("c.ti", "all z0. z0 = z0\nex X1_1. all z0. (z0 in0 X1_1 <-> z0 = 0)\n");
    let (f, g, b, j, t, c) = (
        frame.to_str().unwrap(),
        good.to_str().unwrap(),
        bad.to_str().unwrap(),
        junk.to_str().unwrap(),
        table.to_str().unwrap(),
        corpus.to_str().unwrap(),
    );
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["demo", "lem"], 0),
        (vec!["demo", "mp"], 0),
        (vec!["parse", "all x1. x1 =0 x1"], 0),
        (vec!["parse", "all x1. ("], 2),
        (vec!["force", f, "p -> p"], 0),
        (vec!["force", f, "p | ~p"], 1),
        (vec!["force", f, "p | ~p", "--walk", "r.t"], 0),
        (vec!["force", "/nonexistent/frame", "p"], 2),
        (vec!["countermodel", "p | ~p"], 1),
        (vec!["countermodel", "p -> p"], 0),
        (vec!["check-proof", g, "--theory", "L", "--s", "1"], 0),
        (vec!["check-proof", b, "--theory", "L", "--s", "1"], 1),
        (vec!["check-proof", j, "--theory", "L"], 2),
        (vec!["--s", "1", "bs", "enumerate", "--level", "1"], 0),
        (vec!["--s", "1", "bs", "extend-lawless", t, "--x", "0", "--gamma", "<0>"], 0),
        (vec!["translate", "all z0. (z0 in0 X1_1 -> z0 = 0)", "--s", "1", "--pass", "int"], 0),
        (vec!["eval", "x1 in0 X1_1", "--assign", "x1=0,X1_1={0,1}"], 0),
        (vec!["eval", "x1 in0 X1_1", "--assign", "x1=0"], 2),
        (vec!["int-check", "--corpus", c], 0),
        (vec!["no-such-command"], 2),
    ];
    assert_eq!(cases.len(), 20);
    for (args, want) in cases {
        let o = run(&args);
        assert_eq!(
            o.status.code(),
            Some(want),
            "{args:?}\nstdout: {}\nstderr: {}",
            stdout(&o),
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn lem_demo_reports_the_failure() {
    let o = run(&["demo", "lem"]);
    assert!(stdout(&o).contains("root does not force p | ~p"));
}

#[test]
fn json_output_is_well_formed() {
    let o = run(&["--format", "json", "parse", "all X1_1. X1_1 = X1_1", "--lang", "TI"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["formula"], "all X1_1. X1_1 =1 X1_1");
    assert!(v["goedel"].as_str().unwrap().chars().all(|c| c.is_ascii_digit()));
}

#[test]
fn tr_of_a_parsed_code_matches_eval() {
    let text = "all z0. (z0 in0 X1_1 -> z0 = 0)";
    let o = run(&["--format", "json", "--s", "1", "parse", text, "--lang", "TI"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let code = v["goedel"].as_str().unwrap().to_string();
    for (assign, want) in [("X1_1={0}", "true"), ("X1_1={0,1}", "false")] {
        let tr = run(&["tr", &code, "--universe", "s=1,N=2", "--assign", assign]);
        let ev = run(&["eval", text, "--universe", "s=1,N=2", "--assign", assign]);
        assert_eq!(stdout(&tr).lines().last(), Some(want));
        assert_eq!(stdout(&ev).trim(), want);
    }
}

#[test]
fn translation_trace_lists_every_stage() {
    let o = run(&["--format", "json", "translate", "all z0. z0 = z0", "--s", "1", "--trace"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["closed", "star", "prime", "int", "definitions"] {
        assert!(!v["trace"][key].is_null(), "missing {key}");
    }
}

#[test]
fn countermodel_prints_a_reloadable_frame() {
    let o = run(&["countermodel", "p | ~p"]);
    let out = stdout(&o);
    let frame: String = out.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let path = scratch("found.frame", &frame);
    let again = run(&["force", path.to_str().unwrap(), "p | ~p"]);
    assert_eq!(again.status.code(), Some(1));
}
