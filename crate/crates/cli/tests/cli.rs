use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn dfml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dfml")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let o = dfml(&a);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)));
    (code(&o), v)
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

#[test]
fn correspond_text() {
    let o = dfml(&["correspond", "box p |- p"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "x R''_box x");
}

#[test]
fn correspond_json() {
    let (c, v) = json(&["correspond", "dia dia p |- dia p"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], "sahlqvist");
    assert_eq!(v["chosen"], "co-translation");
    assert_eq!(
        v["correspondence"]["correspondent"],
        "forall_d v1. (y R''_dia v1 -> (forall_d v2. (v1 R''_dia v2 -> y R''_dia v2)))"
    );
    let threads = v["threads"].as_array().unwrap();
    assert_eq!(threads.len(), 2);
    assert_eq!(threads[0]["thread"], "translation");
    assert_eq!(threads[0]["reducible"], false);
    assert_eq!(threads[1]["reducible"], true);
    assert!(threads[1]["trace"]["steps"].as_array().unwrap().iter().all(|s| s["rule"].is_string()));
}

#[test]
fn not_sahlqvist_exits_1() {
    let (c, v) = json(&["classify", r"p /\ neg p |- bot"]);
    assert_eq!(c, 1);
    assert_eq!(v["verdict"], "not-sahlqvist");
    let o = dfml(&["correspond", r"p /\ neg p |- q \/ neg q"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn thread_selection() {
    let o = dfml(&["correspond", "dia dia p |- dia p", "--thread", "translation"]);
    assert_eq!(code(&o), 1);
    let (c, v) = json(&["correspond", "box p |- p", "--thread", "cotranslation"]);
    assert_eq!(c, 0);
    assert_eq!(v["chosen"], "co-translation");
}

#[test]
fn f3_simplification() {
    let o = dfml(&["correspond", "p |- dia p", "--assume-f3"]);
    assert_eq!(
        String::from_utf8_lossy(&o.stdout).trim(),
        "forall_d v1. (I(x,v1) -> (exists_1 u1. (I(u1,v1) & u1 R_dia x)))"
    );
}

#[test]
fn usage_and_parse_errors_exit_3() {
    let o = dfml(&["correspond", "box p |-"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("docs/grammar.md"));
    assert_eq!(code(&dfml(&["frobnicate"])), 3);
    assert_eq!(code(&dfml(&["verify", "p |- p", "--samples", "3"])), 3);
    assert_eq!(code(&dfml(&["reduce", "<P0 <=1 P0 | P0 <=1 P0>"])), 3);
}

#[test]
fn budget_exhaustion_exits_2() {
    let o = dfml(&["classify", r"p /\ neg p |- q \/ neg q", "--max-nodes", "3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn translate_and_reduce() {
    let o = dfml(&["translate", "box p |- p"]);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("boxm P0'' |-1 P0''"), "{out}");
    let (c, v) = json(&["reduce", "<| boxm P0'' <=1 P0''>"]);
    assert_eq!(c, 0);
    assert!(v.to_string().contains("<P0'' <=1 P0 | boxm P0 <=1 P0>"), "{v}");
}

#[test]
fn output_is_deterministic() {
    let args = ["correspond", r"box (p \/ q) |- dia p \/ box q", "--json", "--trace"];
    let a = dfml(&args);
    let b = dfml(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = ["verify", "p -> (p -> q) |- p -> q", "--enumerate", "2", "2", "--json"];
    assert_eq!(dfml(&v).stdout, dfml(&v).stdout);
}

#[test]
fn verify_enumerated() {
    let (c, v) = json(&["verify", "p |- dia p", "--enumerate", "2", "2"]);
    assert_eq!(c, 0);
    assert_eq!(v["verification"]["verdict"], "agree");
    assert!(v["verification"]["frames"].as_u64().unwrap() > 0);
    let (c, v) = json(&["verify", "p -> (p -> q) |- p -> q", "--enumerate", "2", "2"]);
    assert_eq!(c, 1);
    assert_eq!(v["verification"]["verdict"], "disagree");
    assert!(v["verification"]["witness"].is_object());
}

#[test]
fn verify_sampled() {
    let (c, v) = json(&["verify", "box p |- p", "--enumerate", "3", "3", "--samples", "20", "--seed", "7"]);
    assert_eq!(c, 0);
    assert_eq!(v["verification"]["frames"], 20);
}

#[test]
fn verify_frame_files() {
    let dir = data("frames");
    let (c, v) = json(&["verify", "box p |- p", "--frames", dir.to_str().unwrap()]);
    assert_eq!(c, 0);
    let per = v["verification"]["per_frame"].as_array().unwrap();
    assert_eq!(per.len(), 2);
    assert!(per.iter().all(|f| f["verdict"] == "agree"));
}

#[test]
fn check_frame() {
    let (c, v) = json(&["check-frame", data("frames/reflexive.frame").to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["F1"], true);
    assert_eq!(v["F2"], true);
    assert_eq!(v["stable_sets"], 2);
    let bad = data("not_separated.frame");
    let (c, v) = json(&["check-frame", bad.to_str().unwrap()]);
    assert_eq!(c, 1);
    assert_eq!(v["F1"], false);
    assert_eq!(code(&dfml(&["check-frame", bad.to_str().unwrap(), "--no-validate"])), 0);
    let missing = data("frames/absent.frame");
    assert_eq!(code(&dfml(&["check-frame", missing.to_str().unwrap()])), 3);
}

#[test]
fn corpus_replay() {
    let o = dfml(&["--corpus"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 20);
    assert!(!out.lines().any(|l| l.starts_with("FAIL")));
}
