use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn pagset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pagset")).args(args).env_remove("PAGSET_THREADS").output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn effects_on_a_single_circle_edge() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.pag", "vertices: X Y\nX o-o Y\n");
    let out = pagset(&["effects", "--in", s(&p), "--x", "X", "--y", "Y", "--json", "--oracle-check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["adjustment_sets"], serde_json::json!([[]]));
    assert_eq!(report["outcome"], "set_of_sets");
    assert_eq!(report["oracle_agrees"], true);
    assert_eq!(report["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn contradicting_background_knowledge_exits_one() {
    let dir = TempDir::new().unwrap();
    // C1 carries an arrowhead on A o-> C1
    let bk = write(&dir, "bad.bk", "C1 --> A\n");
    let out = pagset(&["bk", "--in", &fixture("r12_unbridged_pair.pag"), "--bk", s(&bk)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("C1"));
    assert!(out.stdout.is_empty());
}

#[test]
fn bk_log_names_the_new_rule() {
    let out = pagset(&["bk", "--in", &fixture("r12_unbridged_pair.pag"), "--bk", &fixture("r12_unbridged_pair.bk"), "--log", "--validate-oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("A <-o B\n"));
    assert!(text.lines().any(|l| l.starts_with("# R12 A <-o B") || l.starts_with("# R12 B o-> A")), "{text}");
}

#[test]
fn classic_rules_leave_the_edge_open() {
    let dir = TempDir::new().unwrap();
    let mut text = std::fs::read_to_string(fixture("r13_ancestor.pag")).unwrap();
    text = text.replace("A o-> C2", "A <-> C2").replace("C2 <-o D", "C2 <-- D");
    let p = write(&dir, "p.pag", &text);
    let classic = pagset(&["orient", "--in", s(&p), "--rules", "r1-r11"]);
    let all = pagset(&["orient", "--in", s(&p), "--rules", "r1-r13", "--json"]);
    assert!(String::from_utf8_lossy(&classic.stdout).contains("A o-o B"));
    let report: Value = serde_json::from_slice(&all.stdout).unwrap();
    assert!(report["graph"].as_str().unwrap().contains("A <-o B"));
    assert_eq!(report["counters"]["firings.R13"], 1);
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.pag", "vertices: X Y\nX o-o Y\n");
    assert_eq!(pagset(&["effects", "--in", s(&p), "--x", "X", "--y", "Z"]).status.code(), Some(2));
    assert_eq!(pagset(&["effects", "--in", s(&p), "--x", "X", "--y", "X"]).status.code(), Some(2));
    assert_eq!(pagset(&["frobnicate"]).status.code(), Some(2));
    let bad = write(&dir, "bad.pag", "vertices: X Y\nX o-x Y\n");
    let out = pagset(&["orient", "--in", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(pagset(&["orient", "--in", s(&dir.path().join("missing"))]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic() {
    let a = pagset(&["gen", "--seed", "42", "--n", "5"]);
    let b = pagset(&["gen", "--seed", "42", "--n", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let dir = TempDir::new().unwrap();
    let out = pagset(&["gen", "--seed", "42", "--n", "5", "--out-dir", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let pag = std::fs::read_to_string(dir.path().join("pag.txt")).unwrap();
    assert!(String::from_utf8_lossy(&a.stdout).contains(&pag));
}

#[test]
fn baseline_and_rules_agree_on_the_fixture() {
    let args = |extra: &[&'static str]| {
        let mut v = vec!["effects", "--in", "", "--x", "X", "--y", "Y", "--no-shortcut", "--json"];
        v.extend_from_slice(extra);
        v
    };
    let path = fixture("block_set_grown.pag");
    let run = |extra: &[&'static str]| {
        let mut a = args(extra);
        a[2] = &path;
        let out = pagset(&a);
        assert_eq!(out.status.code(), Some(0));
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    let (rules, baseline) = (run(&[]), run(&["--baseline"]));
    assert_eq!(rules["adjustment_sets"], baseline["adjustment_sets"]);
    assert!(baseline["counters"]["block_sets_tested"].as_u64().unwrap() > 0);
    assert!(rules["counters"]["r12_firings"].as_u64().unwrap() > 0);
}

#[test]
fn oracle_lists_one_line_per_mag() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.pag", "vertices: A B\nA o-o B\n");
    let out = pagset(&["oracle", "mags", "--in", s(&p), "--pag", s(&p)]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l["mag"].as_str().unwrap().starts_with("vertices: A B")));
}

#[test]
fn bench_writes_csv() {
    let out = pagset(&["bench", "--family", "ladder", "--k", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("k,vertices,block_sets_tested"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn thread_count_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.pag", "vertices: X Y\nX o-o Y\n");
    let out = Command::new(env!("CARGO_BIN_EXE_pagset"))
        .args(["effects", "--in", s(&p), "--x", "X", "--y", "Y"])
        .env("PAGSET_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "outcome: set_of_sets\n{}\n");
    let bad = Command::new(env!("CARGO_BIN_EXE_pagset")).args(["bench", "--family", "ladder"]).env("PAGSET_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
