mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bagcons::consistency::BagDatabase;
use bagcons::{Bag, Hypergraph};
use serde_json::Value;
use tempfile::TempDir;

fn bagcons(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bagcons")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_reports_shape() {
    let dir = TempDir::new().unwrap();
    let p5 = write(&dir, "p5.json", &Hypergraph::path(5).to_json());
    let out = bagcons(&["classify", "--schema", s(&p5)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("acyclic"));
    let c4 = write(&dir, "c4.json", &Hypergraph::cycle(4).to_json());
    let out = bagcons(&["classify", "--schema", s(&c4)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("bad_witness"));
}

#[test]
fn global_verdicts_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.json", &common::triangle().to_json());
    assert_eq!(bagcons(&["pairwise", "--db", s(&tri)]).status.code(), Some(0));
    assert_eq!(bagcons(&["global", "--db", s(&tri), "--oracle"]).status.code(), Some(1));

    let chain = common::chain_database(4);
    let db = write(&dir, "chain.json", &chain.to_json());
    let w = dir.path().join("w.json");
    let out = bagcons(&["global", "--db", s(&db), "--witness", s(&w)]);
    assert_eq!(out.status.code(), Some(0));
    let witness = Bag::from_json(&read(&w)).unwrap();
    assert!(bagcons::oracle::check_witness(&witness, &chain).unwrap());

    let out = bagcons(&["global", "--db", s(&tri), "--oracle", "--budget-support", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn counterexample_then_global() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("c3.json");
    let out = bagcons(&["counterexample", "--shape", "cycle", "--n", "3", "-o", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    let db = BagDatabase::from_json(&read(&out_path)).unwrap();
    assert_eq!(db.hypergraph(), &Hypergraph::cycle(3));
    assert_eq!(bagcons(&["pairwise", "--db", s(&out_path)]).status.code(), Some(0));
    assert_eq!(bagcons(&["global", "--db", s(&out_path), "--oracle"]).status.code(), Some(1));

    let h4 = dir.path().join("h4.json");
    let out = bagcons(&["counterexample", "--shape", "clique-complement", "--n", "4", "-o", s(&h4)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(bagcons(&["global", "--db", s(&h4), "--oracle"]).status.code(), Some(1));

    // lift back onto a bigger schema, then harden
    let big = Hypergraph::from_names(&["A1", "A2", "A3", "B"], &[&["A1", "A2", "B"], &["A2", "A3"], &["A3", "A1"], &["B"]])
        .unwrap();
    let schema = write(&dir, "big.json", &big.to_json());
    let lifted = dir.path().join("lifted.json");
    let out = bagcons(&["lift", "--db", s(&out_path), "--schema", s(&schema), "-o", s(&lifted)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(BagDatabase::from_json(&read(&lifted)).unwrap().hypergraph(), &big);
    assert_eq!(bagcons(&["global", "--db", s(&lifted), "--oracle"]).status.code(), Some(1));

    let c4 = dir.path().join("c4.json");
    assert_eq!(bagcons(&["harden", "--db", s(&out_path), "--to", "cycle", "-o", s(&c4)]).status.code(), Some(0));
    assert_eq!(bagcons(&["global", "--db", s(&c4), "--oracle"]).status.code(), Some(1));

    let acyclic = write(&dir, "p3.json", &Hypergraph::path(3).to_json());
    assert_eq!(bagcons(&["counterexample", "--schema", s(&acyclic)]).status.code(), Some(1));
    assert_eq!(bagcons(&["counterexample", "--shape", "cycle", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn contingency_tables_and_enumeration() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "t.json", &serde_json::json!({ "R": [[5]], "C": [[5]], "F": [[5]] }));
    let db = dir.path().join("db.json");
    assert_eq!(bagcons(&["encode-3dct", "--tables", s(&t), "-o", s(&db)]).status.code(), Some(0));
    let out = bagcons(&["enumerate", "--db", s(&db)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("1 witnesses"));
}

#[test]
fn bad_input_exits_2_with_a_path() {
    let dir = TempDir::new().unwrap();
    let mut v = common::triangle().to_json();
    v["bags"][1]["tuples"][0]["mult"] = serde_json::json!("x");
    let bad = write(&dir, "bad.json", &v);
    let out = bagcons(&["global", "--db", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("$.bags[1].tuples[0].mult"), "{err}");

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let out = bagcons(&["classify", "--schema", s(&garbage)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("garbage.json"));

    assert_eq!(bagcons(&["no-such-verb"]).status.code(), Some(2));
    assert_eq!(bagcons(&["global"]).status.code(), Some(2));
}
