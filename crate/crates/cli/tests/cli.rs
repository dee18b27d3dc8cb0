use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use derlie::parse::{parse_derivation, parse_derivation_list};
use derlie::{bracket, SpannedLieAlgebra};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derlie")).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("derlie-cli-{}-{}", name, std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

#[test]
fn bracket_matches_library() {
    let o = run(&["bracket", "x2*d1 + x3*d2", "d3 + x3*d2"]);
    assert!(o.status.success());
    let got = parse_derivation(json(&o)["bracket"].as_str().unwrap(), Some(3)).unwrap();
    let want = bracket(
        &parse_derivation("x2*d1 + x3*d2", Some(3)).unwrap(),
        &parse_derivation("d3 + x3*d2", Some(3)).unwrap(),
    )
    .unwrap();
    assert_eq!(got, want);
}

#[test]
fn structure_output_parses_back() {
    let o = run(&["structure", "d1; x3*d1; d2; x3*d2; d3"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["center_rank"], 2);
    assert_eq!(v["corank"], 1);
    assert_eq!(v["nilpotency_class"], 2);
    let basis: Vec<String> = v["basis"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect();
    let ds = parse_derivation_list(&basis.join("; "), Some(3)).unwrap();
    let alg = SpannedLieAlgebra::close_under_bracket(3, &ds, 16).unwrap();
    assert_eq!(alg.dim(), 5);
}

#[test]
fn file_input_and_text_format() {
    let dir = scratch("file");
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join("gens.txt");
    fs::write(&p, "d2;\n1/2*x2^2*d1\n").unwrap();
    let o = run(&["--format", "text", "structure", "--file", p.to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("dim 4  rank 2"), "{}", text);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bracket", "d1", "x1**2*d1"]).status.code(), Some(2));
    assert_eq!(run(&["structure", "1/(x1-x1)*d1"]).status.code(), Some(2));
    let o = run(&["classify", "x1*d2; x2*d1"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["failed_check"], "nilpotent");
    let o = run(&["structure", "--max-dim", "5", "x1^2*d1; x1^3*d1"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["failed_check"], "finite_dimensional");
    let o = run(&["witness", "-n", "1", "--len", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(run(&["classify", "d1; d2 + x3*d1; d3"]).status.code(), Some(0));
}

#[test]
fn build_and_embed() {
    let o = run(&["build", "l2", "-n", "3", "-k", "1"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["structure"]["dim"], 6);
    let basis: Vec<&str> = v["structure"]["basis"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    let o = run(&["embed", &basis.join("; ")]);
    assert!(o.status.success());
    let e = json(&o);
    assert_eq!(e["case"], "TypeL2");
    assert_eq!(e["pairs_checked"], 15);
}

#[test]
fn fuzz_reports_every_seed() {
    let o = run(&["fuzz", "--seed", "5", "--count", "4", "-n", "3", "--size", "2"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["entries"].as_array().unwrap().len(), 4);
    assert_eq!(v["failed"], 0);
}

#[test]
fn golden_write_then_compare() {
    let dir = scratch("golden");
    let d = dir.to_str().unwrap();
    let first = run(&["--golden", d, "witness", "-n", "3", "--len", "4"]);
    assert!(first.status.success());
    let files: Vec<_> = fs::read_dir(&dir).unwrap().collect();
    assert_eq!(files.len(), 1);
    let again = run(&["witness", "-n", "3", "--len", "4", "--golden", d]);
    assert!(again.status.success(), "flag position does not change the key");
    let path = files[0].as_ref().unwrap().path();
    fs::write(&path, "{}\n").unwrap();
    assert_eq!(run(&["--golden", d, "witness", "-n", "3", "--len", "4"]).status.code(), Some(1));
    fs::remove_dir_all(&dir).unwrap();
}
