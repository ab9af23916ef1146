//! End-to-end runs of the binary on files in a temporary directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use tuiso::{graphic_matroid, r10, WeightFn, WeightedMultigraph};

struct Sandbox(TempDir);

impl Sandbox {
    fn new() -> Self {
        Sandbox(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.0.path().join(name);
        fs::write(&path, text).unwrap();
        path
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tuiso")).args(args).output().unwrap()
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const C4: &str = "4 4\n0 1 1 a\n1 2 1 b\n2 3 1 c\n3 0 1 d\n";
const K4: &str = "4 6\n0 1 1 a\n0 2 1 b\n0 3 1 c\n1 2 1 d\n1 3 1 e\n2 3 1 f\n";

#[test]
fn r10_census_matches_the_matroid() {
    let s = Sandbox::new();
    let m = s.file("r10.txt", &r10().to_text());
    let (code, rep) = report(&["circuits", p(&m), "--bound", "100"]);
    assert_eq!(code, 0);
    let expected = r10().circuits_up_to(&WeightFn::unit(10), 100).unwrap();
    assert_eq!(rep["results"]["count"], expected.len());
    assert_eq!(rep["results"]["circuits"], serde_json::to_value(&expected).unwrap());
}

#[test]
fn k4_circuits_below_four_are_the_triangles() {
    let s = Sandbox::new();
    let m = s.file("k4.txt", &graphic_matroid(&WeightedMultigraph::complete(4)).to_text());
    let (code, rep) = report(&["circuits", p(&m), "--bound", "4"]);
    assert_eq!(code, 0);
    assert_eq!(rep["results"]["count"], 4);
    let (_, rep) = report(&["circuits", p(&m), "--bound", "0"]);
    assert_eq!(rep["results"]["count"], 0);
}

#[test]
fn circuits_read_a_weight_file() {
    let s = Sandbox::new();
    let m = s.file("tri.txt", "x y z\n2 3\n1 1 0\n0 1 1\n");
    let w = s.file("w.txt", "x 1\ny 1\n\nz 5\n");
    let (_, rep) = report(&["circuits", p(&m), "--weights", p(&w), "--bound", "7"]);
    assert_eq!(rep["results"]["count"], 0);
    let (_, rep) = report(&["circuits", p(&m), "--weights", p(&w), "--bound", "8"]);
    assert_eq!(rep["results"]["count"], 1);
    let missing = s.file("short.txt", "x 1\n");
    let (code, rep) = report(&["circuits", p(&m), "--weights", p(&missing), "--bound", "8"]);
    assert_eq!(code, 1);
    assert_eq!(rep["status"], "contract_violation");
}

#[test]
fn cycles_and_bonds_with_their_bound_checks() {
    let s = Sandbox::new();
    let k4 = s.file("k4.txt", K4);
    let (code, rep) = report(&["cycles", p(&k4), "--alpha", "3", "--r", "3"]);
    assert_eq!(code, 0);
    assert_eq!(rep["results"]["count"], 7);
    assert_eq!(rep["bound_checks"][0]["claimed"], "1728");
    assert_eq!(rep["bound_checks"][0]["pass"], true);

    let c4 = s.file("c4.txt", C4);
    let (_, rep) = report(&["cuts", p(&c4), "--alpha", "3"]);
    assert_eq!(rep["results"]["r"], 2);
    assert_eq!(rep["results"]["count"], 6);
    assert_eq!(rep["bound_checks"][0]["claimed"], "512");
    let (_, rep) = report(&["cuts", p(&c4), "--R", "a", "--alpha", "3"]);
    assert_eq!(rep["results"]["count"], 3);
}

#[test]
fn threshold_above_the_lightest_avoiding_member_is_refused() {
    let s = Sandbox::new();
    let c4 = s.file("c4.txt", C4);
    let (code, rep) = report(&["cuts", p(&c4), "--alpha", "2", "--r", "3"]);
    assert_eq!(code, 1);
    assert_eq!(rep["status"], "contract_violation");
}

#[test]
fn tree_has_no_cycles() {
    let s = Sandbox::new();
    let tree = s.file("tree.txt", "4 3\n0 1 1 a\n1 2 1 b\n1 3 1 c\n");
    let (code, rep) = report(&["cycles", p(&tree)]);
    assert_eq!(code, 0);
    assert_eq!(rep["results"]["count"], 0);
}

#[test]
fn small_cut_samples_replay_under_a_seed() {
    let s = Sandbox::new();
    let c4 = s.file("c4.txt", C4);
    let args = ["cuts", p(&c4), "--alpha", "3", "--samples", "500", "--seed", "11"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, run(&args).stdout);
    let rep: Value = serde_json::from_slice(&first.stdout).unwrap();
    let hits: u64 = rep["results"]["small_cut_outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["hits"].as_u64().unwrap())
        .sum();
    assert_eq!(hits, 500);
    assert_eq!(rep["bound_checks"][1]["pass"], true);
}

#[test]
fn shortvecs_on_the_all_ones_row() {
    let s = Sandbox::new();
    let a = s.file("a.txt", "1 3\n1 1 1\n");
    let (code, rep) = report(&["shortvecs", p(&a), "--bound-ratio", "1.5"]);
    assert_eq!(code, 0);
    assert_eq!(rep["results"]["lambda"], 2);
    assert_eq!(rep["results"]["count"], 6);
    assert_eq!(rep["bound_checks"][0]["claimed"], (480 * 3u64.pow(5)).to_string());
    assert_eq!(rep["bound_checks"][0]["pass"], true);
}

#[test]
fn shortvecs_refuses_non_tu_and_flags_trivial_kernels() {
    let s = Sandbox::new();
    let bad = s.file("bad.txt", "2 2\n1 1\n-1 1\n");
    let (code, rep) = report(&["shortvecs", p(&bad)]);
    assert_eq!(code, 1);
    assert_eq!(rep["results"]["is_tu"], false);
    let (code, rep) = report(&["tu-check", p(&bad)]);
    assert_eq!(code, 0);
    assert_eq!(rep["results"]["is_tu"], false);

    let id = s.file("id.txt", "2 2\n1 0\n0 1\n");
    let (code, rep) = report(&["shortvecs", p(&id)]);
    assert_eq!(code, 0);
    assert_eq!(rep["results"]["trivial"], true);
    assert_eq!(rep["results"]["count"], 0);
}

#[test]
fn two_sum_of_triangles_is_a_four_cycle() {
    let s = Sandbox::new();
    let h = s.file("h.txt", "2 1\na0 b0\n");
    let l = s.file("l.txt", "a0 a1 a2\n2 3\n1 1 0\n0 1 1\n");
    let r = s.file("r.txt", "b0 b1 b2\n2 3\n1 1 0\n0 1 1\n");
    let (code, rep) = report(&["ksum", p(&h), p(&l), p(&r), "--check-claims"]);
    assert_eq!(code, 0);
    assert_eq!(rep["results"]["circuit_count"], 1);
    assert_eq!(rep["results"]["elements"], serde_json::json!(["a1", "a2", "b1", "b2"]));
    assert!(rep["bound_checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(rep["inputs"].as_array().unwrap().len(), 3);
}

#[test]
fn isolate_finds_a_candidate_for_the_square() {
    let s = Sandbox::new();
    let fam = s.file("k22.txt", "4 2\n0 3\n1 2\n");
    let (code, rep) = report(&["isolate", p(&fam)]);
    assert_eq!(code, 0);
    assert_ne!(rep["results"]["candidate"], Value::Null);
    assert_eq!(rep["results"]["trace"]["final_face"], 1);
    assert!(rep["bound_checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));

    let (code, rep) = report(&["isolate", p(&fam), "--max-candidates", "0"]);
    assert_eq!(code, 0);
    assert_eq!(rep["results"]["candidate"], Value::Null);
    assert_eq!(rep["results"]["evaluated"], 0);
}

#[test]
fn reports_are_byte_identical_and_can_go_to_a_file() {
    let s = Sandbox::new();
    let fam = s.file("k22.txt", "4 2\n0 3\n1 2\n");
    let out = s.0.path().join("report.json");
    let a = run(&["isolate", p(&fam)]);
    let b = run(&["isolate", p(&fam), "--out", out.to_str().unwrap()]);
    assert!(b.stdout.is_empty());
    let written = fs::read(&out).unwrap();
    let strip = |bytes: &[u8]| -> Value {
        let mut v: Value = serde_json::from_slice(bytes).unwrap();
        v["command"] = Value::Null;
        v
    };
    assert_eq!(strip(&a.stdout), strip(&written));
    assert_eq!(a.stdout, run(&["isolate", p(&fam)]).stdout);
}

#[test]
fn exit_codes() {
    let s = Sandbox::new();
    let labels: Vec<String> = (0..65).map(|i| format!("e{i}")).collect();
    let big = s.file("big.txt", &format!("{}\n1 65\n{}\n", labels.join(" "), vec!["1"; 65].join(" ")));
    let (code, rep) = report(&["circuits", p(&big), "--bound", "3"]);
    assert_eq!(code, 2);
    assert_eq!(rep["status"], "guard_exceeded");
    let garbled = s.file("garbled.txt", "not a matroid\n");
    assert_eq!(report(&["circuits", p(&garbled), "--bound", "3"]).0, 1);
    assert_eq!(run(&["circuits", "/nonexistent/file", "--bound", "3"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
