use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kacfusion"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn labels(w: &Value) -> Vec<i64> {
    w["labels"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().parse().unwrap()).collect()
}

/// `(L_i)_{ν,μ} = N_{iμ}^ν` from the emitted tensor, in the given basis order.
fn left_matrices(table: &Value, order: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    let basis: Vec<Vec<i64>> = table["basis"].as_array().unwrap().iter().map(labels).collect();
    let pos: Vec<usize> = basis.iter().map(|w| order.iter().position(|o| o == w).unwrap()).collect();
    let n = order.len();
    let mut l = vec![vec![vec![0; n]; n]; n];
    for e in table["N"].as_array().unwrap() {
        let e: Vec<i64> = e.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
        l[pos[e[0] as usize]][pos[e[2] as usize]][pos[e[1] as usize]] = e[3];
    }
    l
}

fn fixture(name: &str) -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn fusion_reproduces_printed_a2() {
    let out = run(&["fusion", "--type", "A2~1", "--level", "2"]);
    assert!(out.status.success());
    let table = json_of(&out);
    assert_eq!(table["provenance"], "KacWalton");
    let fx = fixture("a2_level2.json");
    let order: Vec<Vec<i64>> = serde_json::from_value(fx["basis"].clone()).unwrap();
    let printed: Vec<Vec<Vec<i64>>> = serde_json::from_value(fx["L"].clone()).unwrap();
    assert_eq!(left_matrices(&table, &order), printed);
}

#[test]
fn output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        assert!(run(&["modular", "--type", "B2~1", "--level", "2", "--out", p.to_str().unwrap()]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert!(v["S"]["data"][0][0].is_number());
}

#[test]
fn twisted_sign_twist_holds() {
    let out = run(&["twisted", "--type", "A2~2", "--level", "4", "--checks", "sign_twist"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["checks"]["sign_twist"]["report"]["conjecture_holds"], true);
    assert!(v["embedded_basis"].is_array());
}

#[test]
fn quotient_a52_level1() {
    let out = run(&["quotient", "--type", "A5~2", "--level", "1"]);
    let v = json_of(&out);
    let order = vec![vec![0, 0, 0], vec![0, 0, 1]];
    assert_eq!(left_matrices(&v, &order), vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]]);
    assert!(v["projection"].as_array().unwrap().iter().any(|p| p.is_null()));
}

#[test]
fn csv_has_one_row_per_nonzero_entry() {
    let js = json_of(&run(&["fusion", "--type", "B2~1", "--level", "2"]));
    let out = run(&["fusion", "--type", "B2~1", "--level", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("lambda,mu,nu,N"));
    assert_eq!(rows.count(), js["N"].as_array().unwrap().len());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check", "--type", "A2~2", "--level", "4", "--checks", "sign_twist"]).status.code(), Some(0));
    assert_eq!(run(&["check", "--type", "E6~2", "--level", "2", "--checks", "two_thirds"]).status.code(), Some(1));
    for bad in [
        vec!["fusion", "--type", "A2~1", "--level", "0"],
        vec!["fusion", "--type", "Q7", "--level", "1"],
        vec!["check", "--type", "A2~1", "--level", "1", "--checks", "nonsense"],
        vec!["fusion", "--type", "A4~2", "--level", "1"],
        vec!["check", "--type", "A1~1", "--level", "2", "--checks", "pairing", "--beta", "1/2"],
        vec!["fusion", "--level", "1"],
    ] {
        let out = run(&bad);
        assert_eq!(out.status.code(), Some(2), "{bad:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["fusion", "--type", "A2~1", "--level", "0"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--level"));
}

#[test]
fn pairing_check_with_beta() {
    let out = run(&["check", "--type", "A1~1", "--level", "2", "--checks", "pairing,relations", "--beta", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

fn sweep(args: &[&str], out: &Path) -> Value {
    let mut full = vec!["sweep"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&std::fs::read(out).unwrap()).unwrap()
}

#[test]
fn sweep_sign_twist_a22() {
    let dir = tempfile::tempdir().unwrap();
    let r = sweep(&["--type", "A2~2", "--level-range", "2..12", "--checks", "sign_twist", "--jobs", "2"], &dir.path().join("r.json"));
    assert_eq!(r["total"], 11);
    assert_eq!(r["passed"], 11);
}

#[test]
fn sweep_grading_small_untwisted() {
    let dir = tempfile::tempdir().unwrap();
    let types = "A1~1,A2~1,A3~1,B2~1,B3~1,C3~1,G2~1";
    let r = sweep(&["--type", types, "--level-range", "1..4", "--checks", "grading"], &dir.path().join("r.json"));
    assert_eq!(r["total"], 28);
    assert_eq!(r["passed"], 28);
}

#[test]
fn sweep_empty_range() {
    let dir = tempfile::tempdir().unwrap();
    let r = sweep(&["--type", "A2~2", "--level-range", "3..2", "--checks", "sign_twist"], &dir.path().join("r.json"));
    assert_eq!(r["total"], 0);
    assert_eq!(r["cells"], Value::Array(vec![]));
}

#[test]
fn sweep_records_cell_errors() {
    let dir = tempfile::tempdir().unwrap();
    let r = sweep(&["--type", "A2~1", "--level-range", "1..1", "--checks", "sign_twist"], &dir.path().join("r.json"));
    assert_eq!(r["errored"], 1);
    assert!(r["cells"][0]["error"].as_str().unwrap().contains("sign_twist"));
}

#[test]
fn sweep_resumes_from_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let args = ["--type", "A2~2", "--level-range", "2..3", "--checks", "sign_twist"];
    let first = sweep(&args, &out);
    let manifest = dir.path().join("r.json.manifest.json");
    let mut m: Value = serde_json::from_slice(&std::fs::read(&manifest).unwrap()).unwrap();
    let key = m.as_object().unwrap().keys().find(|k| k.starts_with("A2~2|2|sign_twist|")).unwrap().clone();
    m[&key]["pass"] = Value::Bool(false);
    std::fs::write(&manifest, serde_json::to_vec(&m).unwrap()).unwrap();
    let second = sweep(&args, &out);
    assert_eq!(first["passed"], 2);
    assert_eq!(second["passed"], 1);
}

#[test]
fn sweep_cell_cap() {
    let out = run(&["sweep", "--type", "A2~2", "--level-range", "1..50", "--checks", "sign_twist", "--max-cells", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--max-cells"));
}

#[test]
fn cache_dir_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    for _ in 0..2 {
        let out = bin().args(["fusion", "--type", "G2~1", "--level", "2"]).env("KACFUSION_CACHE_DIR", dir.path()).output().unwrap();
        assert!(out.status.success());
    }
    let cache: Value = serde_json::from_slice(&std::fs::read(dir.path().join("weight_systems.json")).unwrap()).unwrap();
    assert!(!cache.as_array().unwrap().is_empty());
}
