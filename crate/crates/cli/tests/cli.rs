use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn model(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name)
}

fn formap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formap")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--out", "json"]);
    let out = formap(&a);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout} {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn write_model(dir: &tempfile::TempDir, text: &str) -> PathBuf {
    let p = dir.path().join("model.toml");
    std::fs::write(&p, text).unwrap();
    p
}

fn entry(v: &Value, l: u64, g: u64) -> String {
    v["table"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["l"] == l && e["g"] == g)
        .map(|e| e["value"].as_str().unwrap().to_string())
        .unwrap_or_default()
}

#[test]
fn enumerate_quartic() {
    let m = model("quartic.toml");
    let (code, v) = json(&["enumerate", m.to_str().unwrap(), "--max-l", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "formap-report/1");
    assert_eq!(entry(&v, 1, 0), "1/2");
    assert_eq!(entry(&v, 1, 1), "1/4");
    assert_eq!(entry(&v, 3, 2), "15/4");
}

#[test]
fn census_counts_automorphisms() {
    let m = model("quartic.toml");
    let (code, v) = json(&["enumerate", m.to_str().unwrap(), "--max-l", "1", "--census"]);
    assert_eq!(code, 0);
    let census = v["census"].as_array().unwrap();
    assert_eq!(census.len(), 2);
    assert!(census.iter().any(|c| c["genus"] == 0 && c["automorphisms"] == 2));
    assert!(census.iter().any(|c| c["genus"] == 1 && c["automorphisms"] == 4));
}

#[test]
fn empty_potential_has_zero_free_energy() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_model(&dir, "format = \"formap-model/1\"\np = 1\nC = [[3]]\n");
    let (code, v) = json(&["enumerate", p.to_str().unwrap(), "--max-l", "2"]);
    assert_eq!(code, 0);
    assert!(v["table"]["entries"].as_array().unwrap().iter().all(|e| e["value"] == "0"));
}

#[test]
fn malformed_monomial_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_model(&dir, "format = \"formap-model/1\"\np = 1\nC = [[1]]\n[[term]]\nmonomial = \"tr(1,,1)\"\nvalue = 1\n");
    let out = formap(&["enumerate", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("term 1"), "{err}");
}

#[test]
fn asymmetric_covariance_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_model(&dir, "format = \"formap-model/1\"\np = 2\nC = [[2, 1], [0, 2]]\n");
    assert_eq!(formap(&["enumerate", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn bad_color_in_word_is_a_usage_error() {
    let m = model("quartic.toml");
    assert_eq!(formap(&["check-loops", m.to_str().unwrap(), "--word", "1,2"]).status.code(), Some(2));
}

#[test]
fn pairing_budget_exceeded() {
    let m = model("quartic.toml");
    let out = formap(&["enumerate", m.to_str().unwrap(), "--max-l", "4", "--method", "sweep", "--budget-pairings", "1000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn order_budget_exceeded() {
    let m = model("quartic.toml");
    assert_eq!(formap(&["enumerate", m.to_str().unwrap(), "--max-l", "40"]).status.code(), Some(3));
}

#[test]
fn loop_equations_hold() {
    let m = model("ising.toml");
    let (code, v) = json(&["check-loops", m.to_str().unwrap(), "--order", "3", "--word-len", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["loops"].as_array().unwrap().len(), 6);
    assert_eq!(v["passed"], true);
}

#[test]
fn explicit_words() {
    let m = model("cubic.toml");
    let (code, v) = json(&["check-loops", m.to_str().unwrap(), "--order", "3", "--word", "-", "--word", "1,1"]);
    assert_eq!(code, 0);
    let words: Vec<&Value> = v["loops"].as_array().unwrap().iter().map(|l| &l["word"]).collect();
    assert_eq!(words, [&serde_json::json!([]), &serde_json::json!([1, 1])]);
}

#[test]
fn free_energy_routes() {
    let m = model("quartic.toml");
    let m = m.to_str().unwrap();
    let (_, wick) = json(&["free-energy", m, "--route", "wick", "--genus", "0,1", "--max-l", "3"]);
    let (_, closed) = json(&["free-energy", m, "--route", "closed-form", "--genus", "0,1", "--order", "6"]);
    assert_eq!(wick["free_energies"][0]["series"], "-1/2*t^3 - 9/8*t^4 - 9/2*t^5 + O(t^6)");
    assert_eq!(closed["free_energies"][0]["series"], wick["free_energies"][0]["series"]);
    assert_eq!(wick["free_energies"][1]["series"], "-1/4*t - 15/8*t^2 - 33/2*t^3 + O(t^4)");
    let (code, rec) = json(&["free-energy", m, "--route", "toprec", "--genus", "2", "--order", "2"]);
    assert_eq!(code, 0);
    assert_eq!(rec["free_energies"][0]["series"], "-15/4*t + O(t^2)");
}

#[test]
fn toprec_rejects_low_genus() {
    let m = model("quartic.toml");
    assert_eq!(formap(&["free-energy", m.to_str().unwrap(), "--route", "toprec", "--genus", "1"]).status.code(), Some(2));
}

#[test]
fn crosscheck_quartic() {
    let m = model("quartic.toml");
    let (code, v) = json(&["crosscheck", m.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["crosscheck"].as_array().unwrap().len(), 5);
    assert!(v["crosscheck"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let pairs: Vec<(u64, &str, &str)> = v["crosscheck"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["genus"].as_u64().unwrap(), c["left"].as_str().unwrap(), c["right"].as_str().unwrap()))
        .collect();
    assert!(pairs.contains(&(2, "wick", "toprec")));
    assert!(pairs.contains(&(0, "wick", "closed-form")));
}

#[test]
fn crosscheck_cubic() {
    let m = model("cubic.toml");
    let (code, v) = json(&["crosscheck", m.to_str().unwrap()]);
    assert_eq!(code, 0);
    let g0 = &v["crosscheck"][0];
    assert_eq!((g0["genus"].as_u64(), g0["from"].as_i64(), g0["to"].as_i64()), (Some(0), Some(2), Some(6)));
    assert_eq!(v["passed"], true);
}

#[test]
fn gaussian_loop_equation() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_model(&dir, "format = \"formap-model/1\"\np = 1\nC = [[1]]\n");
    let (code, v) = json(&["check-loops", p.to_str().unwrap(), "--word", "1", "--order", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["loops"][0]["passed"], true);
}

#[test]
fn crosscheck_ising() {
    let m = model("ising.toml");
    let (code, v) = json(&["crosscheck", m.to_str().unwrap(), "--max-l", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["crosscheck"].as_array().unwrap().len(), 2);
    assert_eq!(v["notes"].as_array().unwrap().len(), 1);
}

#[test]
fn output_is_deterministic() {
    let m = model("ising.toml");
    let run = || {
        let (_, mut v) = json(&["enumerate", m.to_str().unwrap(), "--max-l", "2", "--census"]);
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    assert_eq!(run(), run());
    let text = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_formap"))
            .env("FORMAP_THREADS", threads)
            .args(["enumerate", m.to_str().unwrap(), "--max-l", "3"])
            .output()
            .unwrap();
        let s = String::from_utf8(out.stdout).unwrap();
        s.lines().filter(|l| !l.starts_with("elapsed")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(text("1"), text("4"));
}
