use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn covrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covrep")).args(args).env_remove("COVREP_TOLERANCE").output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json stdout")
}

fn corpus() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_path_buf();
    assert_eq!(code(&covrep(&["corpus", path.to_str().unwrap()])), 0);
    (dir, path)
}

fn file(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn every_corpus_file_validates() {
    let (_d, dir) = corpus();
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path().to_str().unwrap().to_string())
        .collect();
    names.sort();
    assert_eq!(names.len(), 8);
    let mut args = vec!["validate"];
    args.extend(names.iter().map(String::as_str));
    let out = covrep(&args);
    assert_eq!(code(&out), 0);
    let arr = json(&out);
    let reports = arr.as_array().unwrap();
    assert_eq!(reports.len(), 8);
    assert!(reports.iter().all(|r| r["outcome"] == "pass"));
}

#[test]
fn multiple_files_keep_input_order() {
    let (_d, dir) = corpus();
    let order = ["jordan-pair.json", "G2.json", "G1.json", "scalar-unitary-3.json"];
    let paths: Vec<String> = order.iter().map(|n| file(&dir, n)).collect();
    let mut args = vec!["decompose"];
    args.extend(paths.iter().map(String::as_str));
    let out = covrep(&args);
    let names: Vec<String> =
        json(&out).as_array().unwrap().iter().map(|r| r["instance"]["name"].as_str().unwrap().to_string()).collect();
    assert_eq!(names, ["jordan-pair", "G2", "G1", "scalar-unitary-3"]);
}

#[test]
fn decompose_reports_dimensions() {
    let (_d, dir) = corpus();
    let out = covrep(&["decompose", &file(&dir, "G2.json")]);
    assert_eq!(code(&out), 0);
    let dims = &json(&out)["result"]["report"]["dims"];
    assert_eq!((dims["W"].as_u64(), dims["H_u"].as_u64(), dims["H_inf"].as_u64()), (Some(3), Some(6), Some(0)));
}

#[test]
fn failing_property_exits_one() {
    let (_d, dir) = corpus();
    assert_eq!(code(&covrep(&["check", "-p", "isometric", &file(&dir, "G1.json")])), 0);
    assert_eq!(code(&covrep(&["check", "-p", "isometric,expansive", &file(&dir, "G1-w(1_2).json")])), 1);
}

#[test]
fn unmet_hypothesis_exits_three() {
    let (_d, dir) = corpus();
    let out = covrep(&["verify", "--theorem", "richter", &file(&dir, "scalar-unitary-3.json")]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["outcome"], "hypothesis_not_met");
    assert_eq!(code(&covrep(&["verify", "--theorem", "richter", &file(&dir, "G2-levels-1.json")])), 0);
}

#[test]
fn jordan_pair_satisfies_t24_directly() {
    let (_d, dir) = corpus();
    let out = covrep(&["verify", "--theorem", "t24", &file(&dir, "jordan-pair.json")]);
    assert_eq!(code(&out), 0);
    let obs = json(&out)["result"]["report"]["observations"].clone();
    for name in ["1_doubly_commuting", "2_analytic", "a_generating_wandering", "b_condition"] {
        let o = obs.as_array().unwrap().iter().find(|c| c["name"] == name).unwrap();
        assert_eq!(o["pass"], true, "{name}");
    }
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"kind\": \"covariant\", ").unwrap();
    let out = covrep(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["result"]["kind"], "ParseError");
    let missing = covrep(&["validate", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn negative_gram_fails_validation() {
    let (_d, dir) = corpus();
    let mut inst: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("G1.json")).unwrap()).unwrap();
    inst["correspondence"]["gram"][0] = serde_json::json!([[[-1.0, 0.0]]]);
    let path = dir.join("negative.json");
    std::fs::write(&path, inst.to_string()).unwrap();
    let out = covrep(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let checks = json(&out)["result"]["report"]["items"].clone();
    let gram = checks.as_array().unwrap().iter().find(|c| c["name"] == "E.gram_positive").unwrap();
    assert_eq!(gram["pass"], false);
}

#[test]
fn combined_exit_code_prefers_input_errors() {
    let (_d, dir) = corpus();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "[]").unwrap();
    let (g1, w, su3) = (file(&dir, "G1.json"), file(&dir, "G1-w(1_2).json"), file(&dir, "scalar-unitary-3.json"));
    let bad = bad.to_str().unwrap();
    assert_eq!(code(&covrep(&["check", "-p", "isometric", &g1, &w])), 1);
    assert_eq!(code(&covrep(&["check", "-p", "isometric", &g1, &w, bad])), 2);
    assert_eq!(code(&covrep(&["verify", "--theorem", "richter", &su3, &file(&dir, "G2-levels-1.json")])), 3);
}

#[test]
fn tolerance_flag_and_environment() {
    let (_d, dir) = corpus();
    let g1 = file(&dir, "G1.json");
    let out = covrep(&["--tolerance", "1e-6", "validate", &g1]);
    assert_eq!(json(&out)["tolerance"], 1e-6);
    let env = Command::new(env!("CARGO_BIN_EXE_covrep"))
        .args(["validate", &g1])
        .env("COVREP_TOLERANCE", "1e-4")
        .output()
        .unwrap();
    assert_eq!(json(&env)["tolerance"], 1e-4);
    assert_eq!(code(&covrep(&["--tolerance", "-1", "validate", &g1])), 2);
    assert_eq!(code(&covrep(&["--tolerance", "nan", "validate", &g1])), 2);
}

#[test]
fn text_format_names_each_check() {
    let (_d, dir) = corpus();
    let out = covrep(&["--format", "text", "check", "-p", "isometric,analytic", &file(&dir, "G1.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("isometric") && text.contains("analytic"), "{text}");
}

#[test]
fn generate_is_seeded_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    for profile in ["isometric", "concave", "shimorin", "doubly-commuting", "generic"] {
        let a = covrep(&["--seed", "7", "generate", "--profile", profile]);
        let b = covrep(&["--seed", "7", "generate", "--profile", profile]);
        assert_eq!(code(&a), 0, "{profile}");
        assert_eq!(a.stdout, b.stdout, "{profile}");
        let path = dir.path().join(format!("{profile}.json"));
        std::fs::write(&path, &a.stdout).unwrap();
        assert_eq!(code(&covrep(&["validate", path.to_str().unwrap()])), 0, "{profile}");
    }
}

#[test]
fn unknown_profile_and_theorem_are_usage_errors() {
    assert_eq!(code(&covrep(&["generate", "--profile", "wobbly"])), 2);
    assert_eq!(code(&covrep(&["verify", "--theorem", "t99", "x.json"])), 2);
}
