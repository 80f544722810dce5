use std::process::{Command, Output};

use serde_json::Value;
use tits_zeta::report::{RunReport, Verdict};

fn run(args: &[&str]) -> Output {
    let cache = std::env::temp_dir().join(format!("tits-zeta-cli-test-{}", std::process::id()));
    Command::new(env!("CARGO_BIN_EXE_tits-zeta"))
        .args(args)
        .env("TITS_ZETA_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn x0_verify_matches() {
    let out = run(&["zeta", "x0", "--q", "2", "--n", "3", "--k", "1", "--mode", "verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("factored: (1 - 2u^2)^6 (1 - 16u^2)"), "{text}");
    assert!(text.contains("verdict: match"));
}

#[test]
fn json_report_round_trips() {
    let out = run(&["zeta", "x2", "--q", "2", "--n", "3", "--mode", "verify", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let report = RunReport::from_json(text.trim()).unwrap();
    assert_eq!(report.verdict, Verdict::Match);
    assert_eq!(report.degree, Some(42));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["brute"]["vertices"], 42);
    assert_eq!(v["expanded"], v["brute"]["values"]);
    // stable field order up to the timing field
    let reencoded = report.to_json();
    let cut = |s: &str| s[..s.find("\"timing_ms\"").unwrap()].to_string();
    assert_eq!(cut(&reencoded), cut(text.trim()));
}

#[test]
fn product_verify_uses_cycles() {
    let out = run(&["zeta", "product", "--q", "2", "--dims", "2,2", "--mode", "verify", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "match");
    assert_eq!(v["degree"], 18);
}

#[test]
fn trivial_building() {
    let out = run(&["zeta", "building", "--q", "3", "--n", "2", "--no-cache"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("factored: 1"));
}

#[test]
fn x0_table_rows() {
    let out = run(&["tables", "--which", "x0", "--q", "2", "--max-n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("n = ")).count(), 4);
    assert!(text.contains("(1 - 16u^2)^124 (1 - 128u^2)^30 (1 - 4096u^2)"));
}

#[test]
fn x2_latex_table_has_special_rows() {
    let out = run(&["tables", "--which", "x2", "--q", "2", "--max-n", "6", "--format", "latex"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("(2,2,2)"), "{text}");
    assert!(text.contains("\\omega") || text.contains("q^{"), "{text}");
}

#[test]
fn hecke_commands() {
    let out = run(&["hecke", "verify", "--n", "3", "--q", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "match");

    let out = run(&["hecke", "traces", "--n", "6", "--mu", "2,2,2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let psi: Vec<(Vec<u64>, String)> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let l = r["lambda"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
            (l, r["psi"].as_str().unwrap().to_string())
        })
        .collect();
    assert!(psi.contains(&(vec![4, 2], "0".to_string())));
    assert!(psi.contains(&(vec![5, 1], "-1".to_string())));
    assert!(psi.contains(&(vec![2, 2, 2], "1".to_string())));
}

#[test]
fn kostka_methods_agree() {
    let out = run(&["kostka", "--lambda", "10,2", "--mu", "6,4,2", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("3 "));
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(run(&["zeta", "x0", "--q", "6", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["zeta", "x0", "--q", "2"]).status.code(), Some(2));
    assert_eq!(run(&["zeta", "x2", "--q", "2", "--n", "4", "--a", "2", "--b", "2"]).status.code(), Some(2));
    assert_eq!(run(&["kostka", "--lambda", "1,2", "--mu", "2,1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
