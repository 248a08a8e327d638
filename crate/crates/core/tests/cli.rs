use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartan-zform")).args(args).output().expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("every line is JSON"))
        .collect()
}

#[test]
fn roots_of_w2() {
    let out = run(&["roots", "--family", "W", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out).len(), 6);
}

#[test]
fn rank_constraint_is_a_usage_error() {
    let out = run(&["roots", "--family", "S", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn opposite_pair_rewrites_with_unit_coefficients() {
    let out = run(&["rewrite", "dp(x[a1,1]⊗t,1) * dp(x[-a1,1]⊗t,1)", "--family", "W", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = &lines(&out)[0];
    assert_eq!(rec["oracle_check"], Value::Bool(true));
    let terms = rec["terms"].as_array().unwrap();
    // the swapped product plus h_α⊗t², which spans two pᵢ
    assert_eq!(terms.len(), 3);
    for t in terms {
        let c = t["coefficient"].as_str().unwrap();
        assert!(c == "1" || c == "-1", "{c}");
    }
}

#[test]
fn basis_element_rewrites_to_itself() {
    let out = run(&["rewrite", "p(1,{t:1})"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = &lines(&out)[0];
    let terms = rec["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["monomial"], "p(1,{t:1})");
    assert_eq!(terms[0]["coefficient"], "1");
}

#[test]
fn malformed_expression_exits_2() {
    let out = run(&["rewrite", "dp(x[a1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn integrality_violation_exits_1() {
    let out = run(&[
        "rewrite",
        "odd(x[-e1,1]⊗t) * odd(x[-e1,1]⊗t)",
        "--family",
        "S_tilde",
        "--n",
        "4",
        "--fault",
        "constant",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let rec = &lines(&out)[0];
    assert_eq!(rec["status"], "ERROR");
    assert!(rec["detail"].as_str().unwrap().contains("integrality"));
}

#[test]
fn only_selects_lemma_clauses() {
    let out = run(&["verify", "--only", "lemma-degree", "--family", "W", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = lines(&out);
    assert!(!recs.is_empty());
    for r in &recs {
        assert!(r["identity"].as_str().unwrap().starts_with("lemma-degree-"));
        for key in ["identity", "params", "status", "lhs_terms", "rhs_terms", "max_degree", "elapsed"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert!(r["elapsed"].is_null());
    }
}

#[test]
fn fault_self_test_reports_fail() {
    let out = run(&["verify", "--only", "identities", "--fault", "sign", "--bound-r", "1", "--bound-chi", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(lines(&out).iter().any(|r| r["status"] == "FAIL"));
}

#[test]
fn verify_fails_iff_a_line_fails() {
    let clean = run(&["verify", "--only", "identities,theorem", "--samples", "20"]);
    assert_eq!(clean.status.code(), Some(0));
    assert!(lines(&clean).iter().all(|r| r["status"] == "PASS"));
    // the root clauses are known to fail on W(2)
    let roots = run(&["verify", "--only", "roots"]);
    assert_eq!(roots.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--only", "theorem,decompose", "--samples", "15", "--seed", "9", "--family", "S", "--n", "3"];
    let a = run(&args);
    let b = run(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn flags_override_config_file() {
    let dir = std::env::temp_dir().join(format!("cartan-zform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"family": "H", "n": 4}"#).unwrap();
    let from_file = lines(&run(&["roots", "--config", cfg.to_str().unwrap()]));
    assert_eq!(from_file.len(), 12);
    let overridden = lines(&run(&["roots", "--config", cfg.to_str().unwrap(), "--family", "W", "--n", "2"]));
    assert_eq!(overridden.len(), 6);
    let out = dir.join("roots.jsonl");
    let status = run(&["roots", "--out", out.to_str().unwrap()]);
    assert!(status.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 6);
}

#[test]
fn decompose_splits_into_three_factors() {
    let out = run(&["decompose", "dp(x[a1,1]⊗t,1) * dp(x[-a1,1]⊗t,1)"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = &lines(&out)[0];
    for t in rec["terms"].as_array().unwrap() {
        for part in ["minus", "zero", "plus"] {
            assert!(t.get(part).is_some());
        }
    }
}
