//! End-to-end tests for the command-line interface: exit-code contract,
//! canonical JSON output, and determinism of repeated runs.

use std::process::{Command, Output};

fn cobcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobcalc"))
        .args(args)
        .env_remove("COBCALC_DEFAULT_DEGREE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn universal_law_json_contains_the_lazard_term() {
    let out = cobcalc(&["fgl", "universal", "--degree", "2", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let terms = v["result"]["law"]["terms"].as_array().expect("terms");
    assert!(
        terms
            .iter()
            .any(|t| t["coeff"] == "-2*b1" && t["exps"] == serde_json::json!([1, 1])),
        "expected the -2*b1*x*y term in {terms:?}"
    );
}

#[test]
fn hrr_point_is_one() {
    let out = cobcalc(&["rr", "hrr", "--n", "0", "--d", "7"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "chi(P^0, O(7)) = 1");
}

#[test]
fn zeta_decompose_additive_pair() {
    let out = cobcalc(&["zeta", "decompose", "--law", "add", "--mult", "1,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("F_{1} = 1"));
    assert!(text.contains("F_{2} = 1"));
    assert!(text.contains("F_{1,2} = 0"));
}

#[test]
fn exit_codes_follow_the_contract() {
    // success
    let ok = cobcalc(&["fgl", "nseries", "--law", "mult", "--n", "3", "--degree", "4"]);
    assert_eq!(ok.status.code(), Some(0));
    // mathematical failure with witness
    let bad_law = cobcalc(&["fgl", "check", "--law", "x + y + x^2*y"]);
    assert_eq!(bad_law.status.code(), Some(1));
    assert!(stderr(&bad_law).contains("commutativity"));
    // usage error
    let usage = cobcalc(&["fgl", "nseries", "--law", "mult"]);
    assert_eq!(usage.status.code(), Some(2));
    let unknown = cobcalc(&["zeta", "decompose", "--law", "nosuch", "--mult", "1"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn default_degree_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_cobcalc"))
        .args(["fgl", "inverse", "--law", "mult"])
        .env("COBCALC_DEFAULT_DEGREE", "3")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "inv(x) = -x - x^2 - x^3"
    );
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let args = [
        "zeta", "decompose", "--law", "univ", "--mult", "2,3", "--degree", "5", "--json",
    ];
    let first = cobcalc(&args);
    let second = cobcalc(&args);
    assert!(first.status.success());
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn selftest_quick_passes_and_mutation_fails_with_witness() {
    let ok = cobcalc(&["selftest", "--profile", "quick"]);
    assert_eq!(ok.status.code(), Some(0), "stderr: {}", stderr(&ok));
    assert!(stdout(&ok).contains("selftest quick: ok"));

    let mutated = cobcalc(&["selftest", "--profile", "quick", "--mutation", "d-sign"]);
    assert_eq!(mutated.status.code(), Some(1));
    let err = stderr(&mutated);
    assert!(err.contains("chern/recursion"), "witness names the suite: {err}");

    let usage = cobcalc(&["selftest", "--profile", "nosuch"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn selftest_reports_are_deterministic() {
    let args = ["selftest", "--profile", "quick", "--seed", "7", "--json"];
    let first = cobcalc(&args);
    let second = cobcalc(&args);
    assert!(first.status.success());
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn law_file_round_trip() {
    let dir = std::env::temp_dir().join("cobcalc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mult-law.json");
    let export = cobcalc(&["fgl", "universal", "--degree", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&export)).unwrap();
    std::fs::write(&path, serde_json::to_string(&v["result"]["law"]).unwrap()).unwrap();
    let out = cobcalc(&[
        "fgl",
        "check",
        "--law-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
}
