use std::io::Cursor;
use std::process::Command;

use covkh_cli::{exit_code, run, Report, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut argv = vec!["covkh"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut Cursor::new(stdin.as_bytes().to_vec()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend_from_slice(&["--output", "json"]);
    let (code, out, err) = call(&a, "");
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn unknot_odd_table() {
    let (code, out, _) = call(&["--pd", "UNKNOT 1", "--variant", "odd"], "");
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("sl2 odd homology"));
    let v = json(&["--pd", "UNKNOT 1", "--variant", "odd"]);
    let res = &v["pipelines"][0]["results"][0];
    assert_eq!(res["variant"], "odd");
    let groups: Vec<(i64, i64, u64)> = res["homology"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| (g["t"].as_i64().unwrap(), g["q"].as_i64().unwrap(), g["free"].as_u64().unwrap()))
        .collect();
    assert_eq!(groups, vec![(0, -1, 1), (0, 1, 1)]);
}

#[test]
fn homology_schema() {
    let v = json(&["--pd", "trefoil", "--variant", "unified-report", "--pipeline", "both"]);
    let pipes = v["pipelines"].as_array().unwrap();
    assert_eq!(pipes.len(), 2);
    for p in pipes {
        for r in p["results"].as_array().unwrap() {
            let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
            assert_eq!(keys, ["euler", "homology", "variant"]);
            for g in r["homology"].as_array().unwrap() {
                let keys: Vec<&String> = g.as_object().unwrap().keys().collect();
                assert_eq!(keys, ["free", "q", "t", "torsion"]);
            }
        }
    }
    let even = &pipes[0]["results"][0]["homology"];
    assert!(even.as_array().unwrap().iter().any(|g| g["t"] == -2 && g["q"] == -7 && g["torsion"][0] == 2));
}

#[test]
fn hopf_all_checks() {
    let v = json(&[
        "--pd",
        "hopf",
        "--pipeline",
        "both",
        "--checks",
        "equivalence,jones,mod2,sign-independence",
    ]);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks.iter().all(|c| c["passed"] == true));
    let eq = checks.iter().find(|c| c["name"] == "equivalence").unwrap();
    assert_eq!(eq["data"]["comparison"]["phi"].as_array().unwrap().len(), 4);
}

#[test]
fn cocycle_suite_needs_no_input() {
    let v = json(&["--checks", "cocycle-suite"]);
    assert_eq!(v["input"], Value::Null);
    assert_eq!(v["checks"][0]["passed"], true);
    assert_eq!(v["checks"][0]["data"]["ladybug_variant"], "[X]");
}

#[test]
fn json_is_deterministic() {
    let args = ["--pd", "5_2", "--pipeline", "both", "--checks", "equivalence,sign-independence", "--seed", "17", "--output", "json", "--emit-cube"];
    let (c1, a, _) = call(&args, "");
    let (c2, b, _) = call(&args, "");
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let mut other = args;
    other[7] = "18";
    assert_ne!(call(&other, "").1, a);
}

#[test]
fn stdin_and_file_input() {
    let text = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
    let (code, from_stdin, _) = call(&["--pd", "-", "--output", "json"], text);
    assert_eq!(code, EXIT_OK);
    let path = std::env::temp_dir().join(format!("covkh-cli-test-{}.pd", std::process::id()));
    std::fs::write(&path, text).unwrap();
    let (code, from_file, _) = call(&["--pd", path.to_str().unwrap(), "--output", "json"], "");
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, EXIT_OK);
    assert_eq!(from_stdin, from_file);
    assert_eq!(from_file, call(&["--pd", "trefoil", "--output", "json"], "").1);
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["--pd", "X(1,2"],
        vec!["--pd", "X(1,2,3,4)"],
        vec![],
        vec!["--pd", "hopf", "--checks", "equivalence"],
        vec!["--pd", "7_1", "--max-crossings", "5"],
        vec!["--pd", "hopf", "--pipeline", "sl3"],
        vec!["--pd", "hopf", "--checks", "bogus"],
    ] {
        let (code, _, err) = call(&args, "");
        assert_eq!(code, EXIT_INPUT, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn failed_check_exits_1() {
    let report = Report { json: Value::Null, text: String::new(), failed: true };
    assert_eq!(exit_code(&report), EXIT_CHECK_FAILED);
    let report = Report { json: Value::Null, text: String::new(), failed: false };
    assert_eq!(exit_code(&report), EXIT_OK);
}

#[test]
fn binary_respects_thread_setting() {
    let out = Command::new(env!("CARGO_BIN_EXE_covkh"))
        .args(["--pd", "figure-eight", "--checks", "jones", "--output", "json"])
        .env("COVKH_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"][0]["passed"], true);
    let bad = Command::new(env!("CARGO_BIN_EXE_covkh")).args(["--pd", "X(9,9,9,9)"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
}
