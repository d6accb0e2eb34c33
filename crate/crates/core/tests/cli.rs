use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn braidcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidcat"))
        .args(args)
        .env_remove("BRAIDCAT_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("braidcat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn residual(report: &Value, check: &str, name: &str) -> f64 {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == check)
        .unwrap_or_else(|| panic!("no check {check}"))["residuals"][name]
        .as_f64()
        .unwrap()
}

#[test]
fn list_builtins_names_the_registry() {
    let o = braidcat(&["list-builtins", "--format", "text"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for needle in ["Z2", "Z2xZ2", "clifford1_graded", "delta_action", "trivial:<n>", "bicharacter:<k>"] {
        assert!(text.contains(needle), "{needle} missing");
    }

    let o = braidcat(&["list-builtins"]);
    let v = json(&o);
    let z3 = v["groups"].as_array().unwrap().iter().find(|g| g["name"] == "Z3").unwrap();
    let bichar = z3["rmatrices"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r.as_str().unwrap().starts_with("bicharacter:"))
        .count();
    assert_eq!(bichar, 3);
}

#[test]
fn check_rmatrix_trivial_and_sign() {
    assert_eq!(code(&braidcat(&["check-rmatrix", "--group", "Z2", "--r", "trivial"])), 0);
    let o = braidcat(&["check-rmatrix", "--group", "Z2", "--r", "sign"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["schema"], "braidcat-report/1");
    assert_eq!(v["pass"], true);
    for axiom in ["left_comultiplication", "right_comultiplication", "braiding"] {
        assert!(residual(&v, "rmatrix[Z2/sign]", axiom) <= 1e-9);
    }
    for c in v["checks"].as_array().unwrap() {
        assert!(!c["paper_ref"].as_str().unwrap().is_empty());
    }
}

#[test]
fn reports_are_byte_identical() {
    let a = braidcat(&["build-core", "--group", "Z3", "--r", "bicharacter:1"]);
    let b = braidcat(&["build-core", "--group", "Z3", "--r", "bicharacter:1"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);

    let out = std::env::temp_dir().join(format!("braidcat-cli-out-{}.json", std::process::id()));
    let c = braidcat(&["build-core", "--group", "Z3", "--r", "bicharacter:1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&c), 0);
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
    let _ = std::fs::remove_file(out);
}

#[test]
fn every_command_runs() {
    let cases: &[&[&str]] = &[
        &["check-bicharacter", "--group", "Z2xZ2"],
        &["build-core", "--group", "Z2", "--r", "sign"],
        &["build-braided", "--group", "Z2", "--r", "sign", "--objects", "Cl,Cl"],
        &["build-braided", "--group", "Z2", "--r", "sign", "--objects", "Cl,D,A"],
        &["build-braided", "--group", "Z2", "--r", "sign", "--objects", "A,Cl,D,A"],
        &["extract-r", "--group", "Z4", "--r", "bicharacter:3"],
        &["left-suite", "--group", "Z3", "--r", "bicharacter:2"],
    ];
    for args in cases {
        let o = braidcat(args);
        assert_eq!(code(&o), 0, "{args:?}: {}", stderr(&o));
        assert_eq!(json(&o)["pass"], true, "{args:?}");
    }
    let o = braidcat(&["build-braided", "--group", "Z2", "--r", "sign", "--objects", "Cl,Cl", "--format", "text"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("PASS  braided[Z2/sign](clifford1_graded, clifford1_graded)"));
}

#[test]
fn tolerance_override_is_validated_and_applied() {
    let o = braidcat(&["check-rmatrix", "--group", "Z2", "--tol", "0.5"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("--tol"));
    let o = braidcat(&["check-rmatrix", "--group", "Z2", "--tol", "0"]);
    assert_eq!(code(&o), 1);

    // A limit far below rounding error turns passing checks into failures.
    let o = braidcat(&["check-rmatrix", "--group", "Z2", "--r", "sign", "--tol", "1e-300"]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_eq!(v["pass"], false);
    assert_eq!(v["tolerance"].as_f64(), Some(1e-300));
}

#[test]
fn input_errors_exit_one() {
    let o = braidcat(&["check-rmatrix", "--group", "Z5"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("Z5"));

    let o = braidcat(&["check-rmatrix", "--group", "Z3", "--r", "sign"]);
    assert_eq!(code(&o), 1);

    let o = braidcat(&["build-braided", "--group", "Z2", "--objects", "A"]);
    assert_eq!(code(&o), 1);

    let o = braidcat(&["build-braided", "--group", "Z3", "--objects", "Cl,A"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("grading"));

    let o = Command::new(env!("CARGO_BIN_EXE_braidcat"))
        .args(["verify-all"])
        .env("BRAIDCAT_SEED", "minus-one")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("BRAIDCAT_SEED"));
}

#[test]
fn malformed_json_reports_position() {
    let p = scratch("broken.json", "{\n  \"kind\": \"group_table\",\n  \"table\": [[0, 1], [1 0]]\n}\n");
    let o = braidcat(&["check-bicharacter", "--group", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("line 3"), "{err}");

    let p = scratch("unknown.json", r#"{"kind": "group_table", "table": [[0]], "extra": 1}"#);
    let o = braidcat(&["check-bicharacter", "--group", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("extra"));
}

#[test]
fn invariant_failure_at_load_names_the_equation() {
    // Diagonal unitary on H⊗H that is not a bicharacter of Z2.
    let p = scratch(
        "bad_r.json",
        r#"{"group": {"kind": "builtin", "name": "Z2"},
            "custom": [[[1,0],[0,0],[0,0],[0,0]],
                       [[0,0],[0,1],[0,0],[0,0]],
                       [[0,0],[0,0],[1,0],[0,0]],
                       [[0,0],[0,0],[0,0],[1,0]]]}"#,
    );
    let o = braidcat(&["check-rmatrix", "--r", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("violated") && err.contains("residual"), "{err}");
}

#[test]
fn json_inputs_round_trip_through_the_pipelines() {
    let s3 = r#"{"kind": "group_table", "name": "S3", "table": [
        [0,1,2,3,4,5],[1,2,0,5,3,4],[2,0,1,4,5,3],[3,4,5,0,1,2],[4,5,3,2,0,1],[5,3,4,1,2,0]]}"#;
    let p = scratch("s3.json", s3);
    let o = braidcat(&["check-bicharacter", "--group", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let r = scratch(
        "z4_r.json",
        r#"{"group": {"kind": "finite_abelian", "factors": [4]}, "bicharacter": [[0,0,0,0],[0,1,2,3],[0,2,0,2],[0,3,2,1]]}"#,
    );
    let o = braidcat(&["extract-r", "--r", r.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    // ℂ² with the trivial action, given by coordinates against b_j ⊗ a_k.
    let obj = scratch(
        "d.json",
        r#"{"name": "D2", "algebra": {"carrier_dim": 2, "basis": [
              [[[1,0],[0,0]],[[0,0],[0,0]]],
              [[[0,0],[0,0]],[[0,0],[1,0]]]]},
            "action": [[[1,0],[1,0],[0,0],[0,0]], [[0,0],[0,0],[1,0],[1,0]]]}"#,
    );
    let objects = format!("{},Cl", obj.to_str().unwrap());
    let o = braidcat(&["build-braided", "--group", "Z2", "--r", "sign", "--objects", &objects]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["name"] == "tensor[Z2/sign](D2, clifford1_graded)"));
}
