//! Output and exit-status contract of the binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_streamprop")).args(args).env_remove("STREAMPROP_TOL").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn demos_print_their_outputs() {
    let o = run(&["demo", "half-scalar", "--ticks", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Vec<f64> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, vec![0.5, 0.25, 0.125]);

    let o = run(&["demo", "fibonacci", "--ticks", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[0,1,1,2,3,5]");
}

#[test]
fn every_demo_meets_its_exit_contract() {
    for (name, code) in [
        ("half-scalar", 0),
        ("cnot-cascade", 0),
        ("bell-postselect", 0),
        ("store-forever", 0),
        ("fibonacci", 0),
        ("parity-mealy", 0),
        ("s5-unsound", 1),
    ] {
        let o = run(&["demo", name, "--ticks", "4", "--json"]);
        assert_eq!(o.status.code(), Some(code), "{name}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["ok"], true, "{name}");
    }
}

#[test]
fn store_forever_equals_discard() {
    let o = run(&["equiv", "store-forever.sexp", "discard.sexp", "--ticks", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "EqualUpTo(8)");
}

#[test]
fn unsound_register_is_a_negative_verdict() {
    let o = run(&["equiv", "s5-unsound.sexp", "identity.sexp"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "DifferAt(1)");
}

#[test]
fn monotone_verdict_record() {
    let o = run(&["monotone", "bell-postselect", "--ticks", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({ "monotone": true, "mode": "lax", "first_failure": null }));

    let o = run(&["monotone", "bell-postselect", "--ticks", "4", "--mode", "eq", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["first_failure"], 1);
}

#[test]
fn approx_emits_morphisms() {
    let o = run(&["approx", "half-scalar", "--ticks", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[1]["choi"][0][0], serde_json::json!([0.25, 0.0]));
}

#[test]
fn parse_errors_carry_positions() {
    let p = scratch("bad.sexp", "(seq (omega mix)\n  (omega nosuchgate))");
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = String::from_utf8_lossy(&o.stderr);
    assert!(e.contains(":2:"), "{e}");
}

#[test]
fn type_errors_carry_paths() {
    let p = scratch("mistyped.sexp", "(seq (omega mix) (omega cnot))");
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = String::from_utf8_lossy(&o.stderr);
    assert!(e.contains("type mismatch at ["), "{e}");
}

#[test]
fn rewrite_lists_and_applies_sites() {
    let p = scratch("elim.sexp", "(seq (init 0) (deriv 0))");
    let path = p.to_str().unwrap();
    let o = run(&["rewrite", path, "--rule", "ELIM", "--dir", "fwd"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
    let o = run(&["rewrite", path, "--rule", "ELIM", "--dir", "fwd", "--site", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("(id"), "{}", stdout(&o));
    let o = run(&["rewrite", path, "--rule", "DELAY-IDEM"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn audit_report_and_s5() {
    let o = run(&["audit-rules", "--rule", "ELIM", "--trials", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["failures"], 0);
    let o = run(&["audit-rules", "--rule", "S5", "--trials", "5", "--backend", "intlin"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tolerance_comes_from_the_environment() {
    // with a huge tolerance the strict check can no longer tell the steps apart
    let strict = ["monotone", "bell-postselect", "--ticks", "3", "--mode", "eq"];
    assert_eq!(run(&strict).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_streamprop")).args(strict).env("STREAMPROP_TOL", "10").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_streamprop"))
        .args(strict)
        .arg("--tol")
        .arg("1e-9")
        .env("STREAMPROP_TOL", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_inputs_are_errors() {
    assert_eq!(run(&["check", "no-such-file.sexp"]).status.code(), Some(2));
    assert_eq!(run(&["demo", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["check", "identity", "--backend", "nope"]).status.code(), Some(2));
}

#[test]
fn custom_generators_from_json() {
    let g = scratch("flip.json", r#"{"n_in":1,"n_out":1,"table":[1,0]}"#);
    let d = scratch("flip.sexp", "(seq (omega flip) (omega flip))");
    let spec = format!("flip={}", g.to_str().unwrap());
    let o = run(&["equiv", d.to_str().unwrap(), "identity", "--backend", "finset", "--gen", &spec]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}
