use std::path::PathBuf;
use std::process::Command;

use coact::clifford::{Algebra, AlgebraDescriptor};
use coact::comodule::canonical_coaction;
use coact::quadratic::classify_structure;
use coact::scalars::Field;
use serde_json::{json, Value};

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_coact")).args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, value)
}

fn quaternions() -> Algebra {
    Algebra::new(AlgebraDescriptor::from_ints(&Field::rational(), 1, &[1], &[0], &[])).unwrap()
}

#[test]
fn semisimple_golden() {
    let q = example("quaternion_n1.json");
    let (code, v) = run(&["-a", q.to_str().unwrap(), "semisimple"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({ "det_q": "1", "semisimple": true }));
}

#[test]
fn outputs_match_the_library() {
    let q = example("quaternion_n1.json");
    let q = q.to_str().unwrap();
    let (code, v) = run(&["-a", q, "canonical-coaction"]);
    assert_eq!(code, 0);
    let want = serde_json::to_value(canonical_coaction(&quaternions()).unwrap().to_json()).unwrap();
    assert_eq!(v, want);
    let (_, v) = run(&["-a", q, "classify"]);
    assert_eq!(v, serde_json::to_value(classify_structure(&quaternions())).unwrap());
}

#[test]
fn canonical_then_verify_and_inner_tuple() {
    let dir = tempfile::tempdir().unwrap();
    let q = example("quaternion_n1.json");
    let q = q.to_str().unwrap();
    let (_, rho) = run(&["-a", q, "canonical-coaction"]);
    let path = dir.path().join("rho.json");
    std::fs::write(&path, rho.to_string()).unwrap();
    let (code, report) = run(&["-a", q, "verify-coaction", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["passed"], json!(true));
    let inner = example("quaternion_inner.json");
    let (code, rho2) = run(&["-a", q, "coaction-from-inner", inner.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(rho2, rho);
    let (code, z) = run(&["-a", q, "coinvariants", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(z, json!({ "dim": 1, "basis": [{ "1": "1" }] }));
}

#[test]
fn exit_code_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let garbage = write("garbage.json", "{ not json");
    let unknown = write("unknown.json", r#"{"field":{"kind":"rational"},"n":0,"alpha":"1","mu":"2"}"#);
    let char2 = write("char2.json", r#"{"field":{"kind":"prime","p":2},"n":0,"alpha":"1"}"#);
    let lam = write(
        "lambda.json",
        r#"{"field":{"kind":"rational"},"n":2,"alpha":"1","beta":["1","1"],"gamma":["0","0"],"lambda":[{"i":2,"j":2,"value":"1"}]}"#,
    );
    // ρ(g x) = g x ⊗ g is not ρ(g)ρ(x)
    let broken = write("broken.json", r#"{"rho":{"1":{"1 ⊗ 1":"1"},"g":{"g ⊗ g":"1"},"x{1}":{"x{1} ⊗ g":"1"},"g x{1}":{"g x{1} ⊗ g":"1"}}}"#);
    let bad_inner = write("bad_inner.json", r#"{"c":{"g":"1"},"u":[{"g":"1"}]}"#);
    let sq = example("quaternion_n1.json");
    let sq = sq.to_str().unwrap();
    let ext = example("exterior_n2.json");
    let ext = ext.to_str().unwrap();
    let gf5 = example("cl3_n2_gf5.json");
    let gf5 = gf5.to_str().unwrap();
    let sweedler = example("sweedler_h4.json");
    let sweedler = sweedler.to_str().unwrap();
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["-a", sq, "info"], 0),
        (vec!["-a", sweedler, "bialgebra"], 0),
        (vec!["-a", ext, "bialgebra"], 1),
        (vec!["-a", ext, "semisimple"], 1),
        (vec!["-a", ext, "radical"], 0),
        (vec!["-a", gf5, "split-even"], 0),
        (vec!["-a", sq, "split-even"], 1),
        (vec!["-a", sq, "verify-coaction", &broken], 1),
        (vec!["-a", sq, "coaction-from-inner", &bad_inner], 1),
        (vec!["-a", sq, "enumerate"], 1),
        (vec!["verify-hopf", "--n", "1"], 0),
        (vec!["verify-duality", "--n", "1", "--field", "prime:7"], 0),
        (vec!["-a", &garbage, "info"], 2),
        (vec!["-a", &unknown, "info"], 2),
        (vec!["-a", &char2, "info"], 2),
        (vec!["-a", &lam, "info"], 2),
        (vec!["-a", sq, "verify-coaction", "/no/such/file"], 2),
        (vec!["-a", sq, "trace", "--element", "{\"q\":\"1\"}"], 2),
        (vec!["info"], 2),
        (vec!["no-such-command"], 2),
        (vec!["verify-hopf", "--n", "1", "--field", "prime:4"], 2),
    ];
    for (args, want) in cases {
        let (code, v) = run(&args);
        assert_eq!(code, want, "{args:?} gave {v}");
        if want == 1 {
            assert!(v.is_object(), "{args:?} must explain the failure in JSON");
        }
    }
}

#[test]
fn failures_carry_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, r#"{"rho":{"1":{"1 ⊗ 1":"1"},"g":{"g ⊗ g":"1"},"x{1}":{"x{1} ⊗ g":"1"}}}"#).unwrap();
    let sq = example("quaternion_n1.json");
    let (code, v) = run(&["-a", sq.to_str().unwrap(), "verify-coaction", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    let failed: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == json!(false)).collect();
    assert!(!failed.is_empty());
    assert!(failed[0]["witness"].is_array());
}
