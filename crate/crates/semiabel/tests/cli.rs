use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn write(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("semiabel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(task: &str, config: &PathBuf, extra: &[&str], env_tol: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_semiabel"));
    cmd.arg(task).arg("--config").arg(config).args(extra);
    match env_tol {
        Some(t) => cmd.env("SEMIABEL_TOL", t),
        None => cmd.env_remove("SEMIABEL_TOL"),
    };
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_passes_and_echoes_seed() {
    let p = write("verify.json", r#"{"task":"verify","curve":{"g2":4,"g3":0}}"#);
    let out = run("verify", &p, &["--json", "--seed", "9"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["overall"], "pass");
    assert_eq!(v["environment"]["seed"], 9);
    let names: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["anchor"].as_str().is_some_and(|a| !a.is_empty())));
    let text = run("verify", &p, &[], None);
    assert!(String::from_utf8(text.stdout).unwrap().contains("overall: pass"));
}

#[test]
fn tolerance_precedence() {
    let plain = write("tol_plain.json", r#"{"task":"periods","curve":{"g2":4,"g3":0}}"#);
    let with_tol = write("tol_cfg.json", r#"{"task":"periods","curve":{"g2":4,"g3":0},"tol":1e-7}"#);
    let tol = |o: &Output| json(o)["environment"]["tol"].as_f64().unwrap();
    assert_eq!(tol(&run("periods", &plain, &["--json"], None)), 1e-9);
    assert_eq!(tol(&run("periods", &plain, &["--json"], Some("1e-8"))), 1e-8);
    assert_eq!(tol(&run("periods", &with_tol, &["--json"], Some("1e-8"))), 1e-7);
    assert_eq!(tol(&run("periods", &with_tol, &["--json", "--tol", "1e-6"], Some("1e-8"))), 1e-6);
}

#[test]
fn input_errors_exit_one() {
    let conflicting = write("conflict.json", r#"{"task":"verify","curve":{"g2":4,"g3":0,"lattice":{"w1":1,"w2":{"im":1}}}}"#);
    let out = run("verify", &conflicting, &[], None);
    assert_eq!(out.status.code(), Some(1));
    let bad = write(
        "bad.json",
        r#"{"task":"classify","curve":{"g2":4,"g3":0},"motive":{"points":[{"base":{"x":1}}]}}"#,
    );
    let out = run("classify", &bad, &[], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("/motive/points/0/base/y"));
    let missing = PathBuf::from("/nonexistent/semiabel.json");
    assert_eq!(run("verify", &missing, &[], None).status.code(), Some(1));
    let p = write("verify2.json", r#"{"task":"verify","curve":{"g2":4,"g3":0}}"#);
    assert_eq!(run("nonsense", &p, &[], None).status.code(), Some(1));
    assert_eq!(run("verify", &p, &["--bogus"], None).status.code(), Some(1));
    assert_eq!(run("verify", &p, &["--tol=-1"], None).status.code(), Some(1));
    let singular = write("singular.json", r#"{"task":"periods","curve":{"g2":3,"g3":1}}"#);
    assert_eq!(run("periods", &singular, &[], None).status.code(), Some(1));
}

#[test]
fn classify_and_bounds_from_json() {
    let torsion = write(
        "classify.json",
        r#"{"task":"classify","curve":{"g2":4,"g3":0},"motive":{"extension_params":[{"x":0,"y":0}],"points":[{"base":"O","fiber":-1}]}}"#,
    );
    let out = run("classify", &torsion, &["--json"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["result"]["cm"]["discriminant"], -4);
    assert_eq!(v["result"]["dim_B"], 0);
    assert_eq!(v["result"]["dim_Gal"], 2);
    let bounds = write("bounds.json", &std::fs::read_to_string(&torsion).unwrap().replace("classify", "bounds"));
    assert_eq!(run("bounds", &torsion, &[], None).status.code(), Some(1));
    let out = run("bounds", &bounds, &["--json"], None);
    assert_eq!(json(&out)["result"]["bounds"]["WSA_V1"], 0);
    let override_bad = write(
        "override.json",
        r#"{"task":"classify","curve":{"g2":4,"g3":0},"motive":{"points":[{"base":"O","fiber":2}],"cm_override":-3}}"#,
    );
    assert_eq!(run("classify", &override_bad, &[], None).status.code(), Some(1));
}
