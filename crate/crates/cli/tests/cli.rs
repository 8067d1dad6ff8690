use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn exotic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exotic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn cfg(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

#[test]
fn sl2_bruhat_example() {
    let out = exotic(&[
        "sl2", "bruhat", "--matrix", "1;1;1;0", "-p", "2", "--vars", "t",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["display"], "Cell{1,1,0}");
}

#[test]
fn field_eval_reduces() {
    let out = exotic(&["field", "eval", "t/(t)"]);
    assert_eq!(json(&out)["value"], "1");
    let out = exotic(&["field", "eval", "t^2+u"]);
    assert_eq!(json(&out)["value"], "t^2+u");
    let out = exotic(&["field", "eval", "(1+t)/(u*v)"]);
    assert_eq!(json(&out)["value"], "(t+1)/(u*v)");
}

#[test]
fn parse_errors_exit_2() {
    let out = exotic(&["field", "eval", "t^^2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error at"));
    assert_eq!(
        exotic(&["sl2", "bruhat", "--matrix", "1;0;1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(exotic(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn tower_validation_exit_codes() {
    assert_eq!(
        exotic(&["tower", "validate", &cfg("tower_good.json")])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        exotic(&["tower", "validate", &cfg("tower_two_level.json")])
            .status
            .code(),
        Some(0)
    );
    let out = exotic(&["tower", "validate", &cfg("tower_bad.json")]);
    assert_eq!(out.status.code(), Some(1));
    let rep = json(&out);
    assert_eq!(rep["accepted"], false);
    let c2 = rep["levels"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "condition2_basis")
        .unwrap()
        .clone();
    assert_eq!(c2["passed"], false);
    assert_eq!(
        exotic(&["tower", "validate", "/no/such.json"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn indifferent_validation() {
    let out = exotic(&["indifferent", "validate", &cfg("c2.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["levels"][0]["dims"]["deg_K_over_K2"], 4);
}

#[test]
fn g2_commutator_display() {
    let out = exotic(&[
        "u", "comm", "--kind", "g2", "x1(1)", "x6(1)", "-p", "3", "--vars", "s",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["normal_form"], "x2(2)*x3(1)*x4(1)*x5(2)");
}

#[test]
fn unipotent_domain_violations_exit_1() {
    let c2 = cfg("c2.json");
    let out = exotic(&[
        "u", "mult", "--kind", "c2", "--config", &c2, "x4(u)", "x1(1)",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = exotic(&["u", "center", "--kind", "c2", "--config", &c2, "x2(t)"]);
    assert_eq!(json(&out)["center"], true);
}

#[test]
fn sl2_membership_and_witness() {
    let tf = cfg("timmesfeld.json");
    let out = exotic(&["sl2", "witness", "--config", &tf, "--tau", "(t+u)*(1+t)"]);
    assert_eq!(out.status.code(), Some(0));
    let w = json(&out);
    assert_eq!(w["verdict"], "yes");
    assert_eq!(w["witness"].as_array().unwrap().len(), 2);
    let out = exotic(&["sl2", "member", "--config", &tf, "--matrix", "1;v;0;1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "no");
}

#[test]
fn sp4_commands() {
    let sp = cfg("sp4.json");
    let m = "1;0;0;0;t;1;0;0;0;0;1;0;0;0;t;1";
    let out = exotic(&["sp4", "bruhat", "--config", &sp, "--matrix", m]);
    let b = json(&out);
    assert_eq!(b["w"], "s_alpha");
    assert_eq!(b["tau"]["s_alpha"], "t");
    assert_eq!(b["u1"]["alpha"], "1/t");
    let out = exotic(&["sp4", "member", "--config", &sp, "--matrix", m]);
    assert_eq!(json(&out)["verdict"], "yes");
    let bad = "1;0;0;0;v;1;0;0;0;0;1;0;0;0;v;1";
    assert_eq!(
        exotic(&["sp4", "member", "--config", &sp, "--matrix", bad])
            .status
            .code(),
        Some(1)
    );
    let out = exotic(&[
        "sp4",
        "torus-check",
        "--config",
        &sp,
        "--s-alpha",
        "u",
        "--s-beta",
        "u",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reconstruct_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let p = path.to_string_lossy().into_owned();
    let out = exotic(&[
        "reconstruct",
        "c2",
        "--config",
        &cfg("c2.json"),
        "--samples",
        "10",
        "--seed",
        "4",
        "--report",
        &p,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rep["mismatches"].as_array().unwrap().len(), 0);
    assert_eq!(rep["instances"], 10);

    let out = exotic(&[
        "reconstruct",
        "c2",
        "--config",
        &cfg("c2.json"),
        "--samples",
        "10",
        "--corrupt",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

fn write_suite(dir: &Path, body: &str) -> String {
    for f in [
        "tower_good.json",
        "tower_bad.json",
        "c2.json",
        "timmesfeld.json",
        "g2.json",
        "sp4.json",
    ] {
        std::fs::copy(configs().join(f), dir.join(f)).unwrap();
    }
    let p = dir.join("suite.json");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn shipped_suite_passes_and_is_deterministic() {
    let suite = cfg("suite.json");
    let a = exotic(&["suite", "run", "--config", &suite, "--samples", "5"]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stdout)
    );
    let rep = json(&a);
    assert_eq!(rep["summary"]["fail"], 0);
    assert_eq!(rep["summary"]["unknown"], 0);
    let names: Vec<&str> = rep["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    let b = exotic(&["suite", "run", "--config", &suite, "--samples", "5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn corrupted_tower_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let suite = write_suite(dir.path(), r#"{"samples": 4, "tower": "tower_bad.json"}"#);
    let out = exotic(&["suite", "run", "--config", &suite]);
    assert_eq!(out.status.code(), Some(1));
    let rep = json(&out);
    let c = &rep["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "tower.validate")
        .unwrap()
        .clone();
    assert_eq!(c["status"], "fail");
    let failed = c["counterexample"]["failed_checks"].as_array().unwrap();
    assert!(failed
        .iter()
        .any(|f| f.as_str().unwrap().ends_with("condition2_basis")));
}

#[test]
fn unknown_only_suite_warns_and_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    // The Sp4 datum without codim-1 data leaves some torus searches open.
    let sp4 = r#"{"p": 2, "vars": ["t", "u", "v"],
        "indifferent": {"L0": {"basis": ["1"]}, "K0": {"basis": ["1", "t", "u"]}}}"#;
    std::fs::write(dir.path().join("plain.json"), sp4).unwrap();
    let suite = write_suite(
        dir.path(),
        r#"{"samples": 20, "seed": 3, "sp4": "plain.json"}"#,
    );
    let out = exotic(&["suite", "run", "--config", &suite]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out);
    assert_eq!(rep["summary"]["fail"], 0);
    assert!(rep["summary"]["unknown"].as_u64().unwrap() > 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn missing_suite_config_exits_1() {
    assert_eq!(
        exotic(&["suite", "run", "--config", "/no/such/suite.json"])
            .status
            .code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let suite = write_suite(dir.path(), r#"{"tower": "absent.json"}"#);
    assert_eq!(
        exotic(&["suite", "run", "--config", &suite]).status.code(),
        Some(1)
    );
}

#[test]
fn lambda_convention_on_dependent_input() {
    let out = exotic(&["lambda", "--a", "t,t^2", "t", "--vars", "t,u"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["defined"], false);
    assert!(v["coords"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["lambda"] == "0"));
}
