use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dolgachev")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn tchain_golden() {
    let out = run(&["tchain", "3", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\"fiber\":[1,2,3],\"ks\":[5,2]}\n");
    assert_eq!(json(&["tchain", "2", "1"])["ks"], serde_json::json!([4]));
}

#[test]
fn ns_gram_is_diagonal() {
    let v = json(&["verify", "ns-gram"]);
    assert_eq!(v["diagonal"], serde_json::json!([-1, -1, -1, -1, -1, -1, -1, -1, -1, 1]));
    assert_eq!(v["ok"], Value::Bool(true));
}

#[test]
fn plane_h0_of_d_10_9() {
    let v = json(&["plane-h0", "--divisor", "9H - 2F1 - ... - 2F8 - 5E1 - 4E2 - 7E3"]);
    assert_eq!(v["dim"], 0);
    assert_eq!(v["ideal"], "J7^2 · P8^2 · I_E1^5 · I_{E2+E3} · I_{E2+2E3}^3");
}

#[test]
fn chi_and_pair() {
    let v = json(&["chi-gen", "-L0 + F1 - F9"]);
    assert_eq!(v["total"], 11);
    assert_eq!(v["d1"], "-3");
    assert_eq!(json(&["chi-gen", "-L0"])["total"], 12);
    assert_eq!(json(&["pair", "C1", "C1"])["pair"], 0);
}

#[test]
fn surface_report() {
    let v = json(&["surface"]);
    assert_eq!(v["chain"], serde_json::json!([5, 2]));
    assert_eq!(v["self_intersections"]["C1"], -4);
    let v = json(&["surface", "2", "1"]);
    assert_eq!(v["chain"], serde_json::json!([4]));
}

#[test]
fn bounds() {
    let v = json(&["h0-bound", "--divisor", "2H - 2C0 + C1 + C2 + E2 + E3", "--schedule", "l,E2,l,C2", "--residual", "C2"]);
    assert_eq!(v["bound"], 1);
    let v = json(&["h0-bound", "--divisor", "F2 - F1"]);
    assert_eq!(v["bound"], 0);
    let out = run(&["h0-bound", "--divisor", "-F1", "--schedule", "", "--residual", "F2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verification_suites() {
    let v = json(&["verify", "dictionary"]);
    assert_eq!(v["entries"].as_array().unwrap().len(), 40);
    let v = json(&["verify", "ext-table"]);
    assert_eq!(v["diff"], serde_json::json!([]));
    assert_eq!(v["entries"][0][11]["triple"]["h2"], 6);
    let v = json(&["verify", "phantom"]);
    assert_eq!(v["lower_bound"], 0);
    let out = run(&["--emit", "markdown", "verify", "ext-table"]);
    let md = String::from_utf8(out.stdout).unwrap();
    assert!(md.lines().nth(2).unwrap().starts_with("| G0 | 1 0 0 | 0 0 1 |"));
}

#[test]
fn failures_exit_one() {
    let out = run(&["verify", "ext-table", "--no-symmetry"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ok"], Value::Bool(false));

    let dir = std::env::temp_dir().join(format!("dolgachev-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fx.json");
    std::fs::write(&path, r#"{"schema":1,"entries":[{"i":1,"j":0,"route":"witness","target":"h0","divisor":"2H + F9 - F1 - 2C0 + C1 + C2 + E2 + E3","schedule":["F9","l","E2"],"residual":[["F1",1]]}]}"#).unwrap();
    let out = run(&["verify", "dictionary", "--fixtures", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["tchain", "3", "2"]).status.code(), Some(0));
    assert_eq!(run(&["tchain", "4", "2"]).status.code(), Some(2));
    assert_eq!(run(&["chi-gen", "H"]).status.code(), Some(2));
    assert_eq!(run(&["plane-h0", "--divisor", "9H + F1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "ext-table", "--fixtures", "/nonexistent.json"]).status.code(), Some(2));
}
