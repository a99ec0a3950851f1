use std::process::{Command, Output};

use serde_json::Value;

fn mdz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdz")).args(args).env_remove("MDZ_THREADS").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn eval_gaussian_norm_sum() {
    let out = mdz(&["eval", "--field", "d=-1", "--cones", "1,0;0,1", "--exp", "2;2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["value_re"].as_f64().unwrap() - 0.424_379_776_2).abs() < 1e-9);
    assert_eq!(v["converged"], Value::Bool(true));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["converged", "spec", "tail_bound", "tail_kind", "terms_used", "value_im", "value_re"]);
}

#[test]
fn json_round_trips() {
    let out = mdz(&["eval", "--field", "d=-1", "--cones", "1,0;0,1|1,0;0,1", "--exp", "1,2;1,2"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let v = json(&out);
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    let spec = &v["spec"];
    let again = mdz(&[
        "eval",
        "--field",
        spec["field"].as_str().unwrap(),
        "--cones",
        spec["cones"].as_str().unwrap(),
        "--exp",
        spec["exp"].as_str().unwrap(),
        "--bound",
        &spec["bound"].to_string(),
        "--tol",
        &spec["tol"].to_string(),
    ]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn divergent_spec_exits_2() {
    let out = mdz(&["eval", "--field", "Q", "--cones", "1", "--exp", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("divergent spec"));
    assert!(out.stdout.is_empty());
}

#[test]
fn parse_errors_exit_1() {
    assert_eq!(mdz(&["eval", "--field", "d=4", "--cones", "1", "--exp", "2"]).status.code(), Some(1));
    assert_eq!(mdz(&["eval", "--field", "Q", "--cones", "1", "--exp", "x"]).status.code(), Some(1));
    assert_eq!(mdz(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(mdz(&["verify", "everything"]).status.code(), Some(1));
}

#[test]
fn unconverged_exits_3() {
    let out = mdz(&["eval", "--field", "d=-1", "--cones", "1,0;0,1", "--exp", "2;2", "--bound", "100", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["converged"], Value::Bool(false));
}

#[test]
fn cone_reports() {
    let v = json(&mdz(&["cone", "--field", "d=-1", "--gens", "1,0;0,2"]));
    assert_eq!(v["unimodular"], Value::Bool(false));
    let v = json(&mdz(&["cone", "--field", "d=2", "--gens", "1,0;3,2"]));
    assert_eq!(v["simple_operative"], Value::Bool(true));
    assert_eq!(v["epsilon"], Value::from(1));
    let v = json(&mdz(&["cone", "--field", "d=-1", "--gens", "1,1;1,-1"]));
    assert_eq!(v["simple_operative"], Value::Bool(true));
    assert_eq!(v["simple_strict"], Value::Bool(false));
}

#[test]
fn field_and_decompose() {
    let v = json(&mdz(&["field", "--field", "d=2"]));
    assert_eq!(v["fundamental_unit"], serde_json::json!([1, 1]));
    assert_eq!(v["totally_positive_unit"], serde_json::json!([3, 2]));
    let out = mdz(&["decompose", "--field", "d=5", "--check", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cones"].as_array().unwrap().len(), 2);
    assert_eq!(v["partition"]["passed"], Value::Bool(true));
}

#[test]
fn csv_columns() {
    let out = mdz(&["--format", "csv", "eval", "--id", "fm2", "--field", "d=-1", "--cones", "1,0;0,1", "--exp", "2;2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("spec_id,value_re,value_im,tail_bound,terms,seconds"));
    assert!(lines.next().unwrap().starts_with("fm2,0.424379776211848,0,"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("mdz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.ini");
    std::fs::write(&path, "field=d=-1\ncones=1,0;0,1\nexp=3;3\nbound=400\nformat=text\n").unwrap();
    let p = path.to_str().unwrap();
    let out = mdz(&["--config", p, "eval"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("value      = 0.14738534191"));
    let out = mdz(&["--config", p, "--format", "json", "eval", "--exp", "2;2"]);
    let v = json(&out);
    assert_eq!(v["spec"]["bound"], Value::from(400));
    assert!((v["value_re"].as_f64().unwrap() - 0.424_379_776_2).abs() < 1e-9);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["eval", "--field", "d=-1", "--cones", "1,0;0,1|1,0;0,1", "--exp", "1,2;1,2"];
    let outputs: Vec<Vec<u8>> = ["1", "3", "8"]
        .iter()
        .map(|t| {
            let mut a = vec!["--threads", t];
            a.extend(args);
            mdz(&a).stdout
        })
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let env = Command::new(env!("CARGO_BIN_EXE_mdz")).args(args).env("MDZ_THREADS", "2").output().unwrap();
    assert_eq!(env.stdout, outputs[0]);
}

#[test]
fn verify_partition_suite() {
    let out = mdz(&["--format", "text", "verify", "partition"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]") && l.contains("H=50")).count(), 5);
}
