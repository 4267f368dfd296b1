use std::process::{Command, Output};

use serde_json::Value;

fn kmprym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmprym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = kmprym(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn diagnostic(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn sigma_five() {
    let v = json_ok(&["sigma", "5"]);
    assert_eq!(v.as_array().unwrap().len(), 11);
    assert_eq!(v[0], serde_json::json!([]));
}

#[test]
fn indicial_drops_the_full_circle() {
    let v = json_ok(&["indicial", "4"]);
    assert!(v.as_array().unwrap().iter().all(|b| b["A"].as_array().unwrap().len() < 4));
    assert_eq!(json_ok(&["sigma", "4"]).as_array().unwrap().len(), v.as_array().unwrap().len() + 1);
}

#[test]
fn phi_example_and_inverse() {
    let v = json_ok(&["phi", "--point", r#"{"n":3,"a":["1","1","1"],"b":["0","0","0"]}"#, "--m", "3"]);
    assert_eq!(v["u"], "-1,0,1");
    assert_eq!(v["v"], "0");
    assert_eq!(v["w"], "4,0,-5,0,1");
    assert_eq!(v["p"], "0,-3,0,1");
    let back = json_ok(&["phi-inverse", "--triple", &v.to_string(), "--n", "3"]);
    assert_eq!(back["a"], serde_json::json!(["1", "1", "1"]));
    assert_eq!(back["b"], serde_json::json!(["0", "0", "0"]));
}

#[test]
fn constraint_violation_exits_2() {
    let out = kmprym(&["phi", "--point", r#"{"n":3,"a":["1","2","1"],"b":["0","0","0"]}"#]);
    assert_eq!(out.status.code(), Some(2));
    let d = diagnostic(&out);
    assert_eq!(d["error"], "invariant");
    assert_eq!(d["invariant"], "product-of-a");
}

#[test]
fn not_in_image_exits_2() {
    let out = kmprym(&["phi-inverse", "--triple", r#"{"u":"-1,0,1","v":"0","w":"1,0,0,0,1"}"#, "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostic(&out)["error"], "not-in-image");
}

#[test]
fn input_errors_exit_3() {
    let bad_poly = kmprym(&["bracket", "--space", "odd-mumford-1", "--phi", "1,y"]);
    assert_eq!(bad_poly.status.code(), Some(3));
    assert_eq!(diagnostic(&bad_poly)["error"], "parse");
    assert_eq!(kmprym(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(kmprym(&["kowalevski", "5", "--A", "1"]).status.code(), Some(3));
    let missing = kmprym(&["balance", "5", "--A", "1,2", "--order", "3"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn kowalevski_principal_n5() {
    let v = json_ok(&["kowalevski", "5", "--A", "1,2"]);
    assert_eq!(v["spectrum"], serde_json::json!([-1, 1, 1, 2, 2]));
    assert_eq!(v["nonneg_count"], 4);
}

#[test]
fn balance_n5() {
    let v = json_ok(&[
        "balance",
        "5",
        "--A",
        "1,2",
        "--params",
        r#"{"a2_1":"1","a4_1":"1/6","a3_2":3,"a5_2":"2"}"#,
        "--order",
        "3",
    ]);
    // a1 = -1/t + alpha - (alpha^2 + 2 beta + gamma) t / 3 + ...
    assert_eq!(v["coefficients"][0][0], "-1");
    assert_eq!(v["coefficients"][0][2], "-8/3");
}

#[test]
fn bracket_table_uses_coordinate_names() {
    let v = json_ok(&["bracket", "--space", "odd-mumford-1", "--phi", "1", "--at", "1,2,3,4"]);
    assert_eq!(v["jacobi"], true);
    assert_eq!(v["entries"][1][2], "w1 - u0");
    assert_eq!(v["at"]["rank"], 2);
    assert_eq!(json_ok(&["bracket", "--space", "toda-3", "--phi", "0,1"])["jacobi"], true);
    assert_eq!(json_ok(&["bracket", "--space", "even-prym-1", "--phi", "0,1"])["jacobi"], true);
}

#[test]
fn flow_reference_run_and_csv() {
    let dir = std::env::temp_dir().join(format!("kmprym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("traj.csv");
    let v = json_ok(&[
        "flow",
        "--system",
        "km",
        "--point",
        r#"{"n":5,"a":["2","1/2","1","1","1"]}"#,
        "--t",
        "10",
        "--step",
        "1e-3",
        "--every",
        "500",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(v["drift"]["K_x3"].as_f64().unwrap() <= 1e-8);
    assert!(v["drift"]["K_x1"].as_f64().unwrap() <= 1e-8);
    assert!(v["truncated"].is_null());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,a1,a2,a3,a4,a5,"));
    assert_eq!(text.lines().count(), 22);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn flow_on_prym_space() {
    let p = r#"{"flavor":"odd-prym-1","u":"1,0,1","v":"0,2","w":"3,0,1,0,1"}"#;
    let v = json_ok(&["flow", "--system", "prym", "--point", p, "--y", "1/2", "--t", "0.5", "--step", "1e-3"]);
    assert!(v["max_drift"].as_f64().unwrap() < 1e-9);
    assert_eq!(kmprym(&["flow", "--system", "mumford", "--point", p, "--t", "1"]).status.code(), Some(3));
}

#[test]
fn example5_report() {
    // beta = 2, delta = 1/3 lies on l = 79/18 when k = 3
    let v = json_ok(&["example5", "--k", "3", "--l", "79/18"]);
    assert_eq!(v["genus"], 4);
    assert_eq!(v["points"].as_array().unwrap().len(), 5);
    assert!(v["unmatched"].as_array().unwrap().is_empty());
    let verdicts = v["balance_limits"]["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 5);
    assert!(verdicts.iter().all(|x| x["ok"] == true));
    for (i, row) in v["incidence"].as_array().unwrap().iter().enumerate() {
        let hits: Vec<usize> = (0..5).filter(|&j| row[j] == true).collect();
        let mut want = vec![(i + 4) % 5, i, (i + 1) % 5];
        want.sort();
        assert_eq!(hits, want);
    }
}

#[test]
fn seeded_output_is_byte_identical() {
    let a = kmprym(&["--seed", "11", "sample", "--system", "toda", "--n", "5"]);
    let b = kmprym(&["sample", "--system", "toda", "--n", "5", "--seed", "11"]);
    let c = kmprym(&["--seed", "12", "sample", "--system", "toda", "--n", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let r1 = kmprym(&["example5", "--k", "3", "--l", "79/18"]);
    let r2 = kmprym(&["example5", "--k", "3", "--l", "79/18"]);
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("kmprym-sigma-{}.json", std::process::id()));
    let out = kmprym(&["sigma", "4", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn verify_all_passes() {
    let v = json_ok(&["verify", "--suite", "all"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 12);
    let one = json_ok(&["verify", "--suite", "sigma-enumeration"]);
    assert_eq!(one["criteria"][0]["id"], 7);
    assert_eq!(kmprym(&["verify", "--suite", "13"]).status.code(), Some(3));
}

fn required_keys(schema: &str) -> Vec<String> {
    let path = format!("{}/../../schemas/v1/{schema}.schema.json", env!("CARGO_MANIFEST_DIR"));
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let obj = if s["type"] == "array" { &s["items"] } else { &s };
    obj["required"].as_array().unwrap().iter().map(|k| k.as_str().unwrap().to_string()).collect()
}

#[test]
fn outputs_carry_schema_keys() {
    let p = r#"{"n":5,"a":["2","1/2","1","1","1"]}"#;
    let cases: Vec<(&str, Value)> = vec![
        ("indicial", json_ok(&["indicial", "5"])[1].clone()),
        ("kowalevski", json_ok(&["kowalevski", "5", "--A", "1,2"])),
        ("balance", json_ok(&["balance", "3", "--params", r#"{"a1_1":"1","a2_1":"2","a3_1":"1/2"}"#])),
        ("toda-point", json_ok(&["sample", "--system", "toda", "--n", "3"])),
        ("phi-image", json_ok(&["phi", "--point", p])),
        ("bracket", json_ok(&["bracket", "--space", "km-3", "--at", "1,2,1/2"])),
        ("flow-summary", json_ok(&["flow", "--system", "km", "--point", p, "--t", "0.1"])),
        ("example5", json_ok(&["example5", "--k", "1", "--l", "1"])),
        ("verify", json_ok(&["verify", "--suite", "12"])),
    ];
    for (schema, v) in cases {
        for k in required_keys(schema) {
            assert!(v.get(&k).is_some(), "{schema}: missing `{k}` in {v}");
        }
    }
    let err = kmprym(&["sigma", "0"]);
    let d = diagnostic(&err);
    for k in required_keys("error") {
        assert!(d.get(&k).is_some());
    }
}
