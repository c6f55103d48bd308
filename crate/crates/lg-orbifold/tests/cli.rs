use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lg-orbifold")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let v =
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

#[test]
fn weights_of_the_chain() {
    let (v, code) = json(&["weights", "x1^2*x2 + x2^4"]);
    assert_eq!(code, 0);
    assert_eq!(v, serde_json::json!({"w": [3, 2], "h": 8}));
}

#[test]
fn principal_orbit_of_a_quadric() {
    let (v, code) = json(&["principal", "x1^2 + x2^2"]);
    assert_eq!(code, 0);
    assert_eq!(v["mu_rs"], "0");
    assert_eq!(v["class"], "LogCalabiYau");
}

#[test]
fn cuts_without_sprinkles() {
    let (v, _) = json(&["cuts", "--n", "2", "--F", ""]);
    assert_eq!(v["count"], 3);
    let (v, _) = json(&["cuts", "--n", "2", "--F", "1,2"]);
    assert_eq!(v["count"], 7);
}

#[test]
fn rationals_are_strings() {
    let (v, _) = json(&["index", "x^2*y + y^4", "--g", "7/8,1/4", "--l", "1/3"]);
    assert_eq!(v["mu_RS"], "-1/4");
    assert_eq!(v["K"], serde_json::json!([1]));
    let (v, _) = json(&["vanishing", "x^2*y + y^4"]);
    assert_eq!(v["applicable"], false);
    assert_eq!(v["mu"], "-3/4");
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["sectors", "x^2*y + y^4", "--lmax", "2", "--format", "json"],
        vec!["strata", "--n", "2", "--flavor", "1,2", "--max-codim", "2", "--format", "json"],
        vec!["dual-group", "x^2*y + y^4", "--format", "json"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn table_is_a_projection_of_json() {
    let (v, _) = json(&["symmetry", "x^2 + y^2"]);
    let t = String::from_utf8(run(&["symmetry", "x^2 + y^2"]).stdout).unwrap();
    assert!(t.contains(v["order"].as_str().unwrap()));
    assert!(t.contains("invariant_factors"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["weights", "x^^2"]).status.code(), Some(2));
    let out = run(&["sectors", "x^2 + y^2", "--lmax", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--lmax"));
    assert_eq!(run(&["strata", "--n", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    // the sign checks fail, so the verifier reports a mathematical failure
    let (v, code) = json(&["verify-ainfty", "--n", "2", "--eps-slots", "2", "--deg-gamma", "0"]);
    assert_eq!(v["structure_ok"], true);
    assert_eq!(code, if v["passes"] == true { 0 } else { 1 });
}

#[test]
fn matrix_factorization_commands() {
    let dir = std::env::temp_dir().join(format!("lg-orbifold-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let m = dir.join("m.json");
    std::fs::write(
        &m,
        r#"{"potential":"x^2 + y^2 + x*y*z","A":[["x","y"],["y + x*z","-x"]],"B":[["x","y"],["y + x*z","-x"]]}"#,
    )
    .unwrap();
    let n = dir.join("n.json");
    std::fs::write(&n, r#"{"potential":"x^2 + y^2","A":[["y","x"],["x","-y"]],"B":[["y","x"],["x","-y"]]}"#).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"potential":"x","A":[["1"]],"B":[["1"]]}"#).unwrap();
    let p = |f: &std::path::Path| f.to_str().unwrap().to_string();

    let (v, code) = json(&["mf", "check", &p(&m)]);
    assert_eq!((v["valid"].clone(), code), (Value::Bool(true), 0));
    let (v, code) = json(&["mf", "check", &p(&bad)]);
    assert_eq!((v["valid"].clone(), code), (Value::Bool(false), 1));

    let (v, _) = json(&["mf", "restrict", &p(&m), "--var", "z", "--f", "0"]);
    assert_eq!(v["valid"], true);
    assert_eq!(v["factorization"]["potential"], "x^2 + y^2");

    let (v, _) = json(&["mf", "pushforward", &p(&n), "--potential", "x^2 + y^2 + x*y*z", "--var", "z", "--f", "0"]);
    assert_eq!((v["valid"].clone(), v["rank"].clone()), (Value::Bool(true), Value::from(4)));

    let (v, _) = json(&["mf", "cone", &p(&m), "--var", "z", "--f", "x"]);
    assert_eq!((v["valid"].clone(), v["rank"].clone()), (Value::Bool(true), Value::from(4)));

    let out = dir.join("out.json");
    let r = run(&["mf", "check", &p(&m), "--format", "json", "--out", &p(&out)]);
    assert!(r.status.success() && r.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["valid"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn glue_through_the_cli() {
    let (v, _) = json(&["strata", "--n", "2", "--flavor", "1,2", "--max-codim", "2"]);
    let models = v["models"].as_array().unwrap();
    let m = models.iter().find(|m| m["codim"] == 2).unwrap();
    let text = m["model"].to_string();
    let (g, _) = json(&["glue", "--model", &text]);
    let params = g["parameters"].as_array().unwrap();
    assert_eq!(params.len(), 2);
    for p in params {
        let (r, code) = json(&["glue", "--model", &text, "--param", p.as_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(r["glued_codim"], 1);
    }
}
