use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3thomae"))
        .args(args)
        .env_remove("K3THOMAE_PRECISION")
        .output()
        .expect("binary runs")
}

fn json_lines(o: &Output) -> Vec<Value> {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{e}: {l}")))
        .collect()
}

fn single(o: &Output) -> Value {
    let mut v = json_lines(o);
    assert_eq!(v.len(), 1, "{}", String::from_utf8_lossy(&o.stdout));
    v.remove(0)
}

#[test]
fn constant_state_is_a_fixed_point() {
    let o = run(&["agm", "d4", "--c", "1,1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = single(&o);
    assert_eq!(v["op"], "agm d4");
    assert_eq!(v["result"]["limit"], 1.0);
    assert_eq!(v["pass"], true);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys, ["op", "input", "result", "diagnostics", "pass"]);
}

#[test]
fn series_at_origin_is_one() {
    let v = single(&run(&["eval", "fs", "--z", "0,0,0,0"]));
    assert_eq!(v["result"]["value"]["re"], 1.0);
    assert_eq!(v["result"]["value"]["im"], 0.0);
}

#[test]
fn complete_elliptic_integral_value() {
    // 2F1(1/2,1/2;1;1/2) = 2K/pi with K = 1.854074677301372 at k^2 = 1/2.
    let v = single(&run(&["eval", "2f1", "--a", "0.5", "--b", "0.5", "--c", "1", "--x", "0.5"]));
    let re = v["result"]["value"]["re"].as_f64().unwrap();
    assert!((re - 1.1803405990160962).abs() < 1e-14, "{re}");
}

#[test]
fn limit_formula_matches_iteration() {
    let o = run(&["agm", "borchardt", "--c", "8,4,2,1", "--limit-formula"]);
    assert_eq!(o.status.code(), Some(0));
    let v = single(&o);
    let lim = v["result"]["limit"].as_f64().unwrap();
    assert!((lim - 3.267623918144856).abs() < 1e-14);
    assert!(v["result"]["formula"]["residual_z"].as_f64().unwrap() < 1e-8);
}

#[test]
fn thomae_near_reference_point_passes() {
    let o = run(&["verify", "thomae", "--z", "0.625,0.0625,0.0625,0.625"]);
    assert_eq!(o.status.code(), Some(0));
    let v = single(&o);
    let res = v["result"]["residuals"].as_object().unwrap();
    assert_eq!(res.keys().filter(|k| k.starts_with("main:")).count(), 10);
    assert!(res.values().all(|r| r["pass"] == true));
}

#[test]
fn out_of_polydisc_point_is_a_domain_error() {
    let o = run(&["verify", "thomae", "--z", "0.05,0.02,0.03,0.04"]);
    assert_eq!(o.status.code(), Some(3));
    let v = single(&o);
    assert_eq!(v["kind"], "domain");
    assert!(v["error"].as_str().unwrap().contains("zeta14"));
}

#[test]
fn tight_tolerance_fails_verification() {
    let o = run(&["verify", "thomae", "--z", "0.625,0.0625,0.0625,0.625", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(single(&o)["pass"], false);
}

#[test]
fn usage_errors_exit_two_with_an_error_line() {
    for args in [
        vec!["frobnicate"],
        vec!["agm", "d4", "--c", "1,2"],
        vec!["eval", "fs", "--z", "0,0,x,0"],
        vec!["agm", "d4", "--c", "4,3,2,1", "--precision", "9"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let v = single(&o);
        assert_eq!(v["kind"], "usage");
        assert!(v["error"].is_string());
    }
}

#[test]
fn precision_rounds_floats() {
    let o = Command::new(env!("CARGO_BIN_EXE_k3thomae"))
        .args(["agm", "d4", "--c", "8,4,2,1"])
        .env("K3THOMAE_PRECISION", "10")
        .output()
        .unwrap();
    assert_eq!(single(&o)["result"]["limit"], 3.267623918);
    let v = single(&run(&["agm", "d4", "--c", "8,4,2,1"]));
    assert_eq!(v["result"]["limit"], 3.267623918144856);
    assert!(v["result"]["iterations"].is_u64());
}

#[test]
fn csv_has_stable_columns() {
    let o = run(&["verify", "fe1", "--c", "8,4,2,1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let header: Vec<&str> = lines[0].split(',').collect();
    assert_eq!(header[0], "op");
    assert!(header.contains(&"result.residuals.w.rel"));
    assert_eq!(*header.last().unwrap(), "pass");
    assert_eq!(header.len(), lines[1].split(',').count());
}

#[test]
fn out_file_receives_the_report() {
    let path = std::env::temp_dir().join(format!("k3thomae-out-{}.jsonl", std::process::id()));
    let o = run(&["verify", "jacobi", "--lambda", "0.3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let v: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["op"], "verify jacobi");
}

#[test]
fn sweep_is_reproducible_and_covers_every_check() {
    let args = ["sweep", "verify-all", "--seed", "11", "--n", "1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
    let ops: Vec<String> = json_lines(&a).iter().map(|v| v["op"].as_str().unwrap().to_string()).collect();
    for name in [
        "jacobi", "gauss", "2tau", "theta-laws", "h2", "transform", "thomae", "degeneration", "fe1", "fe2", "agm-d4",
        "agm-borchardt",
    ] {
        assert!(ops.contains(&format!("verify {name}")), "{name}");
    }
    let c = run(&["sweep", "verify-all", "--seed", "12", "--n", "1"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn theta_single_characteristic_and_vector() {
    let tau = "1.1i,0.1,0.1,0.9i";
    let odd = single(&run(&["theta", "--tau", tau, "--char", "0101"]));
    assert_eq!(odd["diagnostics"]["even"], false);
    assert!(odd["result"]["value"]["re"].as_f64().unwrap().abs() < 1e-15);
    let all = single(&run(&["theta", "--tau", tau]));
    assert_eq!(all["result"]["squares"].as_object().unwrap().len(), 10);
}
