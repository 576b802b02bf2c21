use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pdla(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdla"))
        .args(args)
        .output()
        .expect("spawn pdla")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, body: &str) -> String {
    let p = scratch(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad report ({e}): {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn ski_with_no_days_costs_nothing() {
    let inst = write("ski0.json", r#"{"N": 0, "B": 10, "n_pred": 25}"#);
    let out = pdla(&["run", "--problem", "ski", "--instance", &inst, "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["alg_cost"].as_f64(), Some(0.0));
    assert_eq!(r["all_checks_ok"], Value::Bool(true));
}

#[test]
fn tcp_burst_stays_under_the_robust_ratio() {
    let mut counts = vec![0u64; 30];
    counts[0] = 40;
    counts[12] = 5;
    let inst = write(
        "burst.json",
        &serde_json::json!({"d": 10, "counts": counts}).to_string(),
    );
    // a prediction that acks far too late
    let pred = write("burst_pred.json", r#"{"acks": [29]}"#);
    let out = pdla(&[
        "run",
        "--problem",
        "tcp",
        "--instance",
        &inst,
        "--prediction",
        &pred,
        "--lambda",
        "0.4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let ratio = r["ratio"].as_f64().unwrap();
    assert!(ratio <= 3.03, "ratio {ratio}");
}

#[test]
fn malformed_input_exits_two() {
    let inst = write("broken.json", r#"{"d": 10, "counts": [1, 2"#);
    let out = pdla(&["run", "--problem", "tcp", "--instance", &inst]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn out_of_range_lambda_exits_two() {
    let inst = write("ski_lambda.json", r#"{"N": 3, "B": 5}"#);
    let out = pdla(&["run", "--problem", "ski", "--instance", &inst, "--lambda", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let a = pdla(&["verify", "--scope", "oracles"]);
    let b = pdla(&["verify", "--scope", "oracles"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn generate_is_deterministic() {
    let args = [
        "generate", "--dist", "pareto", "--length", "50", "--d", "5", "--seed", "9",
    ];
    let a = pdla(&args);
    let b = pdla(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["counts"].as_array().unwrap().len(), 50);
    assert_eq!(v["d"], 5);
}

#[test]
fn generated_files_feed_run() {
    let inst = scratch("gen_inst.json");
    let pred = scratch("gen_pred.json");
    let out = pdla(&[
        "generate",
        "--length",
        "80",
        "--d",
        "8",
        "--seed",
        "3",
        "--replacement-rate",
        "0.3",
        "--out",
        inst.to_str().unwrap(),
        "--prediction-out",
        pred.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = pdla(&[
        "run",
        "--problem",
        "tcp",
        "--instance",
        inst.to_str().unwrap(),
        "--prediction",
        pred.to_str().unwrap(),
        "--lambda",
        "0.6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["all_checks_ok"], Value::Bool(true));
}

#[test]
fn small_sweep_writes_both_csvs() {
    let out_path = scratch("sweep.csv");
    let out = pdla(&[
        "sweep",
        "--dist",
        "poisson",
        "--lambdas",
        "1,0.5",
        "--rates",
        "0,1",
        "--trials",
        "2",
        "--length",
        "60",
        "--d",
        "10",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let rows = fs::read_to_string(&out_path).unwrap();
    let mut lines = rows.lines();
    assert_eq!(
        lines.next().unwrap(),
        "problem,dist,lambda,replacement_rate,trial,seed,alg_cost,opt_cost,pred_cost,ratio,consistency_bound,robustness_bound,all_checks_ok"
    );
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), 2 * 2 * 2);
    assert!(body
        .iter()
        .all(|l| l.starts_with("tcp,poisson,") && l.ends_with(",true")));

    let agg = fs::read_to_string(scratch("sweep_aggregate.csv")).unwrap();
    assert_eq!(
        agg.lines().next().unwrap(),
        "dist,lambda,replacement_rate,trials,mean_ratio"
    );
    assert_eq!(agg.lines().count(), 1 + 4);
}
