use std::process::{Command, Output};

use blowup::norms::make_norm_table;
use blowup::scenarios::{Scenario, ScenarioName};
use blowup::verify::default_exponents;
use serde_json::Value;

fn blowup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowup"))
        .args(args)
        .env_remove("BLOWUP_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows (no comments, no header) split into cells.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn norms_table_and_oracle() {
    let o = blowup(&["norms", "--p", "3", "--q1", "0.5", "--oracle"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let header: Vec<&str> = text.lines().find(|l| !l.starts_with('#')).unwrap().split(',').collect();
    let row = &rows(&text)[0];
    let t = make_norm_table(3.0, 0.5, 0.7, 1.0 / 3.0, 0.25).unwrap();
    assert_eq!(row[7].parse::<f64>().unwrap(), t.n_q1);
    for (h, v) in header.iter().zip(row) {
        if h.starts_with("dev_") {
            assert!(v.parse::<f64>().unwrap() <= 1e-7, "{h} = {v}");
        }
    }
}

#[test]
fn norms_json_keys_match_csv() {
    let o = blowup(&["norms", "--format", "json"]);
    let v = json(&o);
    let csv = stdout(&blowup(&["norms"]));
    let row = &rows(&csv)[0];
    for (i, key) in ["mu_p", "L_p", "n_q1", "n_q2", "m_r1", "m_r2"].iter().enumerate() {
        assert_eq!(v["results"][key].as_f64().unwrap(), row[5 + i].parse::<f64>().unwrap(), "{key}");
    }
    assert!(v["config_echo"].is_object() && v["flags"].is_object());
}

#[test]
fn exponent_violation_exits_2() {
    let o = blowup(&["norms", "--p", "3", "--q1", "1.0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("q1"));
}

#[test]
fn constant_coefficients_single_root() {
    let o = blowup(&["roots", "--A", "1", "--B", "1", "--p", "3", "--lambda", "1"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 1);
    let (q1, q2, r1, r2) = default_exponents(3.0);
    let t = make_norm_table(3.0, q1, q2, r1, r2).unwrap();
    let s: f64 = r[0][0].parse().unwrap();
    assert!((s / t.n_q1 - 1.0).abs() < 1e-12);
    assert_eq!(r[0][5], "transversal");
    assert!(stdout(&o).lines().last().unwrap().starts_with("# count=1 overflow=false"));
}

#[test]
fn scenario_root_counts() {
    let (q1, q2, r1, r2) = default_exponents(3.0);
    let t = make_norm_table(3.0, q1, q2, r1, r2).unwrap();
    let thr2 = Scenario::cor2(1.0, 1.0).thresholds(&t);
    let mid = (thr2[0] * thr2[1]).sqrt().to_string();
    let o = blowup(&["roots", "--scenario", "cor2", "--lambda", &mid]);
    assert_eq!(rows(&stdout(&o)).len(), 2);
    let below = (0.5 * Scenario::new(ScenarioName::Cor4).thresholds(&t)[0]).to_string();
    let o = blowup(&["roots", "--scenario", "cor4", "--lambda", &below]);
    assert_eq!(o.status.code(), Some(0));
    assert!(rows(&stdout(&o)).is_empty());
}

#[test]
fn roots_json_mirrors_csv() {
    let args = ["roots", "--scenario", "cor2", "--param", "a=2", "--param", "b=0.5", "--lambda", "40"];
    let csv = rows(&stdout(&blowup(&args)));
    let mut with_json = args.to_vec();
    with_json.extend(["--format", "json"]);
    let v = json(&blowup(&with_json));
    let list = v["results"]["roots"].as_array().unwrap();
    assert_eq!(list.len(), csv.len());
    for (row, obj) in csv.iter().zip(list) {
        assert_eq!(row[0].parse::<f64>().unwrap(), obj["s"].as_f64().unwrap());
        assert_eq!(row[5], obj["kind"].as_str().unwrap());
    }
    assert_eq!(v["config_echo"]["params"]["a"].as_f64(), Some(2.0));
}

#[test]
fn problem_choice_is_exclusive() {
    assert_eq!(blowup(&["roots", "--lambda", "1"]).status.code(), Some(2));
    assert_eq!(blowup(&["roots", "--scenario", "cor1", "--A", "1", "--B", "1", "--lambda", "1"]).status.code(), Some(2));
    assert_eq!(blowup(&["roots", "--A", "1", "--B", "1"]).status.code(), Some(2));
    assert_eq!(blowup(&["roots", "--A", "1 +", "--B", "1", "--lambda", "1"]).status.code(), Some(2));
    assert_eq!(blowup(&["roots", "--bogus"]).status.code(), Some(2));
    assert_eq!(blowup(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sweep_log_grid_is_exact() {
    let o = blowup(&[
        "sweep", "--A", "1", "--B", "1", "--lambda-min", "1e-2", "--lambda-max", "1e2", "--lambda-n", "5",
    ]);
    assert!(o.status.success());
    let lambdas: Vec<f64> = rows(&stdout(&o)).iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(lambdas, vec![1e-2, 1e-1, 1.0, 1e1, 1e2]);
}

#[test]
fn sweep_cor1_threshold_block() {
    let o = blowup(&["sweep", "--scenario", "cor1", "--lambda-min", "10", "--lambda-max", "1e4", "--lambda-n", "13"]);
    let text = stdout(&o);
    let block: Vec<&str> = text.lines().skip_while(|l| *l != "# thresholds").skip(2).collect();
    assert_eq!(block.len(), 1, "{text}");
    let (q1, q2, r1, r2) = default_exponents(3.0);
    let t = make_norm_table(3.0, q1, q2, r1, r2).unwrap();
    let want = Scenario::new(ScenarioName::Cor1).thresholds(&t)[0];
    let got: f64 = block[0].trim_start_matches("# ").split(',').next().unwrap().parse().unwrap();
    assert!((got / want - 1.0).abs() < 1e-7);
    assert!(block[0].ends_with(",0,1,true"));
}

#[test]
fn sweep_threads_env() {
    let args = ["sweep", "--scenario", "cor2", "--lambda-min", "1", "--lambda-max", "1e3", "--lambda-n", "20"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_blowup"))
            .args(args)
            .env("BLOWUP_THREADS", threads)
            .output()
            .unwrap()
    };
    let base = run("0");
    assert!(base.status.success());
    for threads in ["1", "2", "4"] {
        assert_eq!(run(threads).stdout, base.stdout);
    }
    assert_eq!(run("many").status.code(), Some(2));
}

#[test]
fn eval_power_case() {
    let o = blowup(&["eval", "--A", "1", "--B", "1", "--p", "3", "--lambda", "4", "--grid-n", "11", "--delta", "0.05"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 11);
    let num = |i: usize, j: usize| r[i][j].parse::<f64>().unwrap();
    for i in 0..11 {
        assert_eq!(num(i, 1), num(10 - i, 1));
        assert_eq!(num(i, 2), -num(10 - i, 2));
    }
    // A = B = 1: u = λ^{-1/(p-1)} U_p, and U_p(0) = μ_p.
    let mu = make_norm_table(3.0, 0.5, 0.7, 0.3, 0.25).unwrap().mu_p;
    assert!((num(5, 1) / (mu / 2.0) - 1.0).abs() < 1e-12);
}

#[test]
fn eval_bad_index_lists_roots() {
    let o = blowup(&["eval", "--A", "1", "--B", "1", "--lambda", "4", "--root-index", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0: s = "));
}

#[test]
fn exp_case() {
    let o = blowup(&["exp", "--A", "2+t", "--B", "2+t", "--lambda", "7", "--grid-n", "5", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["results"]["shift"].as_f64(), Some(0.0));
    assert!(v["results"]["residual"].as_f64().unwrap() < 1e-12);
    let e = blowup(&["eval", "--case", "exp", "--A", "2+t", "--B", "2+t", "--lambda", "7", "--grid-n", "5", "--format", "json"]);
    assert_eq!(json(&e)["results"], v["results"]);
    assert_eq!(blowup(&["exp", "--A", "s", "--lambda", "1"]).status.code(), Some(2));
    assert_eq!(blowup(&["exp", "--r1", "1.5", "--lambda", "1"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let ok = blowup(&["verify", "--p", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).lines().last().unwrap().starts_with("# passed=true"));
    let bad = blowup(&["verify", "--p", "3", "--perturb-norms", "1e-3"]);
    assert_eq!(bad.status.code(), Some(1));
    let asym = stdout(&blowup(&["verify", "--scenario", "cor4", "--asymptotics"]));
    assert_eq!(asym.lines().filter(|l| l.starts_with("asymptotics,")).count(), 4);
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"scenario": "cor2", "params": {"a": 1, "b": 1}, "lambda": 1, "format": "json"}"#).unwrap();
    let path = cfg.to_str().unwrap();
    let low = json(&blowup(&["roots", "--config", path]));
    assert_eq!(low["results"]["count"].as_u64(), Some(0));
    let out = dir.path().join("out.csv");
    let o = blowup(&["roots", "--config", path, "--lambda", "1e4", "--format", "csv", "--output", out.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(rows(&std::fs::read_to_string(&out).unwrap()).len(), 1);
    std::fs::write(&cfg, r#"{"lamda": 1}"#).unwrap();
    assert_eq!(blowup(&["roots", "--config", path]).status.code(), Some(2));
}
