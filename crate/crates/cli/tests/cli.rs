use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glasner-lab"))
        .args(args)
        .env_remove("GLASNER_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn check_density_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let four = write(
        dir.path(),
        "four.json",
        r#"{"dim":1,"mode":"exact","points":[[[0,1]],[[1,4]],[[1,2]],[[3,4]]]}"#,
    );
    let o = lab(&["check-density", "--input", &four, "--eps", "0.13"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["status"], "DENSE");

    let single = write(
        dir.path(),
        "one.json",
        r#"{"dim":1,"mode":"exact","points":[[[0,1]]]}"#,
    );
    let o = lab(&["check-density", "--input", &single, "--eps", "0.4"]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert_eq!(v["status"], "NOT_DENSE");
    assert!(v["witness"].is_array());

    // gaps of exactly 2ε: every point is covered, but only with equality
    let edge = write(
        dir.path(),
        "edge.json",
        r#"{"dim":1,"mode":"exact","points":[[[0,1]],[[1,5]],[[2,5]],[[3,5]],[[4,5]]]}"#,
    );
    let o = lab(&[
        "check-density",
        "--input",
        &edge,
        "--eps",
        "0.1",
        "--max-refinements",
        "1",
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o)["status"], "UNDECIDED");
}

#[test]
fn errors_exit_above_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"dim":1,"mode":"exact","points":[[[1,0]]]}"#,
    );
    assert_eq!(
        code(&lab(&["check-density", "--input", &bad, "--eps", "0.1"])),
        3
    );
    assert_eq!(
        code(&lab(&[
            "check-density",
            "--input",
            "/no/such/file",
            "--eps",
            "0.1"
        ])),
        3
    );
    let ok = write(
        dir.path(),
        "ok.json",
        r#"{"dim":1,"mode":"exact","points":[[[0,1]]]}"#,
    );
    assert_eq!(code(&lab(&["check-density", "--input", &ok])), 3);
    assert_eq!(
        code(&lab(&["check-density", "--input", &ok, "--eps", "0.7"])),
        3
    );
    assert_eq!(code(&lab(&["no-such-command"])), 3);
    assert_eq!(code(&lab(&["experiment", "nope", "--seed", "1"])), 3);
    assert_eq!(code(&lab(&["experiment", "bmv-fuzz"])), 3);
    assert_eq!(code(&lab(&["--help"])), 0);
}

#[test]
fn scalar_search_found_and_exhausted() {
    let dir = tempfile::tempdir().unwrap();
    let y = write(
        dir.path(),
        "y.json",
        r#"{"dim":1,"mode":"exact","points":[[[1,100]],[[2,100]],[[3,100]]]}"#,
    );
    let o = lab(&[
        "find-dilate",
        "--input",
        &y,
        "--eps",
        "0.2",
        "--budget",
        "1000",
        "--seed",
        "4",
    ]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["found"], true);
    assert_eq!(v["dilator"]["kind"], "scalar");
    assert_eq!(v["scanned"], v["dilator"]["n"]);
    assert_eq!(v["seed"], 4);
    assert_eq!(v["meta"]["config_hash"].as_str().unwrap().len(), 64);

    let two = write(
        dir.path(),
        "two.json",
        r#"{"dim":1,"mode":"exact","points":[[[0,1]],[[1,2]]]}"#,
    );
    let o = lab(&[
        "find-dilate",
        "--input",
        &two,
        "--eps",
        "0.1",
        "--budget",
        "300",
    ]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert_eq!(v["found"], false);
    assert_eq!(v["scanned"], 300);
}

#[test]
fn poly_and_group_searches() {
    let dir = tempfile::tempdir().unwrap();
    let y = write(
        dir.path(),
        "y.json",
        r#"{"dim":2,"mode":"exact","points":[[[1,97],[2,89]],[[3,97],[5,89]],[[7,97],[1,89]],[[2,97],[9,89]]]}"#,
    );
    let a = write(
        dir.path(),
        "a.json",
        r#"{"dim":2,"coeffs":[[[0,0],[0,0]],[[1,0],[0,0]],[[0,0],[0,1]]]}"#,
    );
    let o = lab(&[
        "find-poly",
        "--input",
        &y,
        "--poly",
        &a,
        "--eps",
        "0.3",
        "--budget",
        "5000",
    ]);
    assert!(code(&o) <= 1, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["schema"], "glasner-lab/outcome/v1");
    if v["found"] == true {
        assert_eq!(v["dilator"]["kind"], "poly");
    }

    let s = write(
        dir.path(),
        "s.json",
        r#"{"dim":2,"generators":[[[1,1],[0,1]],[[1,0],[1,1]]],"assume_unipotent":true}"#,
    );
    let o = lab(&[
        "find-group",
        "--input",
        &y,
        "--presentation",
        &s,
        "--eps",
        "0.45",
        "--radius",
        "6",
    ]);
    assert!(code(&o) <= 1);
    let v = stdout_json(&o);
    assert_eq!(v["budget"]["ball_radius"], 6);

    let not_unipotent = write(
        dir.path(),
        "n.json",
        r#"{"dim":2,"generators":[[[2,1],[1,1]]],"assume_unipotent":true}"#,
    );
    assert_eq!(
        code(&lab(&[
            "find-group",
            "--input",
            &y,
            "--presentation",
            &not_unipotent,
            "--eps",
            "0.3"
        ])),
        3
    );
}

#[test]
fn snf_walk_and_diagnose() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", "[[2,0],[0,3]]");
    let o = lab(&["snf", "--input", &m]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["divisors"], serde_json::json!(["1", "6"]));
    assert_eq!(v["q_bound"], "6");
    assert_eq!(v["reconstructs"], true);

    let out = dir.path().join("walk");
    let o = lab(&[
        "walk",
        "--x",
        "1/5,2/5",
        "--n-max",
        "80",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(out.join("decay.csv")).unwrap();
    assert!(csv.starts_with("# glasner-lab/decay-csv/v1"));
    assert_eq!(csv.lines().count(), 2 + 81);
    assert!((stdout_json(&o)["plateau"].as_f64().unwrap() - 1.0 / 24.0).abs() < 1e-8);
    assert_eq!(
        code(&lab(&["walk", "--x", "1/5,2/5", "--method", "monte-carlo"])),
        3
    );

    let y = write(
        dir.path(),
        "y.json",
        r#"{"dim":1,"mode":"exact","points":[[[1,3]],[[2,3]],[[1,4]]]}"#,
    );
    let out = dir.path().join("diag");
    let o = lab(&[
        "diagnose",
        "--input",
        &y,
        "--eps",
        "0.25",
        "--sum-degree",
        "2",
        "--sum-q-max",
        "30",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let torsion = fs::read_to_string(out.join("torsion.csv")).unwrap();
    assert_eq!(torsion, "q,h_q\n3,2\n12,4\n");
    assert!(fs::read_to_string(out.join("box_terms.csv"))
        .unwrap()
        .starts_with("m,partial_sum\n"));
    assert!(fs::read_to_string(out.join("complete_sums.csv"))
        .unwrap()
        .starts_with("q,max_abs\n3,"));
}

#[test]
fn experiments_are_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"trials": 12, "k_max": 25}"#);
    let run = |threads: &str, sub: &str| {
        let out = dir.path().join(sub);
        let o = lab(&[
            "experiment",
            "bmv-fuzz",
            "--config",
            &cfg,
            "--seed",
            "17",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        (
            fs::read_to_string(out.join("bmv-fuzz.json")).unwrap(),
            fs::read_to_string(out.join("bmv-fuzz.csv")).unwrap(),
        )
    };
    let a = run("1", "a");
    let b = run("2", "b");
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.0).unwrap();
    assert_eq!(v["seed"], 17);
    assert_eq!(v["config"]["trials"], 12);
    assert_eq!(v["summary"]["violations"], 0);
    assert!(v["config_hash"].is_string());
    assert!(v["version"].is_string());
    assert_eq!(a.1.lines().count(), 13);
}

#[test]
fn walk_decay_experiment_is_monotone() {
    let o = lab(&["experiment", "walk-decay", "--seed", "2"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["summary"]["monotone"], true);
    assert_eq!(v["summary"]["trivial_plateau_exact"], true);
}
