//! End-to-end tests of the binary: exact output of the worked examples,
//! exit-code contract, formatting idempotence, and byte-determinism of the
//! search across worker counts.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspidal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspidal"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

#[test]
fn resolve_ordinary_cusp_exact_output() {
    let out = run(&["resolve", "(3,2)"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "pairs: (3,2)\nchain: [2,1,3]\nmultiplicity sequence: (2,1,1)\nM = 4\nI = 6\n"
    );
}

#[test]
fn resolve_16_9_exact_output() {
    let out = run(&["resolve", "(16,9)"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "pairs: (16,9)\nchain: [5,2,1,3,2,2,3]\nmultiplicity sequence: (9,7,2,2,2,1,1)\nM = 24\nI = 144\n"
    );
}

#[test]
fn chains_kq_two_lists_the_four_families() {
    let out = run(&["chains", "--kq", "2", "--kmax", "0"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "[5,1,(2)_3]\n[4,2,1,3,2]\n[3,3,1,2,3]\n[3,2,2,1,4]\n"
    );
    let out = run(&["chains", "--kq", "-1", "--kmax", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "[1]\n[2,1]\n[2,2,1]\n");
}

#[test]
fn scenario_exit_codes() {
    let out = run(&["scenario", "mult3-two-equations"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[PASS]"));
    assert!(stdout(&out).contains("[5, 7, 2, 1]"));

    let out = run(&["scenario", "--all"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).matches("[PASS]").count(), 9);

    let out = run(&["scenario", "does-not-exist"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["chains"]); // neither --kq nor --enumerate is a domain error
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn domain_errors_exit_one() {
    let out = run(&["resolve", "(2,3)"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error:"), "one-line diagnostic, got {err:?}");
    assert_eq!(err.lines().count(), 1);
}

const BOUNDARY: &str = r#"{
  "components": [
    {"id": 0, "selfint": -5, "is_E": true},
    {"id": 1, "selfint": -1},
    {"id": 2, "selfint": -2},
    {"id": 3, "selfint": -3}
  ],
  "edges": [[0, 1, 1], [1, 2, 1], [1, 3, 1]],
  "ksq": 6
}"#;

#[test]
fn fmt_is_idempotent_and_canonical() {
    let once = stdout(&run(&["fmt", BOUNDARY]));
    let twice = stdout(&run(&["fmt", &once]));
    assert_eq!(once, twice);
    assert!(once.contains("\"selfint\": -1"));
}

#[test]
fn disc_ind_bark_peel_on_a_boundary() {
    let out = run(&["disc", BOUNDARY, "--sub", "2,3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "d(T) = 6\n");

    let out = run(&["ind", BOUNDARY]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("ind(D) = 31/30"), "{text}");

    let out = run(&["bark", BOUNDARY]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("(Bk D)^2 = -31/30"));

    let out = run(&["peel", BOUNDARY]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("Upsilon: [1]"), "{text}");
    assert!(text.contains("D_flat[0] = 1"), "{text}");
}

#[test]
fn check_reads_params_and_reports_verdicts() {
    let dir = std::env::temp_dir().join("cuspidal-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("params.json");
    std::fs::write(
        &path,
        r#"{
            "p2": 2, "zeta": 0, "gamma_n": 4, "tau_star": 0,
            "n0": 0, "n1": 0, "eta0": 0, "eta1": 0,
            "c": 1, "s": 0, "n_exc": 0, "k_dot_rn": 0, "sharp_c_plus": 0
        }"#,
    )
    .unwrap();
    let out = run(&["check", "--params", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("minimal-model-bound"), "{text}");
    assert!(text.contains("gamma-window-mid"), "{text}");
}

#[test]
fn search_is_byte_identical_across_worker_counts() {
    let args = ["search", "--cusps", "2", "--bound", "6"];
    let one = run_with_threads(&args, "1");
    let many = run_with_threads(&args, "8");
    assert!(one.status.success());
    assert_eq!(stdout(&one), stdout(&many), "worker count changed the output");
    assert!(stdout(&one).contains("\"records\""));
}

#[test]
fn json_mode_round_trips_through_serde() {
    let out = run(&["--json", "resolve", "(3,2)"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["M"], 4);
    assert_eq!(v["I"], 6);
    assert_eq!(v["chain"], serde_json::json!([2, 1, 3]));

    let out = run(&["--json", "scenario", "zeta0-final-pair"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["solutions"], serde_json::json!([[8, 0], [10, 3]]));
}
