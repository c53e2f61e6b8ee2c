use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn fwdis(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fwdis")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// DR-submodular quadratic with uniform negative couplings.
fn write_quadratic(dir: &Path, name: &str, n: usize, coupling: f64) -> String {
    let h: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { -0.5 } else { coupling }).collect()).collect();
    let linear: Vec<f64> = h.iter().map(|row| 0.75 * row.iter().map(|v: &f64| v.abs()).sum::<f64>()).collect();
    let path = dir.join(name);
    fs::write(&path, json!({ "hessian": h, "linear": linear }).to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn solve_cut_writes_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = fwdis(&["solve", "--objective", "cut2", "--region", "box", "--iters", "1000", "--out", "run"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("beta = 1.173563e-1"));

    let trace = fs::read_to_string(dir.path().join("run/trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("j,t,sqrt_a,step_coeff,f,best_f,lyapunov,residual,x_inf_norm"));
    assert_eq!(lines.count(), 1001);

    let summary = read_json(&dir.path().join("run/summary.json"));
    let s = &summary["summary"];
    let beta = s["beta"].as_f64().unwrap();
    assert!(s["best_value"].as_f64().unwrap() >= 0.25 - beta);
    assert!(s["best_value"].as_f64().unwrap() >= s["final_value"].as_f64().unwrap());
    assert_eq!(summary["run"]["iterations"], 1000);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["solve", "--objective", "cut2", "--iters", "0"],
        &["solve", "--objective", "cut2"],
        &["solve", "--objective", "cut2", "--iters", "5", "--epsilon", "0.1"],
        &["solve", "--objective", "missing.table", "--iters", "5"],
        &["solve", "--objective", "cut2", "--region", "simplex", "--iters", "5"],
        &["solve", "--iters", "5"],
        &["frobnicate"],
        &["compare", "--seeds", "3..1"],
        &["compare", "--region", "sphere"],
    ];
    for args in cases {
        let o = fwdis(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn origin_start_on_covering_region_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = fwdis(&["solve", "--objective", "cut2", "--region", "covering", "--iters", "10"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = fwdis(
        &["solve", "--objective", "cut2", "--region", "covering", "--iters", "10", "--start", "mininf"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = read_json(&dir.path().join("fwdis-out/summary.json"));
    assert_eq!(summary["summary"]["start_inf_norm"], 0.5);
}

#[test]
fn epsilon_mode_picks_t_and_warns_at_cap() {
    let dir = tempfile::tempdir().unwrap();
    let o = fwdis(&["solve", "--objective", "cut2", "--epsilon", "0.05", "--cap", "100000"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("T = 53863 "), "{}", stdout(&o));
    assert!(stderr(&o).is_empty());

    let o = fwdis(&["solve", "--objective", "cut2", "--epsilon", "0.05", "--cap", "1000"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("T = 1000 "));
    assert!(stderr(&o).contains("warning"));
    assert_eq!(read_json(&dir.path().join("fwdis-out/summary.json"))["epsilon_reached"], false);
}

#[test]
fn written_config_reproduces_the_trace() {
    let dir = tempfile::tempdir().unwrap();
    let o = fwdis(
        &[
            "solve",
            "--objective",
            "random-quadratic:3",
            "--seed",
            "17",
            "--region",
            "cardinality:1.5",
            "--iters",
            "400",
            "--out",
            "a",
            "--write-config",
            "run.json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = fwdis(&["solve", "--config", "run.json", "--out", "b"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let a = fs::read(dir.path().join("a/trace.csv")).unwrap();
    let b = fs::read(dir.path().join("b/trace.csv")).unwrap();
    assert_eq!(a, b);
    let cfg = read_json(&dir.path().join("run.json"));
    assert_eq!(cfg["seed"], 17);
    assert_eq!(cfg["start"], "origin");
}

#[test]
fn verify_cut_passes_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = fwdis(&["verify", "--objective", "cut2", "--iters", "100", "--out", "v"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let out = stdout(&o);
    for check in [
        "structure",
        "gradient_finite_difference",
        "dr_inequality",
        "gradient_antitone",
        "coordinate_headroom",
        "join_lower_bound",
        "lyapunov_increment",
        "lyapunov_early_exit",
        "approximation_certificate",
    ] {
        assert!(out.contains(&format!("check={check} instance=cut2 ")), "missing {check}");
    }
    assert!(!out.contains("status=fail"));
    let report = read_json(&dir.path().join("v/report.json"));
    assert_eq!(report["passed"], true);
    assert_eq!(report["oracle"]["value"], 1.0);
}

#[test]
fn verify_flags_invalid_quadratic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"hessian": [[0, 1], [1, 0]], "linear": [1, 1]}"#).unwrap();
    let o = fwdis(&["verify", "--objective", path.to_str().unwrap(), "--iters", "50"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("check=dr_inequality instance=bad.json"));
    assert!(out.lines().any(|l| l.starts_with("check=dr_inequality") && l.contains("status=fail")));
    assert!(out.lines().any(|l| l.starts_with("check=structure") && l.contains("status=fail")));

    // The same file is rejected outright by solve.
    let o = fwdis(&["solve", "--objective", path.to_str().unwrap(), "--iters", "5"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_six_dimensional_halfspaces_without_lyapunov() {
    let dir = tempfile::tempdir().unwrap();
    let q = write_quadratic(dir.path(), "q6.json", 6, -0.2);
    fs::write(dir.path().join("rows.txt"), "# a1 .. a6 b\n1 1 1 0 0 0 1.5\n0 0 0 1 1 1 1.5\n1 -1 1 -1 1 -1 1\n")
        .unwrap();
    let o = fwdis(
        &[
            "verify",
            "--objective",
            &q,
            "--region",
            "halfspaces:rows.txt",
            "--iters",
            "200",
            "--resolution",
            "0.1",
            "--skip-lyapunov",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let out = stdout(&o);
    assert!(!out.contains("lyapunov"));
    assert!(out.contains("check=approximation_certificate instance=q6.json"));
    assert_eq!(out.lines().count(), 8);
}

#[test]
fn verify_rejects_oversized_instances() {
    let dir = tempfile::tempdir().unwrap();
    let q = write_quadratic(dir.path(), "q7.json", 7, -0.1);
    let o = fwdis(&["verify", "--objective", &q, "--iters", "10"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n = 7, but the reference optimum needs n <= 6"), "{}", stderr(&o));

    // Only the listed grid steps are accepted.
    let q = write_quadratic(dir.path(), "q2.json", 2, -0.5);
    let o = fwdis(&["verify", "--objective", &q, "--iters", "10", "--resolution", "0.3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = fwdis(&["verify", "--objective", &q, "--iters", "10", "--resolution", "0.1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn compare_table_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let o = fwdis(&["compare", "--seeds", "1..10", "--dim", "4", "--iters", "300", "--out", "c"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("quad-n4-box-s")).count(), 10);
    assert!(out.contains("0.2500") && out.contains("0.1925"));
    let rows = read_json(&dir.path().join("c/compare.json"));
    for row in rows.as_array().unwrap() {
        assert!(row["ratio_fw_dis"].as_f64().unwrap() >= 0.25 - 0.1);
        assert!(row["classic_fw"].as_f64().is_some());
    }
    let csv = fs::read_to_string(dir.path().join("c/compare.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);

    let run = || stdout(&fwdis(&["compare", "--seeds", "1..3", "--dim", "3", "--region", "knapsack"], dir.path()));
    assert_eq!(run(), run());
}

#[test]
fn compare_without_oracle_marks_ratios_unavailable() {
    let dir = tempfile::tempdir().unwrap();
    let o = fwdis(&["compare", "--seeds", "1..2", "--dim", "8", "--iters", "50", "--out", "c"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n/a"));
    let csv = fs::read_to_string(dir.path().join("c/compare.csv")).unwrap();
    let first = csv.lines().nth(1).unwrap();
    assert!(first.ends_with(",,,"), "{first}");
}
