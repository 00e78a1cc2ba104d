use std::process::{Command, Output};

fn expodiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expodiv"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = expodiv(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn eval_prints_integers() {
    assert_eq!(stdout(&["eval", "mu_e", "16"]), "0\n");
    assert_eq!(stdout(&["eval", "t_e", "64"]), "4\n");
    assert_eq!(stdout(&["eval", "kappa_e", "72"]), "72\n");
    assert_eq!(stdout(&["eval", "tau12", "1e3"]), "4\n");
    assert_eq!(stdout(&["eval", "mu", "30"]), "-1\n");
}

#[test]
fn edivisors_one_per_line() {
    assert_eq!(stdout(&["edivisors", "72"]), "6\n18\n24\n72\n");
    assert_eq!(stdout(&["edivisors", "256", "--squarefree"]), "2\n4\n");
    assert_eq!(stdout(&["edivisors", "1"]), "1\n");
}

#[test]
fn table_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    stdout(&[
        "table",
        "t_e",
        "--limit",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        csv,
        "n,value\n1,1\n2,1\n3,1\n4,2\n5,1\n6,1\n7,1\n8,2\n9,2\n10,1\n"
    );
}

#[test]
fn segment_size_does_not_change_output() {
    let a = stdout(&["table", "mu_e", "--limit", "5000"]);
    let b = stdout(&["--segment-size", "97", "table", "mu_e", "--limit", "5000"]);
    let c = stdout(&["--threads", "2", "table", "mu_e", "--limit", "5e3"]);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn sum_with_checkpoint_list() {
    let csv = stdout(&[
        "sum",
        "kappa_e",
        "--limit",
        "100",
        "--checkpoints",
        "10,100",
    ]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,sum,main,residual");
    assert!(lines[1].starts_with("10,55,"));
    assert_eq!(lines.len(), 3);
    let geo = stdout(&["sum", "mu_e", "--limit", "1e5"]);
    assert_eq!(geo.lines().count(), 1 + 5);
    assert!(
        !expodiv(&["sum", "mu_e", "--limit", "100", "--checkpoints", "1000"])
            .status
            .success()
    );
}

#[test]
fn constants_json() {
    let out = stdout(&[
        "constants",
        "--id",
        "density_e_squarefree",
        "--oracle-cutoff",
        "1e5",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["id"], "density_e_squarefree");
    assert_eq!(v["method"], "log-expansion");
    let value = v["value"].as_f64().unwrap();
    assert!(value > 0.93 && value < 0.97);
    for key in ["params", "error_estimate", "oracle_value", "oracle_gap"] {
        assert!(!v[key].is_null(), "{key}");
    }
}

#[test]
fn verify_exit_status_tracks_result() {
    let ok = expodiv(&["verify", "limsup", "--limit", "1e4"]);
    assert!(ok.status.success());
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.lines().last().unwrap().starts_with("PASS"));

    let bad = expodiv(&[
        "verify",
        "constants",
        "--oracle-tolerance",
        "1e-30",
        "--oracle-cutoff",
        "1e4",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8(bad.stdout)
        .unwrap()
        .contains("FAIL m_mu_e_oracle_gap"));
}

#[test]
fn verify_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    stdout(&[
        "verify",
        "dirichlet",
        "--limit",
        "1e4",
        "--json",
        path.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&path).unwrap();
    let report: expodiv_core::bench::SuiteReport = serde_json::from_str(&text).unwrap();
    assert!(report.passed);
    assert!(report.checks.iter().all(|c| c.runtime_s.is_none()));
    assert_eq!(expodiv_core::format::to_json(&report).unwrap(), text);
}

#[test]
fn fit_json() {
    let out = stdout(&["fit", "tau12", "--limit", "1e6", "--model", "linear_sqrt"]);
    let fit: expodiv_core::bench::FitResult = serde_json::from_str(&out).unwrap();
    assert_eq!(fit.checkpoint_count, 13);
    assert_eq!((fit.x_min, fit.x_max), (1000, 1_000_000));
    assert!(fit.alpha < 0.5);
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(expodiv(&["eval", "nope", "3"]).status.code(), Some(2));
    assert_eq!(expodiv(&["eval", "mu_e", "0"]).status.code(), Some(2));
    assert_eq!(
        expodiv(&["fit", "mu_e", "--limit", "100", "--model", "linear"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        expodiv(&["fit", "kappa_e", "--limit", "1e4", "--model", "linear"])
            .status
            .code(),
        Some(2)
    );
}
