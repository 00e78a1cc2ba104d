//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and fails if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use expodiv_core::bench::{run_suite, SuiteConfig, SuiteId, SuiteReport};

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn run(id: SuiteId, limit: Option<u64>) -> (SuiteReport, Duration) {
    let cfg = SuiteConfig {
        limit,
        timings: true,
        ..Default::default()
    };
    let start = Instant::now();
    let report = run_suite(id, &cfg).expect("suite runs");
    (report, start.elapsed())
}

fn checks_pass(report: &SuiteReport, names: &[&str]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in names {
        match report.check(name) {
            Some(c) => {
                ok &= c.passed;
                parts.push(format!("{name}={:.6e} (bound {:.3e})", c.measured, c.bound));
            }
            None => {
                ok = false;
                parts.push(format!("{name} missing"));
            }
        }
    }
    (ok, parts.join(", "))
}

fn within(elapsed: Duration, budget_s: u64) -> (bool, String) {
    (
        elapsed <= Duration::from_secs(budget_s),
        format!("{:.1}s of {budget_s}s", elapsed.as_secs_f64()),
    )
}

fn runtime_of(report: &SuiteReport, name: &str) -> Duration {
    Duration::from_secs_f64(
        report
            .check(name)
            .and_then(|c| c.runtime_s)
            .unwrap_or(f64::INFINITY),
    )
}

#[test]
fn acceptance() {
    let mut outcomes = Vec::new();

    // 1. e-Moebius identity for all n <= 10^6
    let (ident, t) = run(SuiteId::Identities, Some(1_000_000));
    let (ok, detail) = checks_pass(&ident, &["e_mobius_sum"]);
    let (fast, time) = within(runtime_of(&ident, "e_mobius_sum"), 60);
    outcomes.push(Outcome {
        id: 1,
        title: "e-Moebius identity to 10^6",
        passed: ok && fast,
        detail: format!("{detail}; {time}; suite {:.1}s", t.as_secs_f64()),
    });

    // 2. factorization suite to 10^5
    let (dir, t) = run(SuiteId::Dirichlet, Some(100_000));
    let (fast, time) = within(t, 120);
    let failing: Vec<&str> = dir
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    outcomes.push(Outcome {
        id: 2,
        title: "factorization suite to 10^5",
        passed: dir.passed && fast,
        detail: format!("{} checks, failing {failing:?}; {time}", dir.checks.len()),
    });

    // 3. constants self-consistency
    let (consts, t) = run(SuiteId::Constants, None);
    let (fast, time) = within(t, 60);
    let failing: Vec<&str> = consts
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    outcomes.push(Outcome {
        id: 3,
        title: "constants self-consistency",
        passed: consts.passed && fast,
        detail: format!(
            "{} checks, failing {failing:?}; {time}",
            consts.checks.len()
        ),
    });

    // 4-8 share one pass over [1, 10^7]
    let (asym, t) = run(SuiteId::Asymptotics, Some(10_000_000));
    let (ok, detail) = checks_pass(&asym, &["e_squarefree_density"]);
    let (fast, time) = within(runtime_of(&asym, "e_squarefree_density"), 60);
    outcomes.push(Outcome {
        id: 4,
        title: "e-squarefree density at 10^7",
        passed: ok && fast,
        detail: format!("{detail}; {time}"),
    });

    let (ok, detail) = checks_pass(
        &asym,
        &[
            "mean_value_slope_mu_e",
            "mean_value_slope_mu_star_e",
            "mean_value_slope_F_lambda",
        ],
    );
    outcomes.push(Outcome {
        id: 5,
        title: "mean-value residual slopes",
        passed: ok,
        detail,
    });

    let (ok, detail) = checks_pass(&asym, &["t_e_slope", "t_e_sqrt_term_resolved"]);
    outcomes.push(Outcome {
        id: 6,
        title: "t_e residual slope and sqrt term",
        passed: ok,
        detail,
    });

    let (ok, detail) = checks_pass(&asym, &["kappa_e_relative_error", "kappa_e_slope"]);
    outcomes.push(Outcome {
        id: 7,
        title: "kappa_e main term",
        passed: ok,
        detail,
    });

    let (ok, detail) = checks_pass(&asym, &["tau12_slope"]);
    outcomes.push(Outcome {
        id: 8,
        title: "tau(1,2,.) residual slope",
        passed: ok,
        detail: format!("{detail}; asymptotics {:.1}s", t.as_secs_f64()),
    });

    // 9. limsup
    let (lim, _) = run(SuiteId::Limsup, Some(1_000_000));
    let (ok, detail) = checks_pass(
        &lim,
        &[
            "sup_scan_maximizer_is_two",
            "sup_scan_value",
            "champion_ratio_decreasing",
            "champion_ratio_above_half_log2",
        ],
    );
    outcomes.push(Outcome {
        id: 9,
        title: "limsup scan and champions",
        passed: ok,
        detail,
    });

    // 10. determinism of the CLI report
    let dir = tempfile::tempdir().unwrap();
    let run_cli = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_expodiv"))
            .args(["verify", "identities", "--limit", "1e5", "--json"])
            .arg(&path)
            .output()
            .unwrap()
            .status;
        (status.success(), std::fs::read(&path).unwrap_or_default())
    };
    let (ok_a, a) = run_cli("a.json");
    let (ok_b, b) = run_cli("b.json");
    outcomes.push(Outcome {
        id: 10,
        title: "byte-identical verify output",
        passed: ok_a && ok_b && !a.is_empty() && a == b,
        detail: format!("{} bytes", a.len()),
    });

    for o in &outcomes {
        println!(
            "{} criterion {}: {} [{}]",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            o.detail
        );
    }
    let failed: Vec<u32> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
