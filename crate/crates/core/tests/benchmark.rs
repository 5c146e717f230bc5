mod common;

use common::fgn;
use selfsim_core::benchmark::{run_benchmark, table1_report, BenchmarkPlan, Scenario};
use selfsim_core::hurst::{EstimatorConfig, Method};
use selfsim_core::synthesis::DelayModel;
use selfsim_core::TimeSeries;

#[test]
fn default_plan_findings_hold() {
    let plan = BenchmarkPlan::default();
    let a = run_benchmark(&plan).unwrap();
    assert_eq!(a.records.len(), 9 * 20 * plan.smoothers.len());
    assert_eq!(a.aggregate.len(), 9 * plan.smoothers.len());
    let findings = a.findings();
    assert!(!findings.is_empty());
    for f in &findings {
        assert!(f.holds, "{}: {}", f.claim, f.detail);
    }
    for &alpha in &plan.alphas {
        let raw = a.mean_mse("identity", alpha).unwrap();
        for s in plan.smoothers.iter().filter(|s| s.id != "identity") {
            let m = a.mean_mse(&s.id, alpha).unwrap();
            assert!(m < raw, "{} at {alpha}: {m} >= {raw}", s.id);
        }
    }
    // Rerunning reproduces every record bit for bit.
    let b = run_benchmark(&plan).unwrap();
    assert_eq!(a, b);
}

#[test]
fn zero_delay_channel_is_lossless() {
    let plan = BenchmarkPlan {
        alphas: vec![0.5],
        seeds: 2,
        scenario: Scenario {
            t_end: 1.0,
            delay: DelayModel { mu: 0.0, sigma_d: 1e-12, tau_max: 0.5 },
            ..Scenario::default()
        },
        clamp_guard: None,
        ..BenchmarkPlan::default()
    };
    let res = run_benchmark(&plan).unwrap();
    for r in res.records.iter().filter(|r| r.smoother == "identity") {
        assert!(r.mse < 1e-20, "{}", r.mse);
    }
}

#[test]
fn table_lists_every_estimator() {
    let x = fgn(0.7, 4096, 3);
    let report = table1_report(&x, &EstimatorConfig::default());
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines.len(), 9);
    for (line, method) in lines[1..].iter().zip(Method::ALL) {
        let cells: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cells[0], method.label());
        let h: f64 = cells[1].trim_end_matches('*').parse().unwrap();
        let alpha: f64 = cells[2].parse().unwrap();
        let dim: f64 = cells[3].parse().unwrap();
        assert!((alpha - (2.0 * h - 1.0)).abs() <= 1e-3);
        assert!((dim - (2.0 - h)).abs() <= 1e-3);
    }
}

#[test]
fn table_names_failures() {
    let x = TimeSeries::from_values(vec![1.0; 100]).unwrap();
    let report = table1_report(&x, &EstimatorConfig::default());
    for line in report.lines().skip(1) {
        let cells: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cells.len(), 4);
        assert!(cells[1..].iter().all(|c| *c == cells[1]));
        assert!(cells[1] == "SeriesTooShort" || cells[1] == "DegenerateSeries", "{line}");
    }
}
