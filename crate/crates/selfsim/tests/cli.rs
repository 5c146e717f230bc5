use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn selfsim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfsim")).args(args).current_dir(dir).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn synth_then_hurst_reports_eight_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = selfsim(&["synth", "--h", "0.8", "--n", "4096", "--seed", "1", "-o", "a.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = selfsim(&["hurst", "a.csv", "--method", "all", "--csv", "h.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).is_empty());
    let table = stdout(&o);
    assert_eq!(table.lines().count(), 9);
    let csv = fs::read_to_string(dir.path().join("h.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("method,h,alpha,fractal_dim,r_squared,error"));
    assert_eq!(csv.lines().count(), 9);
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let h: f64 = f[1].parse().unwrap();
        assert_eq!(f[2].parse::<f64>().unwrap(), 2.0 * h - 1.0);
        assert_eq!(f[3].parse::<f64>().unwrap(), 2.0 - h);
    }
}

#[test]
fn single_method() {
    let dir = tempfile::tempdir().unwrap();
    selfsim(&["synth", "--h", "0.7", "--n", "2048", "--seed", "2", "-o", "a.csv"], dir.path());
    let o = selfsim(&["hurst", "a.csv", "--method", "rs"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
    let o = selfsim(&["hurst", "a.csv", "--method", "whittle"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn single_value_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("one.csv"), "value\n4.2\n").unwrap();
    let o = selfsim(&["stats", "one.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("TooShort"), "{}", stderr(&o));
    fs::write(dir.path().join("flat.csv"), "value\n1\n1\n1\n").unwrap();
    let o = selfsim(&["stats", "flat.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("DegenerateSeries"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["synth", "--h", "0.8", "--n", "10"][..],
        &["synth", "--h", "0.8", "--n", "10", "--seed", "1", "--unknown"],
        &["stats", "missing.csv"],
        &["frobnicate"],
        &["smooth", "x.csv"],
    ] {
        let o = selfsim(args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
    }
    let o = selfsim(&["--help"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    for sub in ["stats", "hurst", "synth", "psd", "smooth", "simulate", "benchmark"] {
        assert!(stdout(&o).contains(sub));
    }
}

#[test]
fn malformed_csv_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.csv"), "t,value\n0,1\n1,2\n2,oops\n").unwrap();
    let o = selfsim(&["stats", "bad.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("MalformedCsv") && stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn invalid_parameters_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = selfsim(&["synth", "--h", "1.2", "--n", "100", "--seed", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("InvalidH"));
    let o = selfsim(&["simulate", "--seed", "1", "--dt", "0.01"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("StepTooLarge"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.conf"), "# synth settings\nh=0.6\nn=512\nseed=9\n").unwrap();
    let o = selfsim(&["synth", "--config", "run.conf", "-o", "a.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = selfsim(&["synth", "--config", "run.conf", "--n", "100", "-o", "b.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = selfsim(&["synth", "--h", "0.6", "--n", "512", "--seed", "9", "-o", "c.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let read = |f: &str| fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("a.csv"), read("c.csv"));
    assert_eq!(String::from_utf8(read("b.csv")).unwrap().lines().count(), 101);

    fs::write(dir.path().join("bad.conf"), "h=0.6\nwidth=3\n").unwrap();
    let o = selfsim(&["synth", "--config", "bad.conf", "--n", "10", "--seed", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("UnknownFlag"));
}

#[test]
fn writers_round_trip_through_readers() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| {
        let o = selfsim(args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    };
    run(&["synth", "--h", "0.75", "--n", "1024", "--seed", "4", "-o", "x.csv"]);
    run(&["smooth", "x.csv", "--method", "ma", "--window", "5", "-o", "ma.csv"]);
    run(&["smooth", "ma.csv", "--method", "sg", "--valid-only", "-o", "sg.csv"]);
    run(&["smooth", "sg.csv", "--method", "kernel", "--bandwidth", "2", "-o", "k.csv"]);
    run(&["stats", "k.csv", "--running-variance", "rv.csv", "--acf", "acf.csv"]);
    run(&["stats", "rv.csv"]);
    run(&["psd", "x.csv", "-o", "w.csv"]);
    run(&["psd", "x.csv", "--method", "periodogram", "-o", "p.csv"]);
    let sg = fs::read_to_string(dir.path().join("sg.csv")).unwrap();
    assert_eq!(sg.lines().count(), 1 + 1024 - 10);
    let p = fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert_eq!(p.lines().next(), Some("freq_rad_per_sample,power"));
    assert_eq!(p.lines().count(), 1 + 512);

    run(&[
        "synth",
        "--h",
        "0.88",
        "--n",
        "1001",
        "--seed",
        "5",
        "--delay-mu",
        "0.127",
        "--delay-sigma",
        "0.03",
        "--delay-max",
        "0.5",
        "-o",
        "d.csv",
    ]);
    run(&["simulate", "--t-end", "10", "--delay-trace", "d.csv", "--smooth", "sg", "-o", "sim.csv"]);
    run(&["simulate", "--t-end", "10", "--seed", "5", "--h", "0.88", "--smooth", "sg", "-o", "sim2.csv"]);
    let a = fs::read(dir.path().join("sim.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("sim2.csv")).unwrap());
    assert!(String::from_utf8(a).unwrap().starts_with("t,p_clean,p_measured,p_smoothed\n"));
}

#[test]
fn smoothing_keeps_the_time_column() {
    let dir = tempfile::tempdir().unwrap();
    let rows: String = (0..30).map(|k| format!("{},{}\n", 2.0 + 0.5 * k as f64, (k % 4) as f64)).collect();
    fs::write(dir.path().join("x.csv"), format!("t,value\n{rows}")).unwrap();
    let o = selfsim(
        &["smooth", "x.csv", "--method", "ma", "--window", "3", "--valid-only", "-o", "y.csv"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let y = fs::read_to_string(dir.path().join("y.csv")).unwrap();
    let mut lines = y.lines();
    assert_eq!(lines.next(), Some("t,value"));
    assert!(lines.next().unwrap().starts_with("2.5,"));
}

#[test]
fn small_benchmark_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = selfsim(
        &[
            "benchmark",
            "--alphas",
            "0.3,0.9",
            "--seeds",
            "2",
            "--t-end",
            "2",
            "--results",
            "r.csv",
            "--aggregate",
            "g.csv",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert_eq!(r.lines().next(), Some("smoother,alpha,seed,mse"));
    assert_eq!(r.lines().count(), 1 + 6 * 2 * 2);
    let g = fs::read_to_string(dir.path().join("g.csv")).unwrap();
    assert_eq!(g.lines().next(), Some("smoother,alpha,mean_mse,std_mse"));
    assert_eq!(g.lines().count(), 1 + 6 * 2);
    assert!(stdout(&o).lines().all(|l| l.starts_with("HOLDS") || l.starts_with("FAILS")));
}
