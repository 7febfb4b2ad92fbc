use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn cornerlab(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cornerlab"))
        .args(args)
        .env("CORNERLAB_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = cornerlab(args, "2");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn summary(text: &str) -> &str {
    text.lines().find(|l| l.starts_with("# summary")).expect("summary line")
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn scan_full_and_empty() {
    let full = ok(&["scan", "--group", "Z5", "--density", "1"]);
    assert!(summary(&full).contains(" count=25 "));
    assert!(full.starts_with("# cornerlab scan\n"));
    let empty = ok(&["scan", "--group", "Z5", "--density", "0"]);
    assert!(summary(&empty).contains(" count=0 "));
}

#[test]
fn scan_z101_rows_and_rerun() {
    let args = ["scan", "--group", "Z101", "--density", "0.3", "--seed", "7"];
    let first = ok(&args);
    assert_eq!(data_rows(&first).len(), 101);
    let again = cornerlab(&args, "1");
    assert_eq!(again.stdout, first.as_bytes());
}

#[test]
fn zscan_examples() {
    let full = ok(&["zscan", "--group", "Z10", "--density", "1", "--rho", "0.3"]);
    assert!(summary(&full).contains("best_d=1 count=81"));
    let empty = ok(&["zscan", "--group", "Z10", "--density", "0", "--rho", "0.3"]);
    assert!(summary(&empty).ends_with("count=0"));
    let bad = cornerlab(&["zscan", "--group", "Z2xZ5", "--rho", "0.3"], "1");
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn variational_endpoints() {
    let one = ok(&["variational", "--alpha", "1", "--grid-n", "3", "--restarts", "2"]);
    let row: Vec<&str> = data_rows(&one)[0].split(',').collect();
    assert_eq!((row[0], row[1]), ("1", "1"));
    let zero = ok(&["variational", "--alpha", "0", "--grid-n", "3", "--restarts", "2"]);
    let row: Vec<&str> = data_rows(&zero)[0].split(',').collect();
    assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);
    let header = one.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "alpha,m_hat,envelope,alpha3,alpha4,n,restarts,seed");
}

#[test]
fn envelope_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    fs::write(&path, "# sweep\nalpha,m_hat\n0,0\n0.5,0.3\n1,1\n").unwrap();
    let out = ok(&["envelope", "--input", path.to_str().unwrap()]);
    let rows = data_rows(&out);
    assert_eq!(rows, ["0,0,0,1", "0.5,0.3,0.3,1", "1,1,1,1"]);
    fs::write(&path, "alpha,m_hat\n0,0\n0.5,0.6\n1,1\n").unwrap();
    let out = ok(&["envelope", "--input", path.to_str().unwrap()]);
    assert_eq!(data_rows(&out)[1], "0.5,0.6,0.5,0");
}

#[test]
fn pipeline_reports() {
    let trivial: Value = serde_json::from_str(&ok(&["pipeline", "--group", "Z1"])).unwrap();
    assert_eq!(trivial["result"]["degenerate"], Value::Bool(true));
    let full: Value = serde_json::from_str(&ok(&["pipeline", "--group", "Z8", "--density", "1"])).unwrap();
    for key in ["corner_count", "box_count", "variational"] {
        assert!((full["result"][key].as_f64().unwrap() - 1.0).abs() < 1e-9, "{key}");
    }
    let z32: Value =
        serde_json::from_str(&ok(&["pipeline", "--group", "Z32", "--density", "0.5", "--seed", "1"])).unwrap();
    for key in ["corner_count", "box_count", "variational", "nu_measure", "bohr_rounds", "outer_rounds"] {
        assert!(!z32["result"][key].is_null(), "{key}");
    }
    assert_eq!(z32["config"]["group"], "Z32");
    let too_big = cornerlab(&["pipeline", "--group", "Z256"], "1");
    assert_eq!(too_big.status.code(), Some(3));
}

#[test]
fn regularize_json() {
    let out: Value =
        serde_json::from_str(&ok(&["regularize", "--group", "Z16", "--delta", "1/4", "--growth", "poly:4:2"])).unwrap();
    let r = &out["result"];
    assert!(r["bohr"]["rounds"].is_u64());
    assert_eq!(r["partition_at_delta"]["delta"], "1/4");
    assert!(r["double"]["f2_cut_norms"].is_array());
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# comment\ngroup = Z5\ndensity=0\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert!(summary(&ok(&["scan", "--config", c])).contains(" count=0 "));
    assert!(summary(&ok(&["scan", "--config", c, "--density", "1"])).contains(" count=25 "));
    fs::write(&cfg, "group=Z5\ncolour=red\n").unwrap();
    assert_eq!(cornerlab(&["scan", "--config", c], "1").status.code(), Some(2));
}

#[test]
fn set_file_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("a.txt");
    fs::write(&set, "group Z3 density 0.3333333333333333\n100\n010\n001\n").unwrap();
    let out = dir.path().join("scan.csv");
    ok(&["scan", "--set-file", set.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("# group=Z3\n"));
    assert!(!text.contains("out="));
    let mismatch = cornerlab(&["scan", "--set-file", set.to_str().unwrap(), "--group", "Z4"], "1");
    assert_eq!(mismatch.status.code(), Some(2));
    let missing = cornerlab(&["scan", "--set-file", "/nonexistent/set.txt"], "1");
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn validation_errors() {
    assert_eq!(cornerlab(&["scan"], "1").status.code(), Some(2));
    assert_eq!(cornerlab(&["scan", "--group", "Z5", "--density", "1.5"], "1").status.code(), Some(2));
    assert_eq!(cornerlab(&["variational", "--alpha", "0.5,0.2"], "1").status.code(), Some(2));
    assert_eq!(cornerlab(&["scan", "--group", "Z99999"], "1").status.code(), Some(3));
    assert_eq!(cornerlab(&["pipeline", "--group", "Z8", "--growth", "tower:2"], "1").status.code(), Some(2));
}

#[test]
fn every_command_is_thread_count_independent() {
    let runs: [&[&str]; 7] = [
        &["scan", "--group", "Z2xZ12", "--density", "0.4", "--seed", "3"],
        &["popular", "--group", "Z37", "--density", "0.3", "--seed", "5"],
        &["zscan", "--group", "Z40", "--density", "0.4", "--seed", "2", "--rho", "1/5"],
        &["variational", "--samples", "5", "--grid-n", "4", "--restarts", "4", "--seed", "9"],
        &["envelope", "--samples", "5", "--grid-n", "3", "--restarts", "3"],
        &["regularize", "--group", "Z16", "--growth", "poly:4:2", "--seed", "4"],
        &["pipeline", "--group", "Z16", "--growth", "poly:64:3", "--seed", "4"],
    ];
    for args in runs {
        let one = cornerlab(args, "1");
        let four = cornerlab(args, "4");
        assert!(one.status.success(), "{args:?}: {}", String::from_utf8_lossy(&one.stderr));
        assert_eq!(one.stdout, four.stdout, "{args:?}");
        assert_eq!(one.stdout, cornerlab(args, "1").stdout, "{args:?}");
    }
}
