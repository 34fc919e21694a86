use std::process::Command;

use bellsaw::cli::{run, CSV_COLUMNS, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, PROFILE_COLUMNS};
use serde_json::Value;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn bellsaw(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bellsaw").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(args: &[&str]) -> Value {
    let o = bellsaw(args);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .take_while(|l| !l.is_empty())
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn optimize_chsh() {
    let v = json(&["optimize", "--ineq", "chsh", "--dim", "2", "--restarts", "20", "--seed", "1"]);
    assert_eq!(v["command"], "optimize");
    let value = v["outputs"]["value"].as_f64().unwrap();
    assert!((value - 0.207_106_781_186_547_5).abs() < 1e-8);
    assert!(v["outputs"]["residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["config"]["seed"], 1);
    assert_eq!(v["outputs"]["alice"].as_array().unwrap().len(), 2);
    assert_eq!(v["outputs"]["state"].as_array().unwrap().len(), 2);
    assert_eq!(v["input"]["sha256"].as_str().unwrap().len(), 64);
    assert!(v["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn optimize_i3322_csv() {
    let o = bellsaw(&["optimize", "--ineq", "i3322", "--dim", "2", "--restarts", "50", "--seed", "1", "--format", "csv"]);
    assert_eq!(o.code, EXIT_OK);
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows[0], CSV_COLUMNS.map(String::from).to_vec());
    assert_eq!(rows[1][0], "2");
    assert!((rows[1][2].parse::<f64>().unwrap() - 0.25).abs() < 1e-8);
    assert_eq!(rows[1][7], "1");
}

#[test]
fn json_and_csv_agree_and_reproduce() {
    let base = ["optimize", "--ineq", "i3322", "--dim", "3", "--restarts", "5", "--field", "complex"];
    let first = json(&base);
    let seed = first["config"]["seed"].as_u64().unwrap();
    let seed = seed.to_string();
    let mut again: Vec<&str> = base.to_vec();
    again.extend(["--seed", &seed]);
    let second = json(&again);
    assert_eq!(first["outputs"]["value"], second["outputs"]["value"]);
    again.extend(["--format", "csv"]);
    let csv = bellsaw(&again);
    let rows = csv_rows(&csv.stdout);
    assert_eq!(rows[1][2].parse::<f64>().unwrap(), second["outputs"]["value"].as_f64().unwrap());
    // Complex entries are [re, im] pairs.
    assert_eq!(second["outputs"]["alice"][0][0][0].as_array().unwrap().len(), 2);
}

#[test]
fn seeds_are_drawn_when_omitted() {
    let a = json(&["optimize", "--ineq", "chsh", "--dim", "2", "--restarts", "1"]);
    assert!(a["config"]["seed"].is_u64());
}

#[test]
fn usage_errors() {
    let o = bellsaw(&["optimize", "--ineq", "chsh"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("--dim"));
    assert!(o.stderr.contains("Usage"));
    assert_eq!(bellsaw(&["optimize", "--ineq", "chsh", "--dim", "0"]).code, EXIT_USAGE);
    assert_eq!(bellsaw(&["optimize", "--ineq", "nope.txt", "--dim", "2"]).code, EXIT_USAGE);
    assert_eq!(bellsaw(&["optimize", "--ineq", "chsh", "--dim", "2", "--early-stop", "1,2"]).code, EXIT_USAGE);
    assert_eq!(bellsaw(&["i3322", "--branch", "0"]).code, EXIT_USAGE);
    assert_eq!(bellsaw(&["i3322", "--dim", "5", "--branch", "1"]).code, EXIT_USAGE);
    assert_eq!(bellsaw(&["i3322", "--sweep", "9:3"]).code, EXIT_USAGE);
    assert_eq!(bellsaw(&["frobnicate"]).code, EXIT_USAGE);
    let help = bellsaw(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("optimize"));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "# comment\n2 2\n0 1 2\n1 x 0\n0 0 0\n").unwrap();
    let o = bellsaw(&["classical", "--ineq", path.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("line 4"), "{}", o.stderr);
}

#[test]
fn classical_values() {
    for ineq in ["chsh", "i3322"] {
        let o = bellsaw(&["classical", "--ineq", ineq]);
        assert_eq!(o.code, EXIT_OK);
        assert_eq!(o.stdout.trim(), "0");
    }
    let v = json(&["classical", "--ineq", "i3322", "--format", "json"]);
    assert_eq!(v["outputs"]["value"], 0.0);
}

#[test]
fn classical_size_limit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.txt");
    let mut text = String::from("16 16\n");
    for _ in 0..17 {
        text += &vec!["1"; 17].join(" ");
        text.push('\n');
    }
    std::fs::write(&path, text).unwrap();
    let o = bellsaw(&["classical", "--ineq", path.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_NUMERIC);
    assert!(o.stderr.contains("limit"));
}

#[test]
fn chain_threshold() {
    let v = json(&["i3322", "--dim", "12", "--branch", "0"]);
    let row = &v["outputs"]["rows"][0];
    assert_eq!(row["n"], 12);
    assert_eq!(row["branch"], 0);
    assert!(row["value"].as_f64().unwrap() > 0.25);
    assert!(row["residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn chain_sweep_crossover() {
    let o = bellsaw(&["i3322", "--sweep", "70:90:1", "--branch", "both", "--format", "csv"]);
    assert_eq!(o.code, EXIT_OK);
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows.len(), 1 + 2 * 21);
    let value = |k: usize| rows[k][2].parse::<f64>().unwrap();
    let mut crossings = Vec::new();
    for k in 0..20 {
        let d0 = value(2 + 2 * k) - value(1 + 2 * k);
        let d1 = value(4 + 2 * k) - value(3 + 2 * k);
        if (d0 > 0.0) != (d1 > 0.0) {
            crossings.push(rows[3 + 2 * k][0].clone());
        }
    }
    assert_eq!(crossings, vec!["80"]);
    assert_eq!(rows[2][1], "-1");
    let distance: f64 = rows[2][3].parse().unwrap();
    assert!((distance - (0.250875385 - value(2))).abs() < 1e-14);
}

#[test]
fn chain_dump() {
    let v = json(&["i3322", "--dim", "99", "--branch", "-1", "--dump"]);
    let row = &v["outputs"]["rows"][0];
    let c: Vec<f64> = row["c"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(c.len(), 100);
    assert_eq!(row["lambda"].as_array().unwrap().len(), 99);
    assert_eq!((c[0], c[99]), (1.0, -1.0));
    let changes = (1..98).filter(|&i| (c[i] > 0.0) != (c[i + 1] > 0.0)).count();
    assert_eq!(changes, 1);
    assert_eq!(row["sign_change_index"], 49);

    let o = bellsaw(&["i3322", "--dim", "9", "--branch", "-1", "--dump", "--format", "csv"]);
    let (summary, profile) = o.stdout.split_once("\n\n").unwrap();
    assert_eq!(summary.lines().count(), 2);
    let profile: Vec<&str> = profile.lines().collect();
    assert_eq!(profile[0], PROFILE_COLUMNS.join(","));
    assert_eq!(profile.len(), 1 + 10);
}

#[test]
fn writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let o = bellsaw(&["i3322", "--dim", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["outputs"]["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_bellsaw");
    let ok = Command::new(exe).args(["classical", "--ineq", "chsh"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "0");
    let usage = Command::new(exe).args(["optimize", "--ineq", "chsh"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
    assert!(!usage.stderr.is_empty());
}
