use std::process::{Command, Output};

fn bohr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bohr"))
        .args(args)
        .env_remove("BOHR_TOL")
        .output()
        .expect("run bohr")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const HALF: [&str; 6] = ["--gamma", "1", "--delta", "1", "--lambda", "0.5"];

fn with(head: &[&'static str], tail: &[&'static str]) -> Vec<&'static str> {
    head.iter().chain(tail).copied().collect()
}

#[test]
fn radius_plain_reports_printed_value() {
    let o = bohr(&with(
        &["radius", "--variant", "improved", "--p", "2"],
        &HALF,
    ));
    assert!(o.status.success());
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("radius")).unwrap();
    let r: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((r - 0.652442).abs() < 1e-3);
}

#[test]
fn radius_verify_rogosinski_is_sharp() {
    let o = bohr(&with(
        &[
            "radius",
            "--variant",
            "rogosinski",
            "--n",
            "1",
            "--N",
            "2",
            "--verify",
        ],
        &HALF,
    ));
    assert!(o.status.success());
    assert!(stdout(&o).contains("SharpConfirmed"));
}

#[test]
fn radius_table_row() {
    let o = bohr(&[
        "--format",
        "json",
        "radius",
        "--variant",
        "improved",
        "--p",
        "2",
        "--gamma",
        "0.1253",
        "--delta",
        "0.5",
        "--lambda",
        "0.125",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = v["root"]["radius"].as_f64().unwrap();
    assert!((r - 0.9988).abs() < 1e-3);
}

#[test]
fn json_and_csv_agree() {
    let args = with(
        &[
            "radius",
            "--variant",
            "self-plus",
            "--verify",
            "--gamma",
            "0.5",
            "--delta",
            "1",
            "--lambda",
            "0",
        ],
        &[],
    );
    let j = bohr(&with(&["--format", "json"], &args));
    let c = bohr(&with(&["--format", "csv"], &args));
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    let csv_text = stdout(&c);
    let mut lines = csv_text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<_> = lines.next().unwrap().split(',').collect();
    let values: Vec<_> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| values[header.iter().position(|h| *h == name).unwrap()];
    let radius: f64 = col("radius").parse().unwrap();
    assert!((radius - v["root"]["radius"].as_f64().unwrap()).abs() <= 1e-14);
    assert_eq!(col("verdict"), v["sharpness"]["verdict"].as_str().unwrap());
}

#[test]
fn scan_csv_schema_and_crossing() {
    let o = bohr(&with(
        &[
            "--format",
            "csv",
            "scan",
            "--variant",
            "improved",
            "--p",
            "2",
            "--from",
            "0",
            "--to",
            "0.9",
            "--step",
            "0.01",
        ],
        &HALF,
    ));
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().starts_with('#'));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["r", "value", "tail_bound"]);
    let rows: Vec<(f64, f64)> = rdr
        .records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].parse().unwrap(), rec[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 91);
    assert!((rows[0].1 + std::f64::consts::PI.powi(2) / 12.0).abs() < 1e-12);
    assert!(rows.windows(2).all(|w| w[1].1 > w[0].1));
    let cross = rows
        .windows(2)
        .find(|w| w[0].1 < 0.0 && w[1].1 >= 0.0)
        .unwrap();
    assert!((cross[0].0 - 0.65).abs() < 1e-9);
}

#[test]
fn scan_closed_form_crossing() {
    let o = bohr(&[
        "--format",
        "csv",
        "scan",
        "--closed-form",
        "thm-squared",
        "--from",
        "0.6",
        "--to",
        "0.75",
        "--step",
        "0.01",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('r'))
        .map(|l| {
            let mut it = l.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    let cross = rows
        .windows(2)
        .find(|w| w[0].1 < 0.0 && w[1].1 >= 0.0)
        .unwrap();
    assert!((cross[0].0 - 0.67).abs() < 1e-9);
}

#[test]
fn output_is_deterministic() {
    let args = with(
        &[
            "--format",
            "csv",
            "scan",
            "--variant",
            "refined",
            "--n",
            "2",
            "--N",
            "5",
            "--mu",
            "0.5",
            "--beta",
            "2",
        ],
        &HALF,
    );
    assert_eq!(bohr(&args).stdout, bohr(&args).stdout);
    let a = bohr(&["--format", "json", "suite"]);
    let b = bohr(&["--format", "json", "suite"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn suite_passes_with_expected_flags() {
    let o = bohr(&["--format", "json", "suite"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 29);
    let flagged: Vec<_> = rows.iter().filter(|r| r["status"] == "FLAG").collect();
    assert_eq!(flagged.len(), 3);
    assert!(flagged.iter().all(|r| r["expected_flag"] == true));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("bohr-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("radius.json");
    let p = path.to_str().unwrap().to_string();
    let mut args = vec![
        "--format",
        "json",
        "--out",
        p.as_str(),
        "radius",
        "--variant",
        "co-analytic-split",
    ];
    args.extend(["--gamma", "0.5", "--delta", "1", "--lambda", "0"]);
    let o = Command::new(env!("CARGO_BIN_EXE_bohr"))
        .args(&args)
        .output()
        .unwrap();
    assert!(o.status.success() && o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v["root"]["radius"].as_f64().unwrap() - 0.594279).abs() < 1e-3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tolerance_env_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_bohr"))
        .args([
            "--format",
            "json",
            "scan",
            "--variant",
            "squared",
            "--gamma",
            "0.5",
            "--delta",
            "1",
            "--lambda",
            "0.25",
        ])
        .args(["--from", "0.5", "--to", "0.5"])
        .env("BOHR_TOL", "1e-6")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tol"].as_f64(), Some(1e-6));
}

#[test]
fn exit_codes() {
    let invalid = bohr(&[
        "radius",
        "--variant",
        "improved",
        "--gamma",
        "1",
        "--delta",
        "1",
        "--lambda",
        "1",
    ]);
    assert_eq!(invalid.status.code(), Some(2));
    let bad_grid = bohr(&with(
        &["scan", "--variant", "improved", "--step", "0"],
        &HALF,
    ));
    assert_eq!(bad_grid.status.code(), Some(2));
    let bad_flag = bohr(&["radius", "--variant", "nonsense"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    let bracket = bohr(&[
        "radius",
        "--variant",
        "improved",
        "--gamma",
        "0.12500000001",
        "--delta",
        "0.5",
        "--lambda",
        "0.125",
    ]);
    assert_eq!(bracket.status.code(), Some(3));
}
