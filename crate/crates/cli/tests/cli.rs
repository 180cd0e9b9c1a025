//! End-to-end tests of the `mindisp` binary: wire formats, exit codes,
//! output determinism, and the construct -> dispersion round trip.

use std::path::Path;
use std::process::{Command, Output};

fn mindisp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mindisp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn construct_exact_csv() {
    let out = mindisp(&["construct", "--r", "1/3", "--d", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "x1,x2\n1/3,1/3\n1/2,1/2\n2/3,2/3\n");
}

#[test]
fn construct_single_point() {
    let out = mindisp(&["construct", "--r", "1/2", "--d", "3"]);
    assert_eq!(stdout(&out), "x1,x2,x3\n1/2,1/2,1/2\n");
}

#[test]
fn construct_decimal_has_five_rows() {
    let out = mindisp(&["construct", "--r", "0.3", "--d", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 6);
}

#[test]
fn construct_rejects_bad_volume() {
    for bad in ["0.55", "1/5", "abc"] {
        let out = mindisp(&["construct", "--r", bad, "--d", "2"]);
        assert_eq!(out.status.code(), Some(2), "r = {bad}");
    }
}

#[test]
fn construct_json_schema_and_determinism() {
    let args = ["construct", "--r", "1/3", "--d", "2", "--format", "json"];
    let first = mindisp(&args);
    let second = mindisp(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "json output must be byte-identical");
    let value: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(value["r"], "1/3");
    assert_eq!(value["alpha"], 3);
    assert_eq!(value["n_r"], 2);
    assert_eq!(value["config"].as_array().unwrap().len(), 3);
    assert_eq!(value["bounds"]["thm1"], 7);
    assert_eq!(value["bounds"]["alpha_ceiling"], 3);
    assert_eq!(value["bounds"]["alpha_paper_floor"], 3);
    assert_eq!(value["bounds"]["sosnovec"], 13);
    assert_eq!(value["dispersion"]["value"], "1/3");
}

#[test]
fn construct_svg_plot() {
    let out = mindisp(&["construct", "--r", "1/3", "--d", "2", "--format", "svg"]);
    let text = stdout(&out);
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<circle").count(), 3);
}

#[test]
fn round_trip_construct_then_dispersion() {
    let dir = tempfile::tempdir().unwrap();
    for (r, expected) in [("1/3", 1.0 / 3.0), ("0.3", 0.3), ("0.437", 0.437)] {
        let csv = dir.path().join(format!("points-{}.csv", expected));
        let out = mindisp(&[
            "construct",
            "--r",
            r,
            "--d",
            "2",
            "--out",
            csv.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let report = mindisp(&["dispersion", "--in", csv.to_str().unwrap()]);
        assert!(report.status.success());
        let value: serde_json::Value = serde_json::from_str(&stdout(&report)).unwrap();
        let disp = match &value["value"] {
            serde_json::Value::String(s) => {
                let (n, d) = s.split_once('/').unwrap();
                n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()
            }
            v => v.as_f64().unwrap(),
        };
        assert!(
            (disp - expected).abs() <= 1e-9,
            "round trip at r = {r}: {disp} vs {expected}"
        );
    }
}

#[test]
fn dispersion_of_cross_is_exact_quarter() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cross.csv");
    std::fs::write(&csv, "x1,x2\n1/2,1/4\n1/2,3/4\n1/4,1/2\n3/4,1/2\n").unwrap();
    let out = mindisp(&["dispersion", "--in", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["value"], "1/4");
}

#[test]
fn dispersion_of_header_only_csv_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("empty.csv");
    std::fs::write(&csv, "x1,x2\n").unwrap();
    let out = mindisp(&["dispersion", "--in", csv.to_str().unwrap(), "--format", "table"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("dispersion = 1"));
    assert!(text.contains("[0, 1) x [0, 1)"));
}

#[test]
fn dispersion_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    std::fs::write(&csv, "x1,x2\n0.5\n").unwrap();
    let out = mindisp(&["dispersion", "--in", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("missing.csv");
    let out = mindisp(&["dispersion", "--in", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let cross = dir.path().join("cross.csv");
    std::fs::write(&cross, "x1,x2\n1/2,1/4\n1/2,3/4\n1/4,1/2\n3/4,1/2\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mindisp"))
        .args(["dispersion", "--in", cross.to_str().unwrap()])
        .env("MINDISP_ORACLE_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn scan_is_monotone_and_ends_at_one() {
    let out = mindisp(&["scan", "0.26", "0.5", "100"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,alpha"));
    let counts: Vec<u32> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts.len(), 101);
    assert!(counts.windows(2).all(|w| w[0] >= w[1]), "step function must not increase");
    assert_eq!(*counts.last().unwrap(), 1);
}

#[test]
fn scan_holds_three_on_its_interval() {
    // value 3 exactly on [1/3, 0.381966...)
    let out = mindisp(&["scan", "0.3334", "0.3819", "10"]);
    let text = stdout(&out);
    for line in text.lines().skip(1) {
        assert_eq!(line.split(',').nth(1), Some("3"), "line {line}");
    }
}

#[test]
fn scan_rejects_bad_ranges() {
    for args in [["scan", "0.5", "0.3", "10"], ["scan", "0.1", "0.4", "10"]] {
        let out = mindisp(&args);
        assert_eq!(out.status.code(), Some(2));
    }
}

#[test]
fn scan_writes_svg_with_breakpoint_markers() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("steps.svg");
    let out = mindisp(&[
        "scan",
        "0.3",
        "0.5",
        "40",
        "--out",
        dir.path().join("steps.csv").to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains("0.38197"));
    assert!(text.contains(r#"fill="white""#));
}

#[test]
fn verify_known_and_unknown_suites() {
    let out = mindisp(&["verify", "endpoints"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("PASS endpoints"));

    let out = mindisp(&["verify", "bogus"]);
    assert_eq!(out.status.code(), Some(2));

    let out = mindisp(&["verify", "list"]);
    assert!(stdout(&out).contains("lemma-volume"));
}

#[test]
fn verify_json_format() {
    let out = mindisp(&["verify", "symmetry", "--format", "json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value[0]["name"], "symmetry");
    assert_eq!(value[0]["passed"], true);
}

#[test]
fn csv_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = mindisp(&[
            "construct",
            "--r",
            "0.3",
            "--d",
            "3",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(read(&a), read(&b));
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap()
}
