use std::process::{Command, Output};

use mpk::branching::GraphContext;
use mpk::measures::{check_coherence, ewens_level, EwensParams};
use mpk::rational::{int, ratio};
use mpk::FiniteGroupData;

fn mpk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpk")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn enumerate_counts_rows() {
    let out = mpk(&["enumerate", "--n", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 5);
}

#[test]
fn measure_ewens_rows() {
    let out = mpk(&["measure", "ewens", "--group", "trivial", "--t", "1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2\t1/2\n1,1\t1/2\n");
    let json = mpk(&["--format", "json", "measure", "ewens", "--group", "S3", "--t", "1/2,2,3", "--n", "2"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let total: f64 = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| mpk::rational::to_f64(&mpk::rational::parse_rational(r["weight"].as_str().unwrap()).unwrap()))
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn coherence_passes_and_agrees_with_library() {
    let out = mpk(&["check", "coherence", "--group", "S3", "--t", "1/2,2,3", "--max-n", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let z2 = FiniteGroupData::builtin("Z2").unwrap();
    let params = EwensParams::new(vec![int(1), int(2)], &z2).unwrap();
    let seq: Vec<_> = (0..=3).map(|n| ewens_level(n, &params)).collect();
    for theta in ["0", "1"] {
        let ctx = GraphContext::new(&z2, if theta == "0" { int(0) } else { int(1) }).unwrap();
        let lib = check_coherence(&seq, &ctx).unwrap();
        let cli = mpk(&["check", "coherence", "--group", "Z2", "--t", "1,2", "--max-n", "3", "--theta", theta]);
        assert_eq!(cli.status.code(), Some(if lib.passed { 0 } else { 1 }), "theta {theta}");
    }
}

#[test]
fn failing_check_prints_witness_and_exits_one() {
    let out = mpk(&["check", "harmonicity", "--group", "Z2", "--t", "1,2", "--max-n", "3", "--theta", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("upward sum"));
}

#[test]
fn other_checks_pass() {
    for args in [
        &["check", "consistency", "--group", "S3", "--t", "1/2,2,3", "--max-n", "4"][..],
        &["check", "harmonicity", "--group", "Z2", "--t", "1/2,3", "--max-n", "4"],
        &["check", "orthogonality", "--group", "S3"],
        &["check", "pieri", "--max-size", "4", "--theta", "1/3"],
    ] {
        let out = mpk(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["enumerate", "--n", "2", "--k", "2", "--bogus"][..],
        &["enumerate", "--n", "2"],
        &["measure", "ewens", "--t", "1,2", "--n", "2"],
        &["graph", "dim", "--group", "Z2", "--theta", "1", "--from", "1", "--to", "2|1"],
        &["symfunc", "jack", "--lambda", "11", "--theta", "1"],
        &["wreath", "type", "--group", "Z2", "--perm", "1,2", "--colors", "x;y"],
        &["--jobs", "0", "enumerate", "--n", "1", "--k", "1"],
    ] {
        assert_eq!(mpk(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn wreath_type_example() {
    let out = mpk(&["wreath", "type", "--group", "S3", "--perm", "3,2,1", "--colors", "(132);(123);(1)(23)"]);
    assert_eq!(stdout(&out), "type\t-|2|1\n");
}

#[test]
fn graph_and_kernel_values() {
    let dim = mpk(&["graph", "dim", "--group", "Z2", "--theta", "1/2", "--from", "-|-", "--to", "2|1"]);
    assert_eq!(stdout(&dim), "dim\t3\n");
    let dir = std::env::temp_dir().join(format!("mpk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let omega = dir.join("omega.json");
    std::fs::write(&omega, r#"{"alpha": [["1/2"], []], "delta": ["2/3", "1/3"]}"#).unwrap();
    let out = mpk(&[
        "kernel",
        "theta",
        "--group",
        "Z2",
        "--theta",
        "1",
        "--lambda",
        "-|1",
        "--omega",
        omega.to_str().unwrap(),
    ]);
    assert!(stdout(&out).contains("kernel\t1/3"), "{}", stdout(&out));
}

#[test]
fn jack_expansion_is_exact() {
    let out = mpk(&["symfunc", "jack", "--lambda", "2,1", "--theta", "1"]);
    // Schur s_21 = m_21 + 2 m_111
    assert_eq!(stdout(&out), "m(2,1) + 2*m(1,1,1)\n");
}

#[test]
fn output_is_byte_identical() {
    let sample = ["sample", "mpd", "--t", "1,2", "--zeta", "1,1", "--count", "50", "--seed", "42"];
    let a = mpk(&sample);
    let b = mpk(&sample);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 50);
    let line: serde_json::Value = serde_json::from_str(stdout(&a).lines().next().unwrap()).unwrap();
    assert_eq!(line["delta"].as_array().unwrap().len(), 2);

    let est =
        ["estimate", "ewens", "--lambda", "2|1,1", "--group", "Z2", "--t", "1,2", "--samples", "20000", "--seed", "7"];
    let one = mpk(&[&["--jobs", "1"][..], &est[..]].concat());
    let many = mpk(&[&["--jobs", "4"][..], &est[..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    assert!(stdout(&one).contains("exact\t16/315"));
}

#[test]
fn sample_writes_file() {
    let path = std::env::temp_dir().join(format!("mpk-samples-{}.jsonl", std::process::id()));
    let out = mpk(&[
        "sample",
        "mpd",
        "--t",
        "1",
        "--zeta",
        "1",
        "--count",
        "3",
        "--seed",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn ratio_helper_matches_cli_rationals() {
    let out = mpk(&["graph", "martin", "--group", "Z2", "--theta", "1/2", "--from", "1|-", "--to", "2|1"]);
    let value = stdout(&out).trim().split('\t').nth(1).unwrap().to_string();
    assert_eq!(mpk::rational::parse_rational(&value).unwrap(), ratio(2, 3));
}
