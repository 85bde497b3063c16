use std::fs;
use std::process::{Command, Output};

fn qdepth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdepth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn factor_fifteen() {
    let out = qdepth(&["factor", "--modulus", "15", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "15");
    assert!(row[1] == "3" || row[1] == "5", "{text}");
}

#[test]
fn lemma_suites_report_no_violations() {
    let out = qdepth(&["lemmas", "--trials", "10000", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("0 violations"));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    for line in text.lines().skip(1) {
        assert_eq!(line.split(',').nth(2), Some("0"), "{line}");
    }
}

#[test]
fn simulate_counts_and_probabilities() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.qc");
    fs::write(&path, "# plus on wire 1\nWIDTH 2\nINPUT 0+\nH*\n").unwrap();
    let path = path.to_str().unwrap();

    let out = qdepth(&["simulate", path, "--shots", "1000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("label,count\n"));
    let total: usize = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 1000);
    for line in text.lines().skip(1) {
        assert!(line.starts_with("00,") || line.starts_with("10,"), "{line}");
    }

    let exact = stdout(&qdepth(&["simulate", path]));
    assert!(exact.starts_with("label,probability\n"));
    assert_eq!(exact.lines().count(), 3);
}

#[test]
fn out_flag_writes_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("rows.json");
    let out = qdepth(&[
        "grover",
        "--n",
        "4",
        "--format",
        "json",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["total_calls"], 4);
    assert_eq!(v["policy"], "diffusion");
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["frobnicate"][..],
        &["grover", "--n"],
        &["grover", "--n", "4", "--schedule", "2y3"],
        &["simulate", "/definitely/not/here.qc"],
        &[
            "order-find",
            "--modulus",
            "15",
            "--generator",
            "2",
            "--ancilla",
            "bogus",
        ],
        &[
            "lemmas",
            "--trials",
            "5",
            "--out",
            "/definitely/not/here/out.csv",
        ],
    ] {
        let out = qdepth(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty());
    }
}

#[test]
fn experiment_failures_exit_two() {
    let too_wide = qdepth(&["grover", "--n", "30"]);
    assert_eq!(too_wide.status.code(), Some(2));
    let exhausted = qdepth(&["factor", "--modulus", "21", "--attempts", "0"]);
    assert_eq!(exhausted.status.code(), Some(2));
    assert!(stderr(&exhausted).contains("no factor"));
}

#[test]
fn help_exits_zero() {
    let out = qdepth(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    for cmd in [
        "simulate",
        "gadget-verify",
        "depth2",
        "order-find",
        "factor",
        "eigenest",
        "grover",
        "grover-tradeoff",
        "lemmas",
    ] {
        assert!(stdout(&out).contains(cmd), "{cmd}");
    }
}

#[test]
fn every_subcommand_accepts_common_flags() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("c.qc");
    fs::write(&circuit, "WIDTH 3\nINPUT 1+0\nTOF c0 c1 t2\nH*\n").unwrap();
    let circuit = circuit.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["simulate", circuit, "--shots", "10"],
        vec!["gadget-verify"],
        vec!["depth2", "--n", "4", "--a", "3"],
        vec![
            "order-find",
            "--modulus",
            "15",
            "--generator",
            "7",
            "--k",
            "16",
            "--b",
            "2",
        ],
        vec!["factor", "--modulus", "15"],
        vec!["eigenest", "--k", "64", "--trials", "3"],
        vec!["grover", "--n", "3"],
        vec!["grover-tradeoff", "--n", "4", "--family", "frontier"],
        vec!["lemmas", "--trials", "10"],
    ];
    for case in cases {
        let file = dir.path().join(format!("{}.json", case[0]));
        let mut args = case.clone();
        args.extend([
            "--seed",
            "5",
            "--format",
            "json",
            "--out",
            file.to_str().unwrap(),
        ]);
        let out = qdepth(&args);
        assert_eq!(out.status.code(), Some(0), "{case:?}: {}", stderr(&out));
        let text = fs::read_to_string(&file).unwrap();
        serde_json::from_str::<serde_json::Value>(&text)
            .unwrap_or_else(|e| panic!("{case:?}: {e}"));
    }
}
