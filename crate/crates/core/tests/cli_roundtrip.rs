use std::path::Path;

use protoseq::analysis::{is_pairwise_si, is_si, is_ti, Budget};
use protoseq::cli::run;
use protoseq::construction::{construct_si_with, DutyFactorList, RowFill};
use protoseq::format::read_sequence_file;
use serde_json::Value;

fn protoseq(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("protoseq").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_write_read_verify_matches_in_memory() {
    let dir = tempfile::tempdir().unwrap();
    for (duty, fill) in [("2/3,1/3,1/3", "left"), ("1/2,1/3,2/5", "random"), ("3/4,1/2", "left")] {
        let file = dir.path().join("set.txt");
        let (code, _, err) = protoseq(&[
            "construct",
            "--duty",
            duty,
            "--fill",
            fill,
            "--seed",
            "9",
            "--out",
            path(&file),
        ]);
        assert_eq!(code, 0, "{err}");

        let fill = if fill == "left" {
            RowFill::LeftJustified
        } else {
            RowFill::Random { seed: 9 }
        };
        let mem = construct_si_with(&DutyFactorList::parse(duty).unwrap(), fill).unwrap();
        assert_eq!(read_sequence_file(&file).unwrap(), mem);

        let b = Budget::default();
        let expected = [
            ("si", is_si(&mem, b).unwrap().holds, None),
            ("pairwise-si", is_pairwise_si(&mem, b).unwrap().holds, None),
            ("ti", is_ti(&mem, 1, b).unwrap().holds, Some("1")),
        ];
        for (prop, holds, gamma) in expected {
            let mut args = vec!["verify", "--property", prop];
            if let Some(g) = gamma {
                args.extend(["--gamma", g]);
            }
            args.push(path(&file));
            let (code, out, _) = protoseq(&args);
            let v = json(&out);
            assert_eq!(v["schema"], 1);
            assert_eq!(v["holds"], holds);
            assert_eq!(code, if holds { 0 } else { 1 });
        }
    }
}

#[test]
fn verify_reports_one_based_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("halves.txt");
    std::fs::write(&file, "# aligned halves\n1100\n1100\n").unwrap();
    let (code, out, _) = protoseq(&["verify", "--property", "si", path(&file)]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["witness"]["users"], serde_json::json!([1, 2]));
    assert_eq!(v["witness"]["reference_value"], 2);
    assert_eq!(v["witness"]["other_value"], 1);
}

#[test]
fn budget_exceeded_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("set.txt");
    protoseq(&["construct", "--duty", "2/3,1/3,1/3", "--out", path(&file)]);
    let (code, out, err) = protoseq(&["verify", "--property", "si", "--budget", "100", path(&file)]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert!(err.contains("budget"));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    std::fs::write(&file, "101\n10\n").unwrap();
    let (code, _, err) = protoseq(&["verify", "--property", "si", path(&file)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"));
    let (code, _, _) = protoseq(&["verify", "--property", "si", "/nonexistent/file"]);
    assert_eq!(code, 2);
    let (code, _, _) = protoseq(&["bound", "--duty", "3/2"]);
    assert_eq!(code, 2);
    let (code, _, _) = protoseq(&[
        "simulate",
        "--gamma",
        "1",
        "--runs",
        "1",
        "--seed",
        "1",
        "--scheme",
        "bogus",
        path(&file),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn randomized_commands_are_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("set.txt");
    protoseq(&["construct", "--duty", "1/2,1/2,1/2,1/2", "--out", path(&file)]);
    for args in [
        vec![
            "simulate",
            "--gamma",
            "2",
            "--runs",
            "300",
            "--seed",
            "5",
            "--scheme",
            "random",
            "--horizon",
            "2",
        ],
        vec!["simulate", "--gamma", "2", "--runs", "300", "--seed", "5"],
        vec![
            "session",
            "--gamma",
            "3",
            "--periods",
            "3",
            "--draws",
            "20",
            "--seed",
            "5",
            "--detail",
        ],
    ] {
        let mut a = args.clone();
        a.push(path(&file));
        let first = protoseq(&a);
        let mut threaded = vec!["--threads", "3"];
        threaded.extend(a.iter().copied());
        let second = protoseq(&threaded);
        assert_eq!(first.0, 0, "{}", first.2);
        assert_eq!(first, second);
    }
    let c1 = protoseq(&["construct", "--duty", "2/5,1/3", "--fill", "random", "--seed", "3"]);
    let c2 = protoseq(&["construct", "--duty", "2/5,1/3", "--fill", "random", "--seed", "3"]);
    assert_eq!(c1, c2);
}

#[test]
fn simulate_reports_rng_and_zero_variance() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("set.txt");
    protoseq(&["construct", "--duty", "2/3,1/3,1/3", "--out", path(&file)]);
    let (code, out, _) = protoseq(&["simulate", "--gamma", "2", "--runs", "200", "--seed", "1", path(&file)]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["rng"], "xoshiro256++");
    assert_eq!(v["seed"], 1);
    let u1 = &v["per_user"][0];
    for key in ["min", "mean", "max"] {
        assert_eq!(u1[key]["num"], 16);
        assert_eq!(u1[key]["den"], 27);
    }
}

#[test]
fn session_non_ti_set_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("set.txt");
    std::fs::write(&file, "100\n100\n100\n").unwrap();
    let (code, _, err) = protoseq(&["session", "--gamma", "1", "--periods", "2", "--seed", "1", path(&file)]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let (code, _, err) = protoseq(&[
        "session",
        "--gamma",
        "1",
        "--periods",
        "2",
        "--seed",
        "1",
        "--trust-ti",
        path(&file),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("not an integer"));
}

#[test]
fn curve_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("curve.csv");
    let (code, _, _) = protoseq(&[
        "curve",
        "--users",
        "2..7",
        "--gamma",
        "2,3",
        "--f",
        "1/7,0.5",
        "--out",
        path(&file),
    ]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(&file).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "users,gamma,f,per_user,system");
    // gamma 2 valid for K = 3..7, gamma 3 for K = 4..7, two duty factors each
    assert_eq!(lines.len(), 1 + 2 * (5 + 4));
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 5));
}

#[test]
fn example_is_deterministic_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = protoseq(&["example", "--out-dir", path(dir.path())]);
    let b = protoseq(&["example"]);
    assert_eq!(a.1, b.1);
    assert_eq!(a.0, b.0);
    let written = read_sequence_file(&dir.path().join("example.txt")).unwrap();
    assert_eq!(written.period(), 27);
    for line in [
        "H(1,2)",
        "H(2,3)",
        "H(1,3)",
        "H(1,2,3)",
        "s1",
        "s2",
        "s3",
        "R all shifts, gamma=2",
    ] {
        let row = a.1.lines().find(|l| l.starts_with(line)).unwrap();
        assert!(row.ends_with(" ok"), "{row}");
    }
}
