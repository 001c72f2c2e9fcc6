use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const FIG1: &str = "p ocr 4 2 6\n1 5\n3 5\n4 5\n2 6\n3 6\n4 6\n";

fn oscm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscm"))
        .args(args)
        .output()
        .unwrap()
}

fn oscm_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_oscm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_exact_fig1() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "fig1.gr", FIG1);
    let stats = dir.path().join("stats.json");
    let out = oscm(&["solve", &inst, "--stats", stats.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "5\n6\n");
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(stats).unwrap()).unwrap();
    assert_eq!(json["final_cost"], 3);
    assert_eq!(json["proven_optimal"], true);
    assert_eq!(json["mode"], "exact");
    assert!(json["lower_bound"].as_u64().unwrap() <= 3);
    assert!(json
        .as_object()
        .unwrap()
        .values()
        .all(|v| !v.is_object() && !v.is_array()));
}

#[test]
fn solve_reads_stdin() {
    let out = oscm_stdin(&["solve", "--quiet"], FIG1);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "5\n6\n");
    assert!(out.stderr.is_empty());
}

#[test]
fn heuristic_mode_is_deterministic_and_not_below_exact() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("p ocr 8 10 0\n");
    let mut edges = Vec::new();
    for b in 0..10 {
        for a in 1..=8 {
            if (a * 7 + b * 3) % 5 < 2 {
                edges.push(format!("{a} {}\n", 9 + b));
            }
        }
    }
    text = text.replace(" 0\n", &format!(" {}\n", edges.len())) + &edges.concat();
    let inst = write(dir.path(), "g.gr", &text);
    let a = oscm(&[
        "solve",
        &inst,
        "--mode",
        "heuristic",
        "--seed",
        "7",
        "--quiet",
    ]);
    let b = oscm(&[
        "solve",
        &inst,
        "--mode",
        "heuristic",
        "--seed",
        "7",
        "--quiet",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let cost = |out: &Output| {
        let sol = write(dir.path(), "s.sol", &stdout(out));
        let v = oscm(&["verify", &inst, &sol]);
        stdout(&v).trim().parse::<u64>().unwrap()
    };
    let exact = oscm(&["solve", &inst, "--quiet"]);
    assert!(cost(&a) >= cost(&exact));
}

#[test]
fn solve_rejects_garbage() {
    let out = oscm_stdin(&["solve"], "this is not an instance\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = oscm(&["solve", "/nonexistent/file.gr"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "fig1.gr", FIG1);
    let cases = [
        ("5\n6\n", Some(0), "3\n"),
        ("6\n5\n", Some(0), "4\n"),
        ("5\n5\n", Some(1), ""),
    ];
    for (i, (sol, code, printed)) in cases.iter().enumerate() {
        let s = write(dir.path(), &format!("{i}.sol"), sol);
        let out = oscm(&["verify", &inst, &s]);
        assert_eq!(out.status.code(), *code, "{sol:?}");
        assert_eq!(stdout(&out), *printed);
    }
}

#[test]
fn bench_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = oscm(&["bench", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 1);
    let summary: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
    assert_eq!(
        (summary["summary"].as_bool(), summary["instances"].as_u64()),
        (Some(true), Some(0))
    );

    write(dir.path(), "a.gr", FIG1);
    write(dir.path(), "b.gr", "p ocr 2 2 5\n1 3\n");
    write(dir.path(), "notes.txt", "ignored");
    let out = oscm(&["bench", dir.path().to_str().unwrap(), "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["final_cost"], 3);
    assert!(rows[0]["lower_bound"].as_u64().unwrap() <= 3);
    assert!(rows[1]["error"].is_string());
    assert_eq!(
        (rows[2]["solved"].as_u64(), rows[2]["errors"].as_u64()),
        (Some(1), Some(1))
    );

    let out = oscm(&["bench", "/nonexistent/dir"]);
    assert_eq!(out.status.code(), Some(2));
}
