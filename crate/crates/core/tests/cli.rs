mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::*;
use shiftkrylov::io::{read_history_csv, write_matrix_market, write_rhs};
use shiftkrylov::SparseSymMatrix;

fn shiftkrylov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftkrylov")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Whitespace-split summary rows of the first method block.
fn rows(stdout: &str) -> Vec<Vec<String>> {
    stdout
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
        .take_while(|l| !l.is_empty())
        .map(|l| l.split_whitespace().map(str::to_owned).collect())
        .collect()
}

#[test]
fn identity_three_shifts() {
    let dir = tempfile::tempdir().unwrap();
    let (m, s) = (dir.path().join("i.mtx"), dir.path().join("s.txt"));
    write_matrix_market(&SparseSymMatrix::identity(5).unwrap(), &m).unwrap();
    fs::write(&s, "0.5 0\n1 1\n-3 0.2\n").unwrap();
    for method in ["qmr-sym", "qmr-sym-b", "cocg", "qmr-sym-omega"] {
        let out = shiftkrylov(&["--matrix", p(&m), "--shifts", p(&s), "--method", method]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let stdout = String::from_utf8(out.stdout).unwrap();
        let r = rows(&stdout);
        assert_eq!(r.len(), 3);
        for row in r {
            assert_eq!(row[3], "converged");
            assert_eq!(row[4], "1");
        }
    }
}

#[test]
fn check_all_methods_against_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let (m, s, b) = (dir.path().join("a.mtx"), dir.path().join("s.txt"), dir.path().join("b.txt"));
    let (a, rhs) = complex_problem(16, 99);
    write_matrix_market(&a, &m).unwrap();
    write_rhs(&rhs, &b).unwrap();
    fs::write(&s, "0.3 0.001\n0.5 0.001\n-0.2 0.4\n").unwrap();
    let prefix = dir.path().join("run");
    let out = shiftkrylov(&[
        "--matrix", p(&m), "--rhs", p(&b), "--shifts", p(&s), "--method", "all", "--check", "--history",
        "--tol", "1e-11", "--out-prefix", p(&prefix),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("# comparison"));
    for method in ["qmr-sym", "qmr-sym-b", "cocg", "qmr-sym-omega"] {
        let summary = fs::read_to_string(dir.path().join(format!("run.{method}.summary.txt"))).unwrap();
        for row in summary.lines().skip(1) {
            let f: Vec<&str> = row.split_whitespace().collect();
            let true_res: f64 = f[6].parse().unwrap();
            let oracle: f64 = f[7].parse().unwrap();
            assert!(true_res <= 1e-9, "{method}: {row}");
            assert!(oracle <= 1e-8, "{method}: {row}");
        }
        let hist = read_history_csv(dir.path().join(format!("run.{method}.history.csv"))).unwrap();
        assert!(!hist.is_empty());
    }
    let cmp = fs::read_to_string(dir.path().join("run.comparison.txt")).unwrap();
    assert!(cmp.contains("update_ratio"));
}

#[test]
fn initial_breakdown_exits_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let (m, s, b) = (dir.path().join("a.mtx"), dir.path().join("s.txt"), dir.path().join("b.txt"));
    write_matrix_market(&SparseSymMatrix::identity(2).unwrap(), &m).unwrap();
    write_rhs(&[c(1.0, 1.0), c(1.0, -1.0)], &b).unwrap();
    fs::write(&s, "0.5 0\n").unwrap();
    let out = shiftkrylov(&["--matrix", p(&m), "--rhs", p(&b), "--shifts", p(&s)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("breakdown"));
}

#[test]
fn budget_exhaustion_exits_with_5() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.txt");
    fs::write(&s, "range 0.400 0.001 0.001 5\n").unwrap();
    let out = shiftkrylov(&["--generate", "64,3,1", "--negate", "--shifts", p(&s), "--max-iter", "3"]);
    assert_eq!(out.status.code(), Some(5));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(rows(&stdout).iter().all(|r| r[3] == "not-converged"), "{stdout}");
}

#[test]
fn input_errors_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.txt");
    fs::write(&s, "0.5 0\n").unwrap();
    let missing = dir.path().join("nope.mtx");
    let out = shiftkrylov(&["--matrix", p(&missing), "--shifts", p(&s)]);
    assert_eq!(out.status.code(), Some(3));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0.5 zero\n").unwrap();
    let out = shiftkrylov(&["--generate", "8,2,1", "--shifts", p(&bad)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.txt:1:"));
}

#[test]
fn usage_errors_exit_with_2() {
    for args in [
        vec!["--shifts", "s.txt"],
        vec!["--generate", "8,2,1", "--shifts", "s.txt", "--tol", "0"],
        vec!["--generate", "8,2,1", "--shifts", "s.txt", "--method", "gmres"],
    ] {
        assert_eq!(shiftkrylov(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.txt");
    fs::write(&s, "range 0.400 0.001 0.001 40\n").unwrap();
    let run = |tag: &str| {
        let prefix = dir.path().join(tag);
        let out = shiftkrylov(&[
            "--generate", "128,6,3", "--negate", "--shifts", p(&s), "--method", "all", "--history",
            "--out-prefix", p(&prefix),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let mut files = Vec::new();
        for suffix in ["qmr-sym.summary.txt", "qmr-sym-b.history.csv", "cocg.summary.txt", "comparison.txt"] {
            files.push(fs::read(dir.path().join(format!("{tag}.{suffix}"))).unwrap());
        }
        (out.stdout, files)
    };
    assert_eq!(run("a"), run("b"));
}
