mod common;

use std::fs;

use common::*;
use proptest::prelude::*;
use shiftkrylov::generator::{generate_hamiltonian_analog, random_symmetric};
use shiftkrylov::io::{
    read_history_csv, read_matrix_market, read_rhs, read_shift_file, write_history_csv, write_matrix_market,
    write_rhs, write_summary, HistoryRow, IoError, ShiftSpec, HISTORY_HEADER,
};
use shiftkrylov::{solve_all, Method, ShiftSet, SolveOptions};

#[test]
fn matrix_market_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    for (k, a) in [
        random_symmetric(17, 3, 1.0, 0.5),
        random_symmetric(9, 4, 0.0, -2.0),
        generate_hamiltonian_analog(64, 5, 2, false).unwrap(),
        generate_hamiltonian_analog(64, 5, 2, true).unwrap(),
    ]
    .into_iter()
    .enumerate()
    {
        let path = dir.path().join(format!("m{k}.mtx"));
        write_matrix_market(&a, &path).unwrap();
        let back = read_matrix_market(&path).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.is_real(), a.is_real());
    }
}

#[test]
fn matrix_market_general_symmetric_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.mtx");
    fs::write(
        &path,
        "%%MatrixMarket matrix coordinate complex general\n% comment\n2 2 4\n1 1 1.0 0.5\n1 2 2.0 -1.0\n2 1 2.0 -1.0\n2 2 3.0 0.0\n",
    )
    .unwrap();
    let a = read_matrix_market(&path).unwrap();
    assert_eq!(a.get(0, 1), Some(c(2.0, -1.0)));
    assert_eq!(a.get(1, 0), Some(c(2.0, -1.0)));
}

#[test]
fn matrix_market_rejections_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.mtx");
    let cases = [
        ("%%MatrixMarket matrix coordinate complex hermitian\n1 1 1\n1 1 1 0\n", None),
        ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1.0\n2 1 1.5\n", None),
        ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 abc\n", Some(3)),
        ("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1.0\n", None),
    ];
    for (text, line) in cases {
        fs::write(&path, text).unwrap();
        let e = read_matrix_market(&path).unwrap_err();
        if let Some(want) = line {
            assert!(matches!(e, IoError::Parse { line, .. } if line == want), "{e}");
        }
    }
    assert!(matches!(read_matrix_market(dir.path().join("missing.mtx")), Err(IoError::Io { .. })));
}

#[test]
fn rhs_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.txt");
    let (_, b) = complex_problem(23, 6);
    write_rhs(&b, &path).unwrap();
    assert_eq!(read_rhs(&path, 23).unwrap(), b);
    assert!(matches!(read_rhs(&path, 24), Err(IoError::Length { expected: 24, actual: 23 })));
}

#[test]
fn benchmark_range_expands_to_exact_thousandths() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    fs::write(&path, "# sweep\nrange 0.400 0.001 0.001 1001\n").unwrap();
    let spec = read_shift_file(&path).unwrap();
    assert!(matches!(spec, ShiftSpec::Range { m: 1001, .. }));
    let set = spec.expand().unwrap();
    assert_eq!(set.len(), 1001);
    for (l, s) in set.iter().enumerate() {
        assert_eq!(s.re.to_bits(), (0.4 + l as f64 / 1000.0).to_bits(), "ℓ={}", l + 1);
        assert_eq!(s.im, 0.001);
    }
}

#[test]
fn shift_list_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    fs::write(&path, "0.5 0.0\n\n-1e-3 2.5  # trailing\n").unwrap();
    assert_eq!(read_shift_file(&path).unwrap(), ShiftSpec::List(vec![c(0.5, 0.0), c(-1e-3, 2.5)]));
    fs::write(&path, "0.5\n").unwrap();
    assert!(matches!(read_shift_file(&path), Err(IoError::Parse { line: 1, .. })));
}

fn solved_with_history() -> shiftkrylov::Solution {
    let (a, b) = complex_problem(20, 12);
    let shifts = ShiftSet::new(vec![c(0.1, 0.1), c(50.0, 0.0), c(-0.7, 0.3)]).unwrap();
    let opts = SolveOptions { tol: 1e-10, history: true, verify: true, ..Default::default() };
    solve_all(&a, &b, &shifts, Method::QmrSymB, &opts).unwrap()
}

#[test]
fn history_csv_round_trip_and_deflation() {
    let sol = solved_with_history();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    write_history_csv(&sol.report, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some(HISTORY_HEADER));
    let rows = read_history_csv(&path).unwrap();
    let expected: usize = sol.report.shifts.iter().map(|s| s.history.len()).sum();
    assert_eq!(rows.len(), expected);
    for (l, s) in sol.report.shifts.iter().enumerate() {
        let mine: Vec<&HistoryRow> = rows.iter().filter(|r| r.shift_index == l + 1).collect();
        assert_eq!(mine.len(), s.iterations);
        for (k, r) in mine.iter().enumerate() {
            assert_eq!(r.iter, k + 1);
            assert_eq!(r.sigma, s.sigma);
            assert_eq!(r.estimate.to_bits(), s.history[k].to_bits());
        }
    }
    // the far shift deflates first and contributes no rows afterwards
    let far = &sol.report.shifts[1];
    assert!(far.iterations < sol.report.iterations);
    assert!(rows.iter().all(|r| r.shift_index != 2 || r.iter <= far.iterations));
}

#[test]
fn history_needs_recorded_estimates() {
    let (a, b) = complex_problem(8, 1);
    let sol = solve_all(&a, &b, &ShiftSet::single(c(0.0, 0.5)), Method::QmrSym, &SolveOptions::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(write_history_csv(&sol.report, dir.path().join("h.csv")), Err(IoError::NoHistory)));
}

#[test]
fn summary_has_one_row_per_shift() {
    let sol = solved_with_history();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    write_summary(&sol.report, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 3);
    assert!(lines[0].contains("iters") && lines[0].contains("rel_true_res"));
    let width = lines[0].len();
    for (l, row) in lines[1..].iter().enumerate() {
        assert_eq!(row.len(), width);
        let f: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(f[0], (l + 1).to_string());
        assert_eq!(f[3], "converged");
        assert_eq!(f[4], sol.report.shifts[l].iterations.to_string());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_matrices_round_trip(n in 1usize..20, seed in 0u64..1000, imag in prop_oneof![Just(0.0), Just(1.0)]) {
        let a = random_symmetric(n, seed, imag, 1.0);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.mtx");
        write_matrix_market(&a, &path).unwrap();
        prop_assert_eq!(read_matrix_market(&path).unwrap(), a);
    }

    #[test]
    fn arbitrary_values_round_trip_in_rhs(v in prop::collection::vec((any::<f64>(), any::<f64>()), 1..30)) {
        let b: Vec<_> = v.iter().filter(|(x, y)| x.is_finite() && y.is_finite()).map(|&(x, y)| c(x, y)).collect();
        prop_assume!(!b.is_empty());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.txt");
        write_rhs(&b, &path).unwrap();
        prop_assert_eq!(read_rhs(&path, b.len()).unwrap(), b);
    }
}
