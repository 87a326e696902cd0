//! Matrix Market matrices, shift lists, right-hand sides, history and
//! summary tables.
//!
//! Readers reject malformed input with a line number. Writers are
//! byte-deterministic: floats are printed either in shortest round-trip form
//! (matrices) or with 17 significant digits (tables).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::error::MatrixError;
use crate::scalar::C64;
use crate::shifts::ShiftSet;
use crate::solvers::SolveReport;
use crate::sparse::{SparseSymMatrix, Values};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{path}: {source}")]
    Matrix {
        path: PathBuf,
        #[source]
        source: MatrixError,
    },
    #[error("right-hand side has length {actual}, expected {expected}")]
    Length { expected: usize, actual: usize },
    #[error("report has no residual histories (run with history enabled)")]
    NoHistory,
}

fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io { path: path.to_owned(), source })
}

fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io { path: path.to_owned(), source })
}

struct Ctx<'p> {
    path: &'p Path,
}

impl Ctx<'_> {
    fn err(&self, line: usize, msg: impl Into<String>) -> IoError {
        IoError::Parse { path: self.path.to_owned(), line, msg: msg.into() }
    }

    fn float(&self, line: usize, tok: &str) -> Result<f64, IoError> {
        let v: f64 = tok.parse().map_err(|_| self.err(line, format!("invalid number '{tok}'")))?;
        if !v.is_finite() {
            return Err(self.err(line, format!("non-finite value '{tok}'")));
        }
        Ok(v)
    }

    fn index(&self, line: usize, tok: &str, n: usize) -> Result<usize, IoError> {
        let i: usize = tok.parse().map_err(|_| self.err(line, format!("invalid index '{tok}'")))?;
        if i == 0 || i > n {
            return Err(self.err(line, format!("index {i} out of range 1..={n}")));
        }
        Ok(i - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

fn parse_header(ctx: &Ctx, line: &str) -> Result<(Field, Symmetry), IoError> {
    let toks: Vec<String> = line.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if toks.len() != 5 || toks[0] != "%%matrixmarket" || toks[1] != "matrix" {
        return Err(ctx.err(1, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'"));
    }
    if toks[2] != "coordinate" {
        return Err(ctx.err(1, format!("unsupported format '{}' (only coordinate)", toks[2])));
    }
    let field = match toks[3].as_str() {
        "real" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(ctx.err(1, format!("unsupported field '{other}' (only real or complex)"))),
    };
    let sym = match toks[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => {
            return Err(ctx.err(1, "hermitian matrices are not supported (A^T = A is required)"))
        }
        other => return Err(ctx.err(1, format!("unsupported symmetry '{other}'"))),
    };
    Ok((field, sym))
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseSymMatrix, IoError> {
    let path = path.as_ref();
    parse_matrix_market(&read_text(path)?, path)
}

/// Parses Matrix Market text; `path` is used only in error messages.
pub fn parse_matrix_market(text: &str, path: &Path) -> Result<SparseSymMatrix, IoError> {
    let ctx = Ctx { path };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| ctx.err(1, "empty file"))?;
    let (field, sym) = parse_header(&ctx, header)?;

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body.next().ok_or_else(|| ctx.err(1, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(ctx.err(size_line, "size line must be 'rows cols entries'"));
    }
    let parse_count = |t: &str| t.parse::<usize>().map_err(|_| ctx.err(size_line, format!("invalid count '{t}'")));
    let (rows, cols, count) = (parse_count(dims[0])?, parse_count(dims[1])?, parse_count(dims[2])?);
    if rows != cols {
        return Err(ctx.err(size_line, format!("matrix must be square, got {rows}x{cols}")));
    }
    if rows == 0 {
        return Err(ctx.err(size_line, "matrix dimension must be at least 1"));
    }
    let n = rows;
    let want = if field == Field::Real { 3 } else { 4 };

    let mut seen: HashMap<(usize, usize), (C64, usize)> = HashMap::with_capacity(count);
    let mut order = Vec::with_capacity(count);
    let mut last_line = size_line;
    for (lineno, l) in body {
        last_line = lineno;
        if order.len() == count {
            return Err(ctx.err(lineno, format!("more than the declared {count} entries")));
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != want {
            return Err(ctx.err(lineno, format!("expected {want} fields, found {}", toks.len())));
        }
        let i = ctx.index(lineno, toks[0], n)?;
        let j = ctx.index(lineno, toks[1], n)?;
        let re = ctx.float(lineno, toks[2])?;
        let im = if field == Field::Complex { ctx.float(lineno, toks[3])? } else { 0.0 };
        let key = match sym {
            Symmetry::Symmetric => (i.max(j), i.min(j)),
            Symmetry::General => (i, j),
        };
        if let Some((_, first)) = seen.insert(key, (C64::new(re, im), lineno)) {
            return Err(ctx.err(lineno, format!("duplicate entry ({}, {}) (first on line {first})", i + 1, j + 1)));
        }
        order.push(key);
    }
    if order.len() != count {
        return Err(ctx.err(last_line, format!("declared {count} entries, found {}", order.len())));
    }

    let mut entries = Vec::with_capacity(2 * count);
    for &(i, j) in &order {
        let (v, lineno) = seen[&(i, j)];
        match sym {
            Symmetry::Symmetric => {
                entries.push((i, j, v));
                if i != j {
                    entries.push((j, i, v));
                }
            }
            Symmetry::General => {
                if i != j {
                    match seen.get(&(j, i)) {
                        Some(&(w, _)) if w == v => {}
                        Some(_) => {
                            return Err(ctx.err(lineno, format!("entry ({}, {}) differs from its transpose", i + 1, j + 1)))
                        }
                        None => {
                            return Err(ctx.err(lineno, format!("entry ({}, {}) has no transpose partner", i + 1, j + 1)))
                        }
                    }
                }
                entries.push((i, j, v));
            }
        }
    }
    SparseSymMatrix::from_triplets(n, entries)
        .map_err(|source| IoError::Matrix { path: path.to_owned(), source })
}

/// Writes the lower triangle with `symmetric` symmetry.
pub fn write_matrix_market(a: &SparseSymMatrix, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &format_matrix_market(a))
}

pub fn format_matrix_market(a: &SparseSymMatrix) -> String {
    let real = matches!(a.values(), Values::Real(_));
    let lower: Vec<(usize, usize, C64)> = a.iter().filter(|&(i, j, _)| i >= j).collect();
    let mut s = String::new();
    let field = if real { "real" } else { "complex" };
    writeln!(s, "%%MatrixMarket matrix coordinate {field} symmetric").unwrap();
    writeln!(s, "{} {} {}", a.dim(), a.dim(), lower.len()).unwrap();
    for (i, j, v) in lower {
        if real {
            writeln!(s, "{} {} {:e}", i + 1, j + 1, v.re).unwrap();
        } else {
            writeln!(s, "{} {} {:e} {:e}", i + 1, j + 1, v.re, v.im).unwrap();
        }
    }
    s
}

/// Contents of a shift file.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftSpec {
    List(Vec<C64>),
    /// `σ_ℓ = a + (ℓ−1)·step_re + i·step_im`, `ℓ = 1..m`.
    Range { a: f64, step_re: String, step_im: f64, m: usize },
}

impl ShiftSpec {
    pub fn expand(&self) -> Option<ShiftSet> {
        match self {
            ShiftSpec::List(v) => ShiftSet::new(v.clone()),
            ShiftSpec::Range { a, step_re, step_im, m } => {
                ShiftSet::new((1..=*m).map(|l| C64::new(range_real(*a, step_re, l), *step_im)).collect())
            }
        }
    }
}

/// `a + (ℓ−1)·step`, with a decimal `step = num/10^k` evaluated as
/// `a + ((ℓ−1)·num)/10^k` so that e.g. step `0.001` gives exactly
/// `a + (ℓ−1)/1000`.
fn range_real(a: f64, step: &str, l: usize) -> f64 {
    let k = (l - 1) as i128;
    if let Some((num, den)) = decimal_fraction(step) {
        if let Some(p) = k.checked_mul(num) {
            if p.unsigned_abs() <= 1 << 53 {
                return a + p as f64 / den as f64;
            }
        }
    }
    a + (l - 1) as f64 * step.parse::<f64>().unwrap_or(f64::NAN)
}

/// `s = num/den` with `den` a power of ten, both exact in `f64`.
fn decimal_fraction(s: &str) -> Option<(i128, u64)> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let mut num: i128 = digits.parse().ok()?;
    let mut scale = frac.len() as i32 - exp;
    while scale < 0 {
        num = num.checked_mul(10)?;
        scale += 1;
    }
    if scale > 15 || num.unsigned_abs() > 1 << 53 {
        return None;
    }
    let den = 10u64.pow(scale as u32);
    Some((if neg { -num } else { num }, den))
}

pub fn read_shift_file(path: impl AsRef<Path>) -> Result<ShiftSpec, IoError> {
    let path = path.as_ref();
    parse_shifts(&read_text(path)?, path)
}

/// Lines `re im`, or one line `range a step_re step_im m`. `#` starts a comment.
pub fn parse_shifts(text: &str, path: &Path) -> Result<ShiftSpec, IoError> {
    let ctx = Ctx { path };
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let Some(&(first_line, first)) = lines.first() else {
        return Err(ctx.err(1, "no shifts"));
    };
    if first.starts_with("range") {
        if lines.len() != 1 {
            return Err(ctx.err(lines[1].0, "a range line must be the only entry"));
        }
        let toks: Vec<&str> = first.split_whitespace().collect();
        if toks.len() != 5 || toks[0] != "range" {
            return Err(ctx.err(first_line, "expected 'range a step_re step_im m'"));
        }
        let a = ctx.float(first_line, toks[1])?;
        ctx.float(first_line, toks[2])?;
        let step_im = ctx.float(first_line, toks[3])?;
        let m: usize = toks[4]
            .parse()
            .map_err(|_| ctx.err(first_line, format!("invalid count '{}'", toks[4])))?;
        if m == 0 {
            return Err(ctx.err(first_line, "shift count must be at least 1"));
        }
        return Ok(ShiftSpec::Range { a, step_re: toks[2].to_owned(), step_im, m });
    }
    let mut out = Vec::with_capacity(lines.len());
    for (lineno, l) in lines {
        out.push(parse_pair(&ctx, lineno, l)?);
    }
    Ok(ShiftSpec::List(out))
}

fn parse_pair(ctx: &Ctx, lineno: usize, l: &str) -> Result<C64, IoError> {
    let toks: Vec<&str> = l.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(ctx.err(lineno, format!("expected 're im', found {} fields", toks.len())));
    }
    Ok(C64::new(ctx.float(lineno, toks[0])?, ctx.float(lineno, toks[1])?))
}

/// `e₁ = (1, 0, …, 0)ᵀ`.
pub fn default_rhs(n: usize) -> Vec<C64> {
    let mut b = vec![C64::new(0.0, 0.0); n];
    if n > 0 {
        b[0] = C64::new(1.0, 0.0);
    }
    b
}

/// One `re im` pair per line; blank lines and `#` comments are skipped.
pub fn read_rhs(path: impl AsRef<Path>, n: usize) -> Result<Vec<C64>, IoError> {
    let path = path.as_ref();
    let ctx = Ctx { path };
    let text = read_text(path)?;
    let mut b = Vec::with_capacity(n);
    for (i, l) in text.lines().enumerate() {
        let l = l.split('#').next().unwrap_or("").trim();
        if !l.is_empty() {
            b.push(parse_pair(&ctx, i + 1, l)?);
        }
    }
    if b.len() != n {
        return Err(IoError::Length { expected: n, actual: b.len() });
    }
    Ok(b)
}

pub fn write_rhs(b: &[C64], path: impl AsRef<Path>) -> Result<(), IoError> {
    let mut s = String::new();
    for z in b {
        writeln!(s, "{:e} {:e}", z.re, z.im).unwrap();
    }
    write_text(path.as_ref(), &s)
}

pub const HISTORY_HEADER: &str = "iter,shift_index,sigma_re,sigma_im,rel_residual_estimate";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryRow {
    pub iter: usize,
    /// 1-based shift index `ℓ`.
    pub shift_index: usize,
    pub sigma: C64,
    pub estimate: f64,
}

/// Rows in iteration-major, shift-minor order; a shift contributes rows up
/// to and including its last applied step.
pub fn history_rows(report: &SolveReport) -> Vec<HistoryRow> {
    let longest = report.shifts.iter().map(|s| s.history.len()).max().unwrap_or(0);
    let mut rows = Vec::new();
    for it in 0..longest {
        for (l, s) in report.shifts.iter().enumerate() {
            if let Some(&estimate) = s.history.get(it) {
                rows.push(HistoryRow { iter: it + 1, shift_index: l + 1, sigma: s.sigma, estimate });
            }
        }
    }
    rows
}

pub fn format_history_csv(report: &SolveReport) -> Result<String, IoError> {
    if !report.has_history() {
        return Err(IoError::NoHistory);
    }
    let mut s = String::from(HISTORY_HEADER);
    s.push('\n');
    for r in history_rows(report) {
        writeln!(s, "{},{},{:.16e},{:.16e},{:.16e}", r.iter, r.shift_index, r.sigma.re, r.sigma.im, r.estimate)
            .unwrap();
    }
    Ok(s)
}

pub fn write_history_csv(report: &SolveReport, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &format_history_csv(report)?)
}

pub fn read_history_csv(path: impl AsRef<Path>) -> Result<Vec<HistoryRow>, IoError> {
    let path = path.as_ref();
    let ctx = Ctx { path };
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h == HISTORY_HEADER => {}
        _ => return Err(ctx.err(1, format!("expected header '{HISTORY_HEADER}'"))),
    }
    let mut rows = Vec::new();
    for (lineno, l) in lines {
        let f: Vec<&str> = l.split(',').collect();
        if f.len() != 5 {
            return Err(ctx.err(lineno, format!("expected 5 fields, found {}", f.len())));
        }
        let int = |t: &str| t.parse::<usize>().map_err(|_| ctx.err(lineno, format!("invalid integer '{t}'")));
        rows.push(HistoryRow {
            iter: int(f[0])?,
            shift_index: int(f[1])?,
            sigma: C64::new(ctx.float(lineno, f[2])?, ctx.float(lineno, f[3])?),
            estimate: ctx.float(lineno, f[4])?,
        });
    }
    Ok(rows)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_owned(), |x| format!("{x:.6e}"))
}

/// Fixed-column per-shift table: one header line, one row per shift.
pub fn format_summary(report: &SolveReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "{:>6} {:>24} {:>24} {:>13} {:>6} {:>13} {:>13} {:>13}",
        "shift", "sigma_re", "sigma_im", "status", "iters", "rel_estimate", "rel_true_res", "oracle_dist"
    )
    .unwrap();
    for (l, r) in report.shifts.iter().enumerate() {
        writeln!(
            s,
            "{:>6} {:>24.16e} {:>24.16e} {:>13} {:>6} {:>13.6e} {:>13} {:>13}",
            l + 1,
            r.sigma.re,
            r.sigma.im,
            r.status.label(),
            r.iterations,
            r.estimate,
            opt(r.true_residual),
            opt(r.oracle_distance)
        )
        .unwrap();
    }
    s
}

pub fn write_summary(report: &SolveReport, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &format_summary(report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("test.mtx")
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn symmetric_file_is_mirrored() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 2\n1 1 1.0\n2 1 2.0\n";
        let a = parse_matrix_market(text, p()).unwrap();
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.get(0, 0), Some(c(1.0, 0.0)));
        assert_eq!(a.get(1, 0), Some(c(2.0, 0.0)));
        assert_eq!(a.get(0, 1), Some(c(2.0, 0.0)));
        assert_eq!(a.get(1, 1), None);
    }

    #[test]
    fn rejects_hermitian_pattern_integer() {
        for kind in ["complex hermitian", "pattern symmetric", "integer general", "real skew-symmetric"] {
            let text = format!("%%MatrixMarket matrix coordinate {kind}\n1 1 1\n1 1 1\n");
            match parse_matrix_market(&text, p()) {
                Err(IoError::Parse { line: 1, .. }) => {}
                other => panic!("{kind}: {other:?}"),
            }
        }
    }

    #[test]
    fn general_must_be_symmetric() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1.0\n2 1 1.5\n";
        match parse_matrix_market(text, p()) {
            Err(IoError::Parse { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1.0\n2 1 1.0\n";
        assert_eq!(parse_matrix_market(text, p()).unwrap().nnz(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1.0\n", 3),
            ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 x\n", 3),
            ("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n\n1 1 2\n", 5),
            ("%%MatrixMarket matrix coordinate complex symmetric\n2 2 1\n1 1 1\n", 3),
            ("%%MatrixMarket matrix coordinate real symmetric\n2 3 1\n1 1 1\n", 2),
            ("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n", 3),
            ("%%MatrixMarket matrix array real symmetric\n2 2\n", 1),
        ];
        for (text, line) in cases {
            match parse_matrix_market(text, p()) {
                Err(IoError::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn complex_round_trip_is_bit_exact() {
        let a = SparseSymMatrix::from_mirrored_triplets(
            3,
            [(0, 0, c(0.1, 1.0 / 3.0)), (1, 0, c(-2.5e-300, 7.0)), (2, 2, c(std::f64::consts::PI, -1e300))],
        )
        .unwrap();
        let b = parse_matrix_market(&format_matrix_market(&a), p()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn benchmark_range_is_exact() {
        let spec = parse_shifts("range 0.400 0.001 0.001 1001\n", p()).unwrap();
        let s = spec.expand().unwrap();
        assert_eq!(s.len(), 1001);
        for l in 1..=1001usize {
            let want = C64::new(0.400 + (l - 1) as f64 / 1000.0, 1.0 / 1000.0);
            assert_eq!(s[l - 1], want, "l = {l}");
        }
    }

    #[test]
    fn decimal_fractions() {
        assert_eq!(decimal_fraction("0.001"), Some((1, 1000)));
        assert_eq!(decimal_fraction("-2.50"), Some((-250, 100)));
        assert_eq!(decimal_fraction("1e-3"), Some((1, 1000)));
        assert_eq!(decimal_fraction("2e2"), Some((200, 1)));
        assert_eq!(decimal_fraction("abc"), None);
    }

    #[test]
    fn shift_list_and_errors() {
        let spec = parse_shifts("# shifts\n0.5 0.1\n1 -2  # trailing\n", p()).unwrap();
        assert_eq!(spec, ShiftSpec::List(vec![c(0.5, 0.1), c(1.0, -2.0)]));
        assert!(matches!(parse_shifts("0.5\n", p()), Err(IoError::Parse { line: 1, .. })));
        assert!(matches!(parse_shifts("range 0 1 0 0\n", p()), Err(IoError::Parse { line: 1, .. })));
        assert!(matches!(parse_shifts("", p()), Err(IoError::Parse { .. })));
    }

    #[test]
    fn rhs_default_and_length() {
        assert_eq!(default_rhs(3), vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.txt");
        fs::write(&path, "1 0\n0 1\n").unwrap();
        assert_eq!(read_rhs(&path, 2).unwrap(), vec![c(1.0, 0.0), c(0.0, 1.0)]);
        match read_rhs(&path, 3) {
            Err(IoError::Length { expected: 3, actual: 2 }) => {}
            other => panic!("{other:?}"),
        }
    }
}
