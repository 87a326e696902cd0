//! Batch driver behind the `shiftkrylov` binary.
//!
//! Exit codes: 0 all shifts converged, 1 internal error, 2 invalid
//! arguments, 3 input/output error, 4 breakdown, 5 some shift did not
//! converge.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::generator::HamiltonianSpec;
use crate::io::{self, IoError};
use crate::oracle::{DenseOracle, DEFAULT_CAP};
use crate::scalar::C64;
use crate::shifts::ShiftSet;
use crate::solvers::{solve_all, Method, ShiftStatus, Solution, SolveOptions};
use crate::sparse::SparseSymMatrix;
use crate::SolveError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_BREAKDOWN: i32 = 4;
pub const EXIT_NOT_CONVERGED: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerateSpec {
    pub n: usize,
    pub bandwidth: usize,
    pub seed: u64,
}

fn parse_generate(s: &str) -> Result<GenerateSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err("expected n,bandwidth,seed".into());
    }
    let n: usize = parts[0].parse().map_err(|_| format!("invalid n '{}'", parts[0]))?;
    let bandwidth: usize = parts[1].parse().map_err(|_| format!("invalid bandwidth '{}'", parts[1]))?;
    let seed: u64 = parts[2].parse().map_err(|_| format!("invalid seed '{}'", parts[2]))?;
    if n < 2 || bandwidth == 0 || bandwidth >= n {
        return Err(format!("need n >= 2 and 1 <= bandwidth < n, got n={n}, bandwidth={bandwidth}"));
    }
    Ok(GenerateSpec { n, bandwidth, seed })
}

/// One method, or all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodSelection(pub Vec<Method>);

fn parse_methods(s: &str) -> Result<MethodSelection, String> {
    if s == "all" {
        Ok(MethodSelection(Method::ALL.to_vec()))
    } else {
        s.parse::<Method>().map(|m| MethodSelection(vec![m]))
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got '{s}'")),
    }
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("expected a positive integer, got '{s}'")),
    }
}

/// Multi-shift Krylov solver for (A + σ_ℓ I) x = b.
#[derive(Debug, Clone, Parser)]
#[command(name = "shiftkrylov", version)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["matrix", "generate"]))]
pub struct RunConfig {
    /// Matrix Market file (real or complex, symmetric or general).
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Generate a banded real symmetric matrix: n,bandwidth,seed.
    #[arg(long, value_parser = parse_generate)]
    pub generate: Option<GenerateSpec>,
    /// Make the generated matrix complex symmetric.
    #[arg(long, requires = "generate")]
    pub complex: bool,
    /// Right-hand side file, one "re im" pair per line (default e1).
    #[arg(long)]
    pub rhs: Option<PathBuf>,
    /// Shift file: "re im" lines or a single "range a step_re step_im m" line.
    #[arg(long)]
    pub shifts: PathBuf,
    /// cocg, qmr-sym, qmr-sym-b, qmr-sym-omega or all.
    #[arg(long, default_value = "qmr-sym", value_parser = parse_methods)]
    pub method: MethodSelection,
    /// Relative residual tolerance.
    #[arg(long, default_value_t = 1e-12, value_parser = parse_tol)]
    pub tol: f64,
    /// Iteration budget (default 2n).
    #[arg(long, value_parser = parse_positive)]
    pub max_iter: Option<usize>,
    /// Record per-iteration residual estimates.
    #[arg(long)]
    pub history: bool,
    /// Verify against true residuals and a dense direct solve.
    #[arg(long)]
    pub check: bool,
    /// Write summaries, histories and the comparison table to files with this prefix.
    #[arg(long)]
    pub out_prefix: Option<PathBuf>,
    /// Worker threads for the shift loop.
    #[arg(long, default_value_t = 1, value_parser = parse_positive)]
    pub workers: usize,
    /// Solve (σI − A)x = b instead of (A + σI)x = b.
    #[arg(long)]
    pub negate: bool,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

pub struct Problem {
    pub a: SparseSymMatrix,
    pub b: Vec<C64>,
    pub shifts: ShiftSet,
}

pub fn load_problem(cfg: &RunConfig) -> Result<Problem, Failure> {
    let mut a = match (&cfg.matrix, cfg.generate) {
        (Some(path), _) => io::read_matrix_market(path)?,
        (None, Some(g)) => HamiltonianSpec { real: !cfg.complex, ..HamiltonianSpec::new(g.n, g.bandwidth, g.seed) }
            .generate()
            .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?,
        (None, None) => return Err(Failure::new(EXIT_USAGE, "one of --matrix or --generate is required")),
    };
    if cfg.negate {
        a = a.scaled(C64::new(-1.0, 0.0));
    }
    let n = a.dim();
    let b = match &cfg.rhs {
        Some(path) => io::read_rhs(path, n)?,
        None => io::default_rhs(n),
    };
    let shifts = io::read_shift_file(&cfg.shifts)?
        .expand()
        .ok_or_else(|| Failure::new(EXIT_IO, "shift file is empty"))?;
    if cfg.check && n > DEFAULT_CAP {
        return Err(Failure::new(EXIT_USAGE, format!("--check needs n <= {DEFAULT_CAP}, matrix has n = {n}")));
    }
    Ok(Problem { a, b, shifts })
}

fn solve_error(e: SolveError) -> Failure {
    match e {
        SolveError::Lanczos(_) | SolveError::Breakdown(_) => Failure::new(EXIT_BREAKDOWN, e.to_string()),
        SolveError::Matrix(_) | SolveError::Dimension(_) => Failure::new(EXIT_IO, e.to_string()),
        SolveError::BadTolerance(_) | SolveError::BadMaxIter | SolveError::NoShifts => {
            Failure::new(EXIT_USAGE, e.to_string())
        }
        SolveError::ThreadPool(_) => Failure::new(EXIT_INTERNAL, e.to_string()),
    }
}

/// Solves the problem with every selected method.
pub fn solve_problem(cfg: &RunConfig, p: &Problem) -> Result<Vec<Solution>, Failure> {
    let opts = SolveOptions {
        tol: cfg.tol,
        max_iter: cfg.max_iter,
        history: cfg.history,
        verify: cfg.check,
        workers: cfg.workers,
    };
    let oracle = if cfg.check {
        Some(DenseOracle::new(&p.a).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?)
    } else {
        None
    };
    let mut out = Vec::with_capacity(cfg.method.0.len());
    for &m in &cfg.method.0 {
        let mut sol = solve_all(&p.a, &p.b, &p.shifts, m, &opts).map_err(solve_error)?;
        if let Some(oracle) = &oracle {
            for (r, x) in sol.report.shifts.iter_mut().zip(&sol.x) {
                r.oracle_distance = oracle.distance(r.sigma, &p.b, x).ok();
            }
        }
        out.push(sol);
    }
    Ok(out)
}

fn method_header(sol: &Solution) -> String {
    let r = &sol.report;
    let converged = r.shifts.iter().filter(|s| s.status == ShiftStatus::Converged).count();
    format!(
        "# method {}  n {}  shifts {}  converged {}  iterations {}  real_path {}  termination {:?}\n\
         # flops update {}  least_squares {}  residual {}  lanczos {}  matvec_real {}  matvec_complex {}\n",
        r.method,
        r.n,
        r.shifts.len(),
        converged,
        r.iterations,
        r.real_path,
        r.termination,
        r.flops.update,
        r.flops.least_squares,
        r.flops.residual,
        r.flops.lanczos,
        r.flops.matvec_real,
        r.flops.matvec_complex,
    )
}

/// Per-shift iteration counts side by side, followed by per-method totals.
pub fn format_comparison(solutions: &[Solution]) -> String {
    let mut s = String::new();
    write!(s, "{:>6} {:>24} {:>24}", "shift", "sigma_re", "sigma_im").unwrap();
    for sol in solutions {
        write!(s, " {:>13}", sol.report.method.name()).unwrap();
    }
    s.push('\n');
    let m = solutions.first().map_or(0, |sol| sol.report.shifts.len());
    for l in 0..m {
        let sigma = solutions[0].report.shifts[l].sigma;
        write!(s, "{:>6} {:>24.16e} {:>24.16e}", l + 1, sigma.re, sigma.im).unwrap();
        for sol in solutions {
            let r = &sol.report.shifts[l];
            let cell = match r.status {
                ShiftStatus::Converged => r.iterations.to_string(),
                _ => format!("{}*", r.iterations),
            };
            write!(s, " {cell:>13}").unwrap();
        }
        s.push('\n');
    }
    s.push('\n');
    writeln!(s, "{:>13} {:>10} {:>14} {:>16} {:>16} {:>12}", "method", "iterations", "sum_shift_its", "update_flops", "total_flops", "update_ratio")
        .unwrap();
    let base = solutions.first().map_or(0, |sol| sol.report.flops.update);
    for sol in solutions {
        let r = &sol.report;
        let its: usize = r.shifts.iter().map(|x| x.iterations).sum();
        let ratio = if base == 0 { f64::NAN } else { r.flops.update as f64 / base as f64 };
        writeln!(
            s,
            "{:>13} {:>10} {:>14} {:>16} {:>16} {:>12.6}",
            r.method.name(),
            r.iterations,
            its,
            r.flops.update,
            r.flops.total(),
            ratio
        )
        .unwrap();
    }
    s
}

fn exit_code(solutions: &[Solution]) -> i32 {
    if solutions.iter().any(|s| s.report.any_breakdown()) {
        EXIT_BREAKDOWN
    } else if solutions.iter().all(|s| s.report.all_converged()) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

fn prefixed(prefix: &std::path::Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Runs a configuration, writing tables to `out` and timings to `err`.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_inner(cfg, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn run_inner(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let problem = load_problem(cfg)?;
    let solutions = solve_problem(cfg, &problem)?;
    for sol in &solutions {
        let r = &sol.report;
        writeln!(err, "{}: {:.3} s wall, {} iterations", r.method, r.wall_time.as_secs_f64(), r.iterations)?;
        let summary = io::format_summary(r);
        write!(out, "{}{}", method_header(sol), summary)?;
        writeln!(out)?;
        if let Some(prefix) = &cfg.out_prefix {
            io::write_summary(r, prefixed(prefix, &format!(".{}.summary.txt", r.method)))?;
            if cfg.history {
                io::write_history_csv(r, prefixed(prefix, &format!(".{}.history.csv", r.method)))?;
            }
        }
    }
    if solutions.len() > 1 {
        let table = format_comparison(&solutions);
        write!(out, "# comparison\n{table}")?;
        if let Some(prefix) = &cfg.out_prefix {
            std::fs::write(prefixed(prefix, ".comparison.txt"), &table)?;
        }
    }
    Ok(exit_code(&solutions))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generate_spec_parsing() {
        assert_eq!(parse_generate("512,34,7"), Ok(GenerateSpec { n: 512, bandwidth: 34, seed: 7 }));
        assert!(parse_generate("4,4,1").is_err());
        assert!(parse_generate("4,1").is_err());
    }

    #[test]
    fn flags_validated_eagerly() {
        let base = ["shiftkrylov", "--generate", "8,2,1", "--shifts", "s.txt"];
        assert!(RunConfig::try_parse_from(base).is_ok());
        for extra in [["--tol", "0"], ["--tol", "-1"], ["--method", "gmres"], ["--workers", "0"], ["--max-iter", "0"]] {
            let args: Vec<&str> = base.iter().copied().chain(extra).collect();
            assert!(RunConfig::try_parse_from(args).is_err(), "{extra:?}");
        }
        assert!(RunConfig::try_parse_from(["shiftkrylov", "--shifts", "s.txt"]).is_err());
        let all = RunConfig::try_parse_from(base.iter().copied().chain(["--method", "all"])).unwrap();
        assert_eq!(all.method.0.len(), 4);
    }
}
