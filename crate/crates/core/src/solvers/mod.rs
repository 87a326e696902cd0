//! Multi-shift solvers driven by one shared Lanczos stream.
//!
//! Every iteration runs a single Lanczos step and then applies the selected
//! per-shift update to each shift that is still active. A shift whose
//! relative residual estimate drops to `tol` is frozen (deflated) and never
//! touched again. Each shift's arithmetic is self-contained, so the result
//! does not depend on how the shift loop is scheduled across workers.
//!
//! | method          | per-shift update                    | estimate                      |
//! |-----------------|-------------------------------------|-------------------------------|
//! | `qmr-sym`       | Givens rotations, three-term `p`    | `\|g_{n+1}\|·‖w_{n+1}‖₂`        |
//! | `qmr-sym-omega` | as above on `Ω_{n+1}T`, `ω_i=‖v_i‖₂` | `\|g_{n+1}\|·‖w_{n+1}‖₂`        |
//! | `qmr-sym-b`     | bidiagonal elimination, two-term `p`| `\|g̃_{n+1}\|·‖v_{n+1}‖₂`        |
//! | `cocg`          | same iterates as `qmr-sym-b`        | `\|β_n e_nᵀy_n\|·‖v_{n+1}‖₂`    |

mod bidiag;
mod givens;
mod report;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

pub use bidiag::QmrSymBState;
pub use givens::{QmrSymState, Rotation};
pub use report::{IterationRecord, ShiftReport, ShiftStatus, SolveReport, Termination};

use crate::error::{DimensionMismatch, SolveError};
use crate::flops::FlopCounter;
use crate::lanczos::{Lanczos, LanczosStep};
use crate::scalar::{is_real_vector, norm2, Scalar, C64};
use crate::shifts::ShiftSet;
use crate::sparse::SparseSymMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Cocg,
    QmrSym,
    QmrSymB,
    QmrSymOmega,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::QmrSym, Method::QmrSymB, Method::Cocg, Method::QmrSymOmega];

    pub fn name(self) -> &'static str {
        match self {
            Method::Cocg => "cocg",
            Method::QmrSym => "qmr-sym",
            Method::QmrSymB => "qmr-sym-b",
            Method::QmrSymOmega => "qmr-sym-omega",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method '{s}' (expected cocg, qmr-sym, qmr-sym-b or qmr-sym-omega)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Relative residual tolerance `ε`.
    pub tol: f64,
    /// Lanczos step budget; `None` means `2n`.
    pub max_iter: Option<usize>,
    /// Keep per-shift estimate histories.
    pub history: bool,
    /// Compute explicit true residuals after the solve.
    pub verify: bool,
    /// Threads for the shift loop; `0` or `1` runs it inline.
    pub workers: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: None, history: false, verify: false, workers: 1 }
    }
}

#[derive(Debug, Clone)]
enum Engine {
    Givens(QmrSymState),
    Bidiag(QmrSymBState),
}

/// One shifted system riding on the shared basis.
#[derive(Debug, Clone)]
pub struct ShiftSystemState {
    sigma: C64,
    engine: Engine,
    status: ShiftStatus,
    iterations: usize,
    estimate: f64,
    history: Vec<f64>,
    flops: FlopCounter,
}

impl ShiftSystemState {
    pub fn new<S: Scalar>(method: Method, sigma: C64, v1: &[S], g1: S, norm_v1: f64) -> Self {
        let engine = match method {
            Method::QmrSym => Engine::Givens(QmrSymState::new(v1, g1)),
            Method::QmrSymOmega => Engine::Givens(QmrSymState::new_omega(v1, g1, norm_v1)),
            Method::QmrSymB => Engine::Bidiag(QmrSymBState::new(v1.len(), g1)),
            Method::Cocg => Engine::Bidiag(QmrSymBState::new_galerkin(v1.len(), g1)),
        };
        Self {
            sigma,
            engine,
            status: ShiftStatus::Active,
            iterations: 0,
            estimate: 1.0,
            history: Vec::new(),
            flops: FlopCounter::default(),
        }
    }

    pub fn sigma(&self) -> C64 {
        self.sigma
    }

    pub fn status(&self) -> ShiftStatus {
        self.status
    }

    pub fn is_active(&self) -> bool {
        self.status == ShiftStatus::Active
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Relative residual estimate after the last applied step.
    pub fn estimate(&self) -> f64 {
        self.estimate
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn flops(&self) -> FlopCounter {
        self.flops
    }

    pub fn x(&self) -> &[C64] {
        match &self.engine {
            Engine::Givens(s) => s.x(),
            Engine::Bidiag(s) => s.x(),
        }
    }

    pub fn qmr_sym(&self) -> Option<&QmrSymState> {
        match &self.engine {
            Engine::Givens(s) => Some(s),
            Engine::Bidiag(_) => None,
        }
    }

    pub fn qmr_sym_b(&self) -> Option<&QmrSymBState> {
        match &self.engine {
            Engine::Bidiag(s) => Some(s),
            Engine::Givens(_) => None,
        }
    }

    fn into_x(self) -> Vec<C64> {
        match self.engine {
            Engine::Givens(s) => s.into_x(),
            Engine::Bidiag(s) => s.into_x(),
        }
    }

    fn advance<S: Scalar>(
        &mut self,
        step: &LanczosStep<'_, S>,
        bnorm: f64,
        tol: f64,
        keep_history: bool,
    ) -> FlopCounter {
        let mut f = FlopCounter::default();
        let (res, est) = match &mut self.engine {
            Engine::Givens(s) => (s.update(self.sigma, step, &mut f), s.estimate_residual()),
            Engine::Bidiag(s) => (s.update(self.sigma, step, &mut f), s.estimate_residual()),
        };
        self.flops += f;
        if let Err(kind) = res {
            self.status = ShiftStatus::Breakdown(kind);
            return f;
        }
        self.iterations = step.n;
        self.estimate = est / bnorm;
        if keep_history {
            self.history.push(self.estimate);
        }
        if self.estimate <= tol {
            self.status = ShiftStatus::Converged;
        }
        f
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Continue,
    Finished(Termination),
}

/// Solutions in shift order plus the report.
#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<Vec<C64>>,
    pub report: SolveReport,
}

pub struct MultiShiftSolver<'a, S: Scalar> {
    method: Method,
    a: &'a SparseSymMatrix,
    b: Vec<C64>,
    lanczos: Lanczos<'a, S>,
    states: Vec<ShiftSystemState>,
    tol: f64,
    max_iter: usize,
    history: bool,
    verify: bool,
    pool: Option<rayon::ThreadPool>,
    per_iteration: Vec<IterationRecord>,
    termination: Option<Termination>,
    started: Instant,
}

impl<'a, S: Scalar> MultiShiftSolver<'a, S> {
    pub fn new(
        a: &'a SparseSymMatrix,
        b: &[S],
        shifts: &ShiftSet,
        method: Method,
        opts: &SolveOptions,
    ) -> Result<Self, SolveError> {
        if opts.tol.is_nan() || opts.tol <= 0.0 {
            return Err(SolveError::BadTolerance(opts.tol));
        }
        let max_iter = opts.max_iter.unwrap_or(2 * a.dim());
        if max_iter == 0 {
            return Err(SolveError::BadMaxIter);
        }
        let started = Instant::now();
        let lanczos = Lanczos::new(a, b)?;
        let (v1, g1) = (lanczos.v_curr(), lanczos.g1());
        let norm_v1 = if S::IS_REAL { 1.0 } else { norm2(v1) };
        let states = shifts
            .iter()
            .map(|&sigma| ShiftSystemState::new(method, sigma, v1, g1, norm_v1))
            .collect();
        let pool = if opts.workers > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.workers)
                .build()
                .map_err(|e| SolveError::ThreadPool(e.to_string()))?;
            Some(pool)
        } else {
            None
        };
        Ok(Self {
            method,
            a,
            b: b.iter().map(|z| z.to_complex()).collect(),
            lanczos,
            states,
            tol: opts.tol,
            max_iter,
            history: opts.history,
            verify: opts.verify,
            pool,
            per_iteration: Vec::new(),
            termination: None,
            started,
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Lanczos steps taken so far.
    pub fn iterations(&self) -> usize {
        self.per_iteration.len()
    }

    pub fn states(&self) -> &[ShiftSystemState] {
        &self.states
    }

    pub fn x(&self, shift: usize) -> &[C64] {
        self.states[shift].x()
    }

    pub fn lanczos(&self) -> &Lanczos<'a, S> {
        &self.lanczos
    }

    pub fn per_iteration(&self) -> &[IterationRecord] {
        &self.per_iteration
    }

    pub fn termination(&self) -> Option<&Termination> {
        self.termination.as_ref()
    }

    /// One Lanczos step followed by the update of every active shift.
    pub fn step(&mut self) -> StepOutcome {
        if let Some(t) = &self.termination {
            return StepOutcome::Finished(t.clone());
        }
        let bnorm = self.lanczos.bnorm();
        let (tol, keep) = (self.tol, self.history);
        let step = match self.lanczos.step() {
            Ok(step) => step,
            Err(e) => {
                for s in self.states.iter_mut().filter(|s| s.is_active()) {
                    s.status = ShiftStatus::Breakdown(crate::error::BreakdownKind::Lanczos);
                }
                return self.finish_with(Termination::Breakdown(e));
            }
        };
        let active = self.states.iter().filter(|s| s.is_active()).count();
        let states = &mut self.states;
        let flops: FlopCounter = match &self.pool {
            Some(pool) => pool.install(|| {
                states
                    .par_iter_mut()
                    .filter(|s| s.is_active())
                    .map(|s| s.advance(&step, bnorm, tol, keep))
                    .sum()
            }),
            None => states
                .iter_mut()
                .filter(|s| s.is_active())
                .map(|s| s.advance(&step, bnorm, tol, keep))
                .sum(),
        };
        let (n, terminated) = (step.n, step.terminated);
        self.per_iteration.push(IterationRecord { active, flops });

        let remaining = self.states.iter().filter(|s| s.is_active()).count();
        if remaining == 0 {
            let stopped = self.states.iter().any(|s| s.status != ShiftStatus::Converged);
            let t = if terminated {
                Termination::Lucky
            } else if stopped {
                Termination::ShiftsStopped
            } else {
                Termination::AllConverged
            };
            return self.finish_with(t);
        }
        if terminated || n >= self.max_iter {
            for s in self.states.iter_mut().filter(|s| s.is_active()) {
                s.status = ShiftStatus::NotConverged;
            }
            let t = if terminated { Termination::Lucky } else { Termination::MaxIter };
            return self.finish_with(t);
        }
        StepOutcome::Continue
    }

    fn finish_with(&mut self, t: Termination) -> StepOutcome {
        self.termination = Some(t.clone());
        StepOutcome::Finished(t)
    }

    pub fn run(&mut self) -> Termination {
        loop {
            if let StepOutcome::Finished(t) = self.step() {
                return t;
            }
        }
    }

    /// Runs to completion and assembles solutions and report.
    pub fn finish(mut self) -> Solution {
        let termination = self.run();
        let bnorm = self.lanczos.bnorm();
        let mut flops = self.lanczos.flops();
        for s in &self.states {
            flops += s.flops;
        }
        let mut shifts = Vec::with_capacity(self.states.len());
        let mut xs = Vec::with_capacity(self.states.len());
        for s in self.states {
            let true_res = self.verify.then(|| {
                let r = true_residual(self.a, s.sigma, &self.b, s.x()).expect("dimensions fixed at construction");
                r / bnorm
            });
            shifts.push(ShiftReport {
                sigma: s.sigma,
                status: s.status,
                iterations: s.iterations,
                estimate: s.estimate,
                true_residual: true_res,
                oracle_distance: None,
                history: s.history.clone(),
            });
            xs.push(s.into_x());
        }
        let report = SolveReport {
            method: self.method,
            n: self.a.dim(),
            bnorm,
            tol: self.tol,
            shifts,
            iterations: self.per_iteration.len(),
            wall_time: self.started.elapsed(),
            flops,
            per_iteration: self.per_iteration,
            real_path: S::IS_REAL,
            termination,
        };
        Solution { x: xs, report }
    }
}

/// Solves `(A + σ_ℓI)x = b` for every shift with one Lanczos stream.
///
/// A real matrix with a real right-hand side takes the real path: the basis
/// is built in `f64` and only the shifted updates are complex.
pub fn solve_all(
    a: &SparseSymMatrix,
    b: &[C64],
    shifts: &ShiftSet,
    method: Method,
    opts: &SolveOptions,
) -> Result<Solution, SolveError> {
    DimensionMismatch::check(a.dim(), b.len())?;
    if a.is_real() && is_real_vector(b) {
        let br: Vec<f64> = b.iter().map(|z| z.re).collect();
        Ok(MultiShiftSolver::new(a, &br, shifts, method, opts)?.finish())
    } else {
        Ok(MultiShiftSolver::new(a, b, shifts, method, opts)?.finish())
    }
}

/// `‖b − (A + σI)x‖₂`.
pub fn true_residual(
    a: &SparseSymMatrix,
    sigma: C64,
    b: &[C64],
    x: &[C64],
) -> Result<f64, DimensionMismatch> {
    DimensionMismatch::check(a.dim(), b.len())?;
    DimensionMismatch::check(a.dim(), x.len())?;
    let mut ax = vec![C64::new(0.0, 0.0); x.len()];
    a.spmv_into(x, &mut ax, &mut FlopCounter::default())
        .expect("complex vectors are accepted by every matrix");
    let r: Vec<C64> = (0..x.len()).map(|i| b[i] - ax[i] - sigma * x[i]).collect();
    Ok(norm2(&r))
}
