//! Complex symmetric Lanczos process.
//!
//! Starting from `v₁ = b/(bᵀb)^{1/2}`, each step computes
//!
//! ```text
//! α_n     = v_nᵀ A v_n
//! ṽ_{n+1} = A v_n − α_n v_n − β_{n−1} v_{n−1}
//! β_n     = (ṽ_{n+1}ᵀ ṽ_{n+1})^{1/2}
//! v_{n+1} = ṽ_{n+1} / β_n
//! ```
//!
//! with unconjugated products, so the basis is normalized in the bilinear
//! sense (`v_nᵀv_n = 1`), not in the 2-norm. Only the last three basis vectors
//! are retained unless a [`LanczosRecord`] is requested.
//!
//! The basis does not depend on any shift: running on `A + σI` reproduces
//! the same `v_k` and `β_k` and shifts every `α_k` by `σ`. This is what lets
//! one stream serve every shifted system.
//!
//! No look-ahead and no reorthogonalization is done. A vanishing `ṽ` is a
//! lucky termination (the Krylov space is invariant); a vanishing `ṽᵀṽ` with
//! nonzero `ṽ` is a serious breakdown and aborts the process.

use crate::error::{DimensionMismatch, LanczosError};
use crate::flops::FlopCounter;
use crate::scalar::{bilinear_dot_unchecked, norm2, Scalar};
use crate::sparse::SparseSymMatrix;

/// Relative threshold on `|ṽᵀṽ| / ‖ṽ‖₂²` below which the process breaks down.
pub const BREAKDOWN_TOL: f64 = 1e-14;
/// Relative threshold on `‖ṽ‖₂` below which the process terminates luckily.
pub const TERMINATION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosTolerances {
    pub breakdown: f64,
    pub termination: f64,
}

impl Default for LanczosTolerances {
    fn default() -> Self {
        Self { breakdown: BREAKDOWN_TOL, termination: TERMINATION_TOL }
    }
}

/// Full coefficient history, and optionally the full basis, for diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LanczosRecord<S> {
    /// `α_1, α_2, …`
    pub alphas: Vec<S>,
    /// `β_1, β_2, …`
    pub betas: Vec<S>,
    /// `v_1, v_2, …, v_{n+1}` when retained.
    pub basis: Option<Vec<Vec<S>>>,
}

/// Data published by one Lanczos step, read by every shifted update.
#[derive(Debug, Clone, Copy)]
pub struct LanczosStep<'s, S> {
    /// Step index `n` (1-based).
    pub n: usize,
    pub alpha: S,
    pub beta_prev: S,
    pub beta: S,
    pub v_curr: &'s [S],
    pub v_next: &'s [S],
    /// `‖v_{n−1}‖₂`, `‖v_n‖₂`, `‖v_{n+1}‖₂`. Exactly `1` on the real path
    /// for nonzero vectors (a real vector with `vᵀv = 1` has unit 2-norm).
    pub norm_prev: f64,
    pub norm_curr: f64,
    pub norm_next: f64,
    /// `β_n = 0`: the Krylov space is invariant and `v_{n+1} = 0`.
    pub terminated: bool,
}

pub struct Lanczos<'a, S: Scalar> {
    a: &'a SparseSymMatrix,
    n: usize,
    v_prev: Vec<S>,
    v_curr: Vec<S>,
    v_next: Vec<S>,
    alpha: S,
    beta_prev: S,
    beta: S,
    g1: S,
    bnorm: f64,
    norm_prev: f64,
    norm_curr: f64,
    norm_next: f64,
    pending: bool,
    terminated: bool,
    tol: LanczosTolerances,
    record: Option<LanczosRecord<S>>,
    flops: FlopCounter,
}

impl<'a, S: Scalar> Lanczos<'a, S> {
    /// `v₁ = b/(bᵀb)^{1/2}`, `g₁ = (bᵀb)^{1/2}` (principal branch), `β₀ = 0`, `v₀ = 0`.
    pub fn new(a: &'a SparseSymMatrix, b: &[S]) -> Result<Self, LanczosError> {
        Self::with_tolerances(a, b, LanczosTolerances::default())
    }

    pub fn with_tolerances(
        a: &'a SparseSymMatrix,
        b: &[S],
        tol: LanczosTolerances,
    ) -> Result<Self, LanczosError> {
        let n = a.dim();
        DimensionMismatch::check(n, b.len()).map_err(crate::error::MatrixError::from)?;
        if S::IS_REAL != a.is_real() && S::IS_REAL {
            return Err(crate::error::MatrixError::ComplexOnRealPath.into());
        }
        let bnorm = norm2(b);
        if bnorm == 0.0 {
            return Err(LanczosError::ZeroRhs);
        }
        let btb = bilinear_dot_unchecked(b, b);
        let ratio = btb.abs() / (bnorm * bnorm);
        if ratio <= tol.breakdown {
            return Err(LanczosError::InitialBreakdown { ratio });
        }
        let g1 = btb.sqrt();
        let v_curr: Vec<S> = b.iter().map(|&x| x / g1).collect();
        let norm_curr = if S::IS_REAL { 1.0 } else { norm2(&v_curr) };
        Ok(Self {
            a,
            n: 1,
            v_prev: vec![S::zero(); n],
            v_curr,
            v_next: vec![S::zero(); n],
            alpha: S::zero(),
            beta_prev: S::zero(),
            beta: S::zero(),
            g1,
            bnorm,
            norm_prev: 0.0,
            norm_curr,
            norm_next: 0.0,
            pending: false,
            terminated: false,
            tol,
            record: None,
            flops: FlopCounter::default(),
        })
    }

    /// Keep `α`, `β` histories and, if `keep_basis`, every basis vector.
    pub fn with_record(mut self, keep_basis: bool) -> Self {
        let basis = keep_basis.then(|| vec![self.v_curr.clone()]);
        self.record = Some(LanczosRecord { alphas: Vec::new(), betas: Vec::new(), basis });
        self
    }

    /// `(bᵀb)^{1/2}`.
    pub fn g1(&self) -> S {
        self.g1
    }

    /// `‖b‖₂`.
    pub fn bnorm(&self) -> f64 {
        self.bnorm
    }

    /// Index of the current basis vector `v_n`.
    pub fn index(&self) -> usize {
        self.n
    }

    pub fn v_curr(&self) -> &[S] {
        &self.v_curr
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    pub fn flops(&self) -> FlopCounter {
        self.flops
    }

    pub fn record(&self) -> Option<&LanczosRecord<S>> {
        self.record.as_ref()
    }

    pub fn into_record(self) -> Option<LanczosRecord<S>> {
        self.record
    }

    /// Runs one step and publishes `(α_n, β_{n−1}, β_n, v_n, v_{n+1})`.
    pub fn step(&mut self) -> Result<LanczosStep<'_, S>, LanczosError> {
        if self.terminated {
            return Err(LanczosError::Terminated);
        }
        if self.pending {
            std::mem::swap(&mut self.v_prev, &mut self.v_curr);
            std::mem::swap(&mut self.v_curr, &mut self.v_next);
            self.beta_prev = self.beta;
            self.norm_prev = self.norm_curr;
            self.norm_curr = self.norm_next;
            self.n += 1;
            self.pending = false;
        }
        let dim = self.v_curr.len() as u64;

        self.a.spmv_into(&self.v_curr, &mut self.v_next, &mut self.flops)?;
        let av_norm = norm2(&self.v_next);
        let alpha = bilinear_dot_unchecked(&self.v_curr, &self.v_next);
        for i in 0..self.v_next.len() {
            self.v_next[i] = self.v_next[i] - alpha * self.v_curr[i] - self.beta_prev * self.v_prev[i];
        }
        let vt_norm = norm2(&self.v_next);
        self.flops.lanczos += 7 * dim;

        let scale = av_norm
            .max(alpha.abs() * self.norm_curr)
            .max(self.beta_prev.abs() * self.norm_prev);
        let beta;
        if vt_norm <= self.tol.termination * scale {
            beta = S::zero();
            self.v_next.iter_mut().for_each(|x| *x = S::zero());
            self.norm_next = 0.0;
            self.terminated = true;
        } else {
            let vtv = bilinear_dot_unchecked(&self.v_next, &self.v_next);
            let ratio = vtv.abs() / (vt_norm * vt_norm);
            if ratio <= self.tol.breakdown {
                return Err(LanczosError::SeriousBreakdown { step: self.n, ratio });
            }
            beta = vtv.sqrt();
            for x in self.v_next.iter_mut() {
                *x = *x / beta;
            }
            self.norm_next = if S::IS_REAL { 1.0 } else { norm2(&self.v_next) };
            self.flops.lanczos += 2 * dim;
        }
        self.alpha = alpha;
        self.beta = beta;
        self.pending = true;

        if let Some(rec) = self.record.as_mut() {
            rec.alphas.push(alpha);
            rec.betas.push(beta);
            if let Some(basis) = rec.basis.as_mut() {
                basis.push(self.v_next.clone());
            }
        }

        Ok(LanczosStep {
            n: self.n,
            alpha: self.alpha,
            beta_prev: self.beta_prev,
            beta: self.beta,
            v_curr: &self.v_curr,
            v_next: &self.v_next,
            norm_prev: self.norm_prev,
            norm_curr: self.norm_curr,
            norm_next: self.norm_next,
            terminated: self.terminated,
        })
    }
}
