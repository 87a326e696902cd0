use std::time::Duration;

use crate::error::{BreakdownKind, LanczosError};
use crate::flops::FlopCounter;
use crate::scalar::C64;

use super::Method;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftStatus {
    Active,
    Converged,
    NotConverged,
    Breakdown(BreakdownKind),
}

impl ShiftStatus {
    pub fn label(&self) -> &'static str {
        match self {
            ShiftStatus::Active => "active",
            ShiftStatus::Converged => "converged",
            ShiftStatus::NotConverged => "not-converged",
            ShiftStatus::Breakdown(_) => "breakdown",
        }
    }
}

/// Why the shared Lanczos stream stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    AllConverged,
    MaxIter,
    /// `β_n = 0`; every remaining shift was finalized at this step.
    Lucky,
    /// Every shift stopped, at least one through a per-shift breakdown.
    ShiftsStopped,
    Breakdown(LanczosError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftReport {
    pub sigma: C64,
    pub status: ShiftStatus,
    /// Steps applied to this shift (the convergence iteration if converged).
    pub iterations: usize,
    /// Final relative residual estimate `‖r‖₂/‖b‖₂`.
    pub estimate: f64,
    /// `‖b − (A+σI)x‖₂/‖b‖₂`, when verified.
    pub true_residual: Option<f64>,
    /// `‖x − x_oracle‖₂/‖x_oracle‖₂`, when checked.
    pub oracle_distance: Option<f64>,
    /// Relative estimate after each applied step; empty unless requested.
    pub history: Vec<f64>,
}

/// Per-iteration aggregate over the shifts updated in that iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationRecord {
    /// Shifts updated (`m'`).
    pub active: usize,
    pub flops: FlopCounter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: Method,
    pub n: usize,
    pub bnorm: f64,
    pub tol: f64,
    pub shifts: Vec<ShiftReport>,
    /// Lanczos steps taken.
    pub iterations: usize,
    pub wall_time: Duration,
    pub flops: FlopCounter,
    pub per_iteration: Vec<IterationRecord>,
    pub real_path: bool,
    pub termination: Termination,
}

impl SolveReport {
    pub fn all_converged(&self) -> bool {
        self.shifts.iter().all(|s| s.status == ShiftStatus::Converged)
    }

    pub fn any_breakdown(&self) -> bool {
        matches!(self.termination, Termination::Breakdown(_))
            || self.shifts.iter().any(|s| matches!(s.status, ShiftStatus::Breakdown(_)))
    }

    pub fn has_history(&self) -> bool {
        self.shifts.iter().any(|s| !s.history.is_empty())
    }
}
