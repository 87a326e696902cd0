//! Shifted QMR_SYM(B) and the Galerkin (shifted-COCG-equivalent) baseline.
//!
//! The weight `L_{n+1}` eliminates the subdiagonal of `T^{(σ)}_{n+1,n}` with
//! unit lower triangular factors, leaving an upper bidiagonal `B_n`. Per step
//! this is one elimination scalar `f_n = −t_{n+1,n}/t_{n,n}`, one quasi-residual
//! update `g̃_{n+1} = f_n g̃_n`, and the coupled two-term recurrence
//!
//! ```text
//! p_n = v_n − (t_{n−1,n}/t_{n−1,n−1}) p_{n−1}
//! x_n = x_{n−1} + (g̃_n/t_{n,n}) p_n
//! ```
//!
//! Since `L_n T_n^{(σ)} = B_n`, the coefficients satisfy `y_n = g₁(T_n^{(σ)})^{−1}e₁`,
//! which is the Galerkin condition characterizing shifted COCG. The baseline
//! therefore reuses these recurrences; it differs only in how the residual
//! is reported: through the Galerkin identity `r_n = −β_n (e_nᵀy_n) v_{n+1}`
//! with `e_nᵀy_n = g̃_n/t_{n,n}`, rather than through `g̃_{n+1}`.

use crate::error::BreakdownKind;
use crate::flops::FlopCounter;
use crate::lanczos::LanczosStep;
use crate::scalar::{Scalar, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone)]
pub struct QmrSymBState {
    galerkin: bool,
    x: Vec<C64>,
    p_prev: Vec<C64>,
    f_prev: C64,
    diag_prev: C64,
    /// `g̃_{n+1}` after step `n`.
    g: C64,
    /// `e_nᵀy_n = g̃_n/t_{n,n}` of the last step.
    y_last: C64,
    beta: f64,
    norm_next: f64,
    steps: usize,
}

impl QmrSymBState {
    /// Shifted QMR_SYM(B).
    pub fn new<S: Scalar>(n: usize, g1: S) -> Self {
        Self::build(n, g1, false)
    }

    /// Galerkin baseline (iterates of shifted COCG).
    pub fn new_galerkin<S: Scalar>(n: usize, g1: S) -> Self {
        Self::build(n, g1, true)
    }

    fn build<S: Scalar>(n: usize, g1: S, galerkin: bool) -> Self {
        Self {
            galerkin,
            x: vec![ZERO; n],
            p_prev: vec![ZERO; n],
            f_prev: ZERO,
            diag_prev: ONE,
            g: g1.to_complex(),
            y_last: ZERO,
            beta: 0.0,
            norm_next: 1.0,
            steps: 0,
        }
    }

    pub fn x(&self) -> &[C64] {
        &self.x
    }

    pub fn into_x(self) -> Vec<C64> {
        self.x
    }

    /// `g̃_{n+1}`.
    pub fn g(&self) -> C64 {
        self.g
    }

    /// Last elimination scalar `f_n`.
    pub fn f(&self) -> C64 {
        self.f_prev
    }

    /// Last eliminated pivot `t_{n,n}`.
    pub fn pivot(&self) -> C64 {
        self.diag_prev
    }

    pub fn is_galerkin(&self) -> bool {
        self.galerkin
    }

    pub fn update<S: Scalar>(
        &mut self,
        sigma: C64,
        step: &LanczosStep<'_, S>,
        flops: &mut FlopCounter,
    ) -> Result<(), BreakdownKind> {
        let t_super = step.beta_prev.to_complex();
        let t_sub = step.beta.to_complex();
        let diag = step.alpha.to_complex() + sigma + self.f_prev * t_super;
        if diag == ZERO {
            return Err(BreakdownKind::Pivot { step: step.n });
        }
        let f = -t_sub / diag;
        let g_next = f * self.g;
        flops.least_squares += 8;

        let c1 = t_super / self.diag_prev;
        let coef = self.g / diag;
        for i in 0..self.x.len() {
            let p = step.v_curr[i].to_complex() - c1 * self.p_prev[i];
            self.p_prev[i] = p;
            self.x[i] += coef * p;
        }
        flops.update += 4 * self.x.len() as u64 + 2;

        self.f_prev = f;
        self.diag_prev = diag;
        self.g = g_next;
        self.y_last = coef;
        self.beta = step.beta.abs();
        self.norm_next = step.norm_next;
        self.steps += 1;
        Ok(())
    }

    /// `‖r_n‖₂ = |g̃_{n+1}|·‖v_{n+1}‖₂`, or `|β_n|·|e_nᵀy_n|·‖v_{n+1}‖₂` for the
    /// Galerkin baseline. `‖v_{n+1}‖₂` is computed once per Lanczos step and
    /// shared by all shifts.
    pub fn estimate_residual(&self) -> f64 {
        if self.steps == 0 {
            return self.g.norm() * self.norm_next;
        }
        if self.galerkin {
            self.beta * self.y_last.norm() * self.norm_next
        } else {
            self.g.norm() * self.norm_next
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elimination_scalar() {
        // t_nn = 2, t_{n+1,n} = 1 at the first step.
        let v = [1.0];
        let vn = [0.0];
        let step = LanczosStep {
            n: 1,
            alpha: 2.0,
            beta_prev: 0.0,
            beta: 1.0,
            v_curr: &v,
            v_next: &vn,
            norm_prev: 0.0,
            norm_curr: 1.0,
            norm_next: 1.0,
            terminated: false,
        };
        let mut st = QmrSymBState::new(1, 3.0);
        st.update(C64::new(0.0, 0.0), &step, &mut FlopCounter::default()).unwrap();
        assert_eq!(st.f(), C64::new(-0.5, 0.0));
        assert_eq!(st.g(), C64::new(-1.5, 0.0));
    }

    #[test]
    fn zero_pivot_is_breakdown() {
        let v = [1.0];
        let step = LanczosStep {
            n: 1,
            alpha: 1.0,
            beta_prev: 0.0,
            beta: 0.0,
            v_curr: &v,
            v_next: &[0.0],
            norm_prev: 0.0,
            norm_curr: 1.0,
            norm_next: 0.0,
            terminated: true,
        };
        let mut st = QmrSymBState::new(1, 1.0);
        let err = st.update(C64::new(-1.0, 0.0), &step, &mut FlopCounter::default());
        assert_eq!(err, Err(BreakdownKind::Pivot { step: 1 }));
    }
}
