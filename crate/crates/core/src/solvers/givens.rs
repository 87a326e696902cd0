//! Shifted QMR_SYM: per-shift least-squares solve by Givens rotations.
//!
//! For each shift the active column of `T^{(σ)}_{n+1,n} = T_{n+1,n} + σ[I; 0ᵀ]`
//! is `(t_{n−1,n}, t_{n,n}, t_{n+1,n}) = (β_{n−1}, α_n + σ, β_n)`. The two
//! previous rotations are applied to it, a new rotation annihilates
//! `t_{n+1,n}`, and the solution is advanced by the three-term recurrence
//!
//! ```text
//! p_n = v_n − (t_{n−2,n}/t_{n−2,n−2}) p_{n−2} − (t_{n−1,n}/t_{n−1,n−1}) p_{n−1}
//! x_n = x_{n−1} + (g_n/t_{n,n}) p_n
//! ```
//!
//! With weights, the column is scaled row-wise by `ω_i = ‖v_i‖₂` first and
//! `g₁` by `ω₁`; this minimizes `‖ω₁g₁e₁ − Ω_{n+1}T^{(σ)}_{n+1,n}z‖₂`.

use crate::error::BreakdownKind;
use crate::flops::FlopCounter;
use crate::lanczos::LanczosStep;
use crate::scalar::{Scalar, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Plane rotation `[c, s; −s̄, c]` with `c` real and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub c: f64,
    pub s: C64,
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation { c: 1.0, s: ZERO };

    /// Rotation zeroing `b` in `(a, b)`: `c = |a|/√(|a|²+|b|²)`, `s̄ = (b/a)c`.
    ///
    /// For `a = 0` the limit `c = 0`, `s̄ = b/|b|` is used. Returns `None`
    /// only when both entries vanish.
    pub fn zeroing(a: C64, b: C64) -> Option<Self> {
        if a == ZERO {
            if b == ZERO {
                return None;
            }
            return Some(Rotation { c: 0.0, s: (b / b.norm()).conj() });
        }
        let c = a.norm() / a.norm().hypot(b.norm());
        let s_bar = (b / a) * c;
        Some(Rotation { c, s: s_bar.conj() })
    }

    #[inline]
    pub fn apply(&self, a: C64, b: C64) -> (C64, C64) {
        (a * self.c + self.s * b, -self.s.conj() * a + b * self.c)
    }
}

/// Per-shift state of shifted QMR_SYM and of its Ω-weighted variant.
#[derive(Debug, Clone)]
pub struct QmrSymState {
    weighted: bool,
    x: Vec<C64>,
    p_prev2: Vec<C64>,
    p_prev: Vec<C64>,
    /// `w_{n+1}`; empty on the real path, where `‖w‖₂ = 1` identically.
    w: Vec<C64>,
    w_norm: f64,
    rot_prev2: Rotation,
    rot_prev: Rotation,
    diag_prev2: C64,
    diag_prev: C64,
    /// `g_{n+1}` after step `n` (`g₁` or `ω₁g₁` before the first step).
    g: C64,
    steps: usize,
}

impl QmrSymState {
    /// Unweighted shifted QMR_SYM (`W = I`).
    pub fn new<S: Scalar>(v1: &[S], g1: S) -> Self {
        Self::build(v1, g1, 1.0, false)
    }

    /// Ω-weighted variant, `ω_i = ‖v_i‖₂`; `norm_v1 = ‖v₁‖₂`.
    pub fn new_omega<S: Scalar>(v1: &[S], g1: S, norm_v1: f64) -> Self {
        Self::build(v1, g1, norm_v1, true)
    }

    fn build<S: Scalar>(v1: &[S], g1: S, omega1: f64, weighted: bool) -> Self {
        let n = v1.len();
        let w = if S::IS_REAL {
            Vec::new()
        } else {
            v1.iter().map(|v| v.to_complex() / omega1).collect()
        };
        let w_norm = if S::IS_REAL { 1.0 } else { crate::scalar::norm2(&w) };
        Self {
            weighted,
            x: vec![ZERO; n],
            p_prev2: vec![ZERO; n],
            p_prev: vec![ZERO; n],
            w,
            w_norm,
            rot_prev2: Rotation::IDENTITY,
            rot_prev: Rotation::IDENTITY,
            diag_prev2: ONE,
            diag_prev: ONE,
            g: g1.to_complex() * omega1,
            steps: 0,
        }
    }

    pub fn x(&self) -> &[C64] {
        &self.x
    }

    pub fn into_x(self) -> Vec<C64> {
        self.x
    }

    /// `g_{n+1}`.
    pub fn g(&self) -> C64 {
        self.g
    }

    /// Most recent rotation `(c_n, s_n)`.
    pub fn rotation(&self) -> Rotation {
        self.rot_prev
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    /// `‖w_{n+1}‖₂`; exactly `1` on the real path.
    pub fn w_norm(&self) -> f64 {
        self.w_norm
    }

    /// Advances by one Lanczos step.
    pub fn update<S: Scalar>(
        &mut self,
        sigma: C64,
        step: &LanczosStep<'_, S>,
        flops: &mut FlopCounter,
    ) -> Result<(), BreakdownKind> {
        let (w_prev, w_curr, w_next) = if self.weighted {
            (step.norm_prev, step.norm_curr, step.norm_next)
        } else {
            (1.0, 1.0, 1.0)
        };
        let t_sub = step.beta.to_complex() * w_next;
        let (t0, t1) = self.rot_prev2.apply(ZERO, step.beta_prev.to_complex() * w_prev);
        let (t1, t2) = self.rot_prev.apply(t1, (step.alpha.to_complex() + sigma) * w_curr);

        let rot = Rotation::zeroing(t2, t_sub).ok_or(BreakdownKind::Rotation { step: step.n })?;
        let diag = t2 * rot.c + rot.s * t_sub;
        let g_n = self.g * rot.c;
        let g_next = -rot.s.conj() * self.g;
        flops.least_squares += 30;

        let c2 = t0 / self.diag_prev2;
        let c1 = t1 / self.diag_prev;
        let coef = g_n / diag;
        // p_n overwrites p_{n−2}.
        for i in 0..self.x.len() {
            let p = step.v_curr[i].to_complex() - c2 * self.p_prev2[i] - c1 * self.p_prev[i];
            self.p_prev2[i] = p;
            self.x[i] += coef * p;
        }
        std::mem::swap(&mut self.p_prev2, &mut self.p_prev);
        let dim = self.x.len() as u64;
        flops.update += 6 * dim + 3;

        if !self.w.is_empty() {
            let inv = if w_next > 0.0 { rot.c / w_next } else { 0.0 };
            let mut acc = 0.0;
            for i in 0..self.w.len() {
                let w = -rot.s * self.w[i] + step.v_next[i].to_complex() * inv;
                acc += w.norm_sqr();
                self.w[i] = w;
            }
            self.w_norm = acc.sqrt();
            flops.residual += 4 * dim;
        }

        self.rot_prev2 = self.rot_prev;
        self.rot_prev = rot;
        self.diag_prev2 = self.diag_prev;
        self.diag_prev = diag;
        self.g = g_next;
        self.steps += 1;
        Ok(())
    }

    /// `‖r_n‖₂ = |g_{n+1}|·‖w_{n+1}‖₂`.
    pub fn estimate_residual(&self) -> f64 {
        self.g.norm() * self.w_norm
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn three_four_five() {
        let r = Rotation::zeroing(c(3.0, 0.0), c(4.0, 0.0)).unwrap();
        assert!((r.c - 0.6).abs() < 1e-15);
        assert!((r.s - c(0.8, 0.0)).norm() < 1e-15);
        let (top, bottom) = r.apply(c(3.0, 0.0), c(4.0, 0.0));
        assert!((top - c(5.0, 0.0)).norm() < 1e-14);
        assert!(bottom.norm() < 1e-15);
        let (g_n, g_next) = r.apply(c(1.0, 0.0), ZERO);
        assert!((g_n - c(0.6, 0.0)).norm() < 1e-15);
        assert!((g_next + c(0.8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rotation_is_unitary_for_complex_entries() {
        let r = Rotation::zeroing(c(0.3, -1.2), c(2.0, 0.7)).unwrap();
        assert!(r.c >= 0.0);
        assert!((r.c * r.c + r.s.norm_sqr() - 1.0).abs() < 1e-14);
        let (_, b) = r.apply(c(0.3, -1.2), c(2.0, 0.7));
        assert!(b.norm() < 1e-15);
    }

    #[test]
    fn zero_diagonal_uses_limit_rotation() {
        let r = Rotation::zeroing(ZERO, c(0.0, 2.0)).unwrap();
        assert_eq!(r.c, 0.0);
        let (top, bottom) = r.apply(ZERO, c(0.0, 2.0));
        assert!((top - c(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(bottom, ZERO);
        assert!(Rotation::zeroing(ZERO, ZERO).is_none());
    }
}
