//! Operation counters.
//!
//! Counting convention for the per-shift solution update (`update`):
//!
//! * a scalar times a length-`N` vector costs `N`,
//! * adding or subtracting two length-`N` vectors costs `N`,
//! * a scalar division forming a recurrence coefficient costs `1`.
//!
//! Under this convention the three-term update of shifted QMR_SYM,
//! `p_n = v_n − (t_{n−2,n}/t_{n−2,n−2}) p_{n−2} − (t_{n−1,n}/t_{n−1,n−1}) p_{n−1}`
//! and `x_n = x_{n−1} + (g_n/t_{n,n}) p_n`, costs `6N + 3` per shift, and the
//! two-term update of QMR_SYM(B) costs `4N + 2`. The recurrences are executed
//! uniformly from the first step (with `p_{−1} = p_0 = 0`), so the charge is
//! the same at every step.
//!
//! Matrix-vector products charge one unit per stored entry, in the real or
//! complex bucket depending on the arithmetic actually performed. Lanczos
//! vector work, rotation/elimination scalar work, and residual estimation
//! have their own buckets and are informational.

use std::ops::{Add, AddAssign, Sub};

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct FlopCounter {
    /// Real matrix entry times real vector entry.
    pub matvec_real: u64,
    /// Matrix-vector multiply-adds involving complex arithmetic.
    pub matvec_complex: u64,
    pub lanczos: u64,
    pub update: u64,
    pub least_squares: u64,
    pub residual: u64,
}

impl FlopCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }

    pub fn total(&self) -> u64 {
        self.matvec_real
            + self.matvec_complex
            + self.lanczos
            + self.update
            + self.least_squares
            + self.residual
    }
}

impl AddAssign for FlopCounter {
    fn add_assign(&mut self, o: Self) {
        self.matvec_real += o.matvec_real;
        self.matvec_complex += o.matvec_complex;
        self.lanczos += o.lanczos;
        self.update += o.update;
        self.least_squares += o.least_squares;
        self.residual += o.residual;
    }
}

impl Add for FlopCounter {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        self += o;
        self
    }
}

/// Difference between two snapshots of a monotone counter.
impl Sub for FlopCounter {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            matvec_real: self.matvec_real - o.matvec_real,
            matvec_complex: self.matvec_complex - o.matvec_complex,
            lanczos: self.lanczos - o.lanczos,
            update: self.update - o.update,
            least_squares: self.least_squares - o.least_squares,
            residual: self.residual - o.residual,
        }
    }
}

impl std::iter::Sum for FlopCounter {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + b)
    }
}
