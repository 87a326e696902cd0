//! Dense ground-truth engines for desk-scale verification.
//!
//! Nothing here shares a kernel with the iterative solvers: systems are
//! factored densely, and the small projected problems are materialized as
//! explicit matrices and solved by LU or Householder QR.

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::error::DimensionMismatch;
use crate::scalar::C64;
use crate::sparse::SparseSymMatrix;

pub const DEFAULT_CAP: usize = 512;
const CACHE_SLOTS: usize = 8;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("dimension {n} exceeds oracle cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("matrix is singular to working precision: pivot {pivot:e} in column {column}")]
    Singular { column: usize, pivot: f64 },
    #[error("least-squares matrix is rank deficient at column {column} (|r_kk| = {value:e})")]
    RankDeficient { column: usize, value: f64 },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_sparse(a: &SparseSymMatrix) -> Self {
        let mut m = Self::zeros(a.dim(), a.dim());
        for (i, j, v) in a.iter() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn diagonal(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Leading `r × c` block.
    pub fn block(&self, r: usize, c: usize) -> Self {
        Self::from_fn(r, c, |i, j| self[(i, j)])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, o: &DenseMatrix) -> Result<Self, DimensionMismatch> {
        DimensionMismatch::check(self.cols, o.rows)?;
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..o.cols {
                    m[(i, j)] += a * o[(k, j)];
                }
            }
        }
        Ok(m)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>, DimensionMismatch> {
        DimensionMismatch::check(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect())
    }

    /// `self + σI` (square part).
    pub fn shifted(&self, sigma: C64) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] += sigma;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factors with partial pivoting, `PA = LU`, packed in one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &DenseMatrix) -> Result<Self, OracleError> {
        if a.rows != a.cols {
            return Err(OracleError::NotSquare { rows: a.rows, cols: a.cols });
        }
        let n = a.rows;
        let tiny = f64::EPSILON * n as f64 * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, mag) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if mag <= tiny || mag == 0.0 {
                return Err(OracleError::Singular { column: k, pivot: mag });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>, DimensionMismatch> {
        let n = self.lu.rows;
        DimensionMismatch::check(n, b.len())?;
        let mut y: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                y[i] = y[i] - l * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                y[i] = y[i] - u * y[j];
            }
            y[i] /= self.lu[(i, i)];
        }
        Ok(y)
    }
}

/// Solves `(A + σI)x = b` by dense LU with partial pivoting.
pub fn dense_solve(a: &DenseMatrix, sigma: C64, b: &[C64]) -> Result<Vec<C64>, OracleError> {
    Ok(Lu::factor(&a.shifted(sigma))?.solve(b)?)
}

type LuCache = VecDeque<((u64, u64), Arc<Lu>)>;

/// Dense copy of a sparse matrix with a small per-shift factorization cache.
pub struct DenseOracle {
    a: DenseMatrix,
    cache: Mutex<LuCache>,
}

impl DenseOracle {
    pub fn new(a: &SparseSymMatrix) -> Result<Self, OracleError> {
        Self::with_cap(a, DEFAULT_CAP)
    }

    pub fn with_cap(a: &SparseSymMatrix, cap: usize) -> Result<Self, OracleError> {
        if a.dim() > cap {
            return Err(OracleError::TooLarge { n: a.dim(), cap });
        }
        Ok(Self { a: DenseMatrix::from_sparse(a), cache: Mutex::new(VecDeque::new()) })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    fn factor(&self, sigma: C64) -> Result<Arc<Lu>, OracleError> {
        let key = (sigma.re.to_bits(), sigma.im.to_bits());
        if let Some((_, lu)) = self.cache.lock().unwrap().iter().find(|(k, _)| *k == key) {
            return Ok(Arc::clone(lu));
        }
        let lu = Arc::new(Lu::factor(&self.a.shifted(sigma))?);
        let mut cache = self.cache.lock().unwrap();
        if cache.len() == CACHE_SLOTS {
            cache.pop_front();
        }
        cache.push_back((key, Arc::clone(&lu)));
        Ok(lu)
    }

    pub fn solve(&self, sigma: C64, b: &[C64]) -> Result<Vec<C64>, OracleError> {
        Ok(self.factor(sigma)?.solve(b)?)
    }

    /// `‖x − x_oracle‖₂/‖x_oracle‖₂`.
    pub fn distance(&self, sigma: C64, b: &[C64], x: &[C64]) -> Result<f64, OracleError> {
        let xo = self.solve(sigma, b)?;
        DimensionMismatch::check(xo.len(), x.len())?;
        let num: f64 = xo.iter().zip(x).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let den: f64 = xo.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        Ok(if den == 0.0 { num } else { num / den })
    }
}

/// `T^{(σ)}_{k+1,k}` built from `α_1..α_k`, `β_1..β_k`.
pub fn projected_tridiagonal(alphas: &[C64], betas: &[C64], sigma: C64) -> DenseMatrix {
    let k = alphas.len();
    let mut t = DenseMatrix::zeros(k + 1, k);
    for j in 0..k {
        t[(j, j)] = alphas[j] + sigma;
        t[(j + 1, j)] = betas[j];
        if j + 1 < k {
            t[(j, j + 1)] = betas[j];
        }
    }
    t
}

/// `diag(ω_1, …, ω_{k+1})`.
pub fn omega_weight(norms: &[f64]) -> DenseMatrix {
    DenseMatrix::diagonal(&norms.iter().map(|&w| C64::new(w, 0.0)).collect::<Vec<_>>())
}

/// `L_{k+1} = F(k)⋯F(1)`, each `F(i) = I + f_i e_{i+1}e_iᵀ` chosen to zero the
/// `(i+1, i)` entry of the partially eliminated `T`.
pub fn elimination_weight(t: &DenseMatrix) -> Result<DenseMatrix, OracleError> {
    let (rows, k) = (t.rows(), t.cols());
    DimensionMismatch::check(k + 1, rows)?;
    let mut l = DenseMatrix::identity(rows);
    let mut work = t.clone();
    for i in 0..k {
        let pivot = work[(i, i)];
        if pivot == ZERO {
            return Err(OracleError::Singular { column: i, pivot: 0.0 });
        }
        let f = -work[(i + 1, i)] / pivot;
        let mut fi = DenseMatrix::identity(rows);
        fi[(i + 1, i)] = f;
        work = fi.matmul(&work)?;
        l = fi.matmul(&l)?;
    }
    Ok(l)
}

/// `argmin_z ‖W(g₁e₁ − Tz)‖₂` by Householder QR of `WT`.
pub fn brute_force_wqmr(t: &DenseMatrix, g1: C64, w: &DenseMatrix) -> Result<Vec<C64>, OracleError> {
    let mut rhs = vec![ZERO; t.rows()];
    rhs[0] = g1;
    let wt = w.matmul(t)?;
    let wr = w.matvec(&rhs)?;
    least_squares(&wt, &wr)
}

/// `argmin_z ‖b − Mz‖₂` for a tall `M` of full column rank.
pub fn least_squares(m: &DenseMatrix, b: &[C64]) -> Result<Vec<C64>, OracleError> {
    let (rows, cols) = (m.rows(), m.cols());
    DimensionMismatch::check(rows, b.len())?;
    let mut r = m.clone();
    let mut y = b.to_vec();
    let scale = m.max_abs();
    for k in 0..cols {
        let norm: f64 = (k..rows).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm <= f64::EPSILON * rows as f64 * scale || norm == 0.0 {
            return Err(OracleError::RankDeficient { column: k, value: norm });
        }
        let x0 = r[(k, k)];
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k..rows).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 > 0.0 {
            // H = I − 2vvᴴ/(vᴴv)
            for j in k..cols {
                let dot: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * r[(k + i, j)]).sum();
                let c = dot * (2.0 / vnorm2);
                for (i, vi) in v.iter().enumerate() {
                    r[(k + i, j)] -= vi * c;
                }
            }
            let dot: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * y[k + i]).sum();
            let c = dot * (2.0 / vnorm2);
            for (i, vi) in v.iter().enumerate() {
                y[k + i] -= vi * c;
            }
        }
    }
    let mut z = vec![ZERO; cols];
    for i in (0..cols).rev() {
        let mut s = y[i];
        for j in i + 1..cols {
            s -= r[(i, j)] * z[j];
        }
        z[i] = s / r[(i, i)];
    }
    Ok(z)
}

/// `y = g₁(T_k^{(σ)})^{−1}e₁` for the square `k × k` tridiagonal.
pub fn galerkin_coefficients(t_square: &DenseMatrix, g1: C64) -> Result<Vec<C64>, OracleError> {
    let mut e1 = vec![ZERO; t_square.rows()];
    e1[0] = g1;
    Ok(Lu::factor(t_square)?.solve(&e1)?)
}

/// Dense complex symmetric Lanczos reference: `(α_k, β_k, v_k)` for `steps` steps.
pub fn lanczos_reference(
    a: &DenseMatrix,
    b: &[C64],
    steps: usize,
) -> (Vec<C64>, Vec<C64>, Vec<Vec<C64>>) {
    let dot = |u: &[C64], v: &[C64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<C64>();
    let sqrt = |z: C64| {
        let s = z.sqrt();
        if s.re < 0.0 || (s.re == 0.0 && s.im < 0.0) {
            -s
        } else {
            s
        }
    };
    let g1 = sqrt(dot(b, b));
    let mut vs = vec![b.iter().map(|x| x / g1).collect::<Vec<_>>()];
    let (mut alphas, mut betas) = (Vec::new(), Vec::new());
    let mut v_prev = vec![ZERO; b.len()];
    let mut beta_prev = ZERO;
    for k in 0..steps {
        let v = vs[k].clone();
        let av = a.matvec(&v).unwrap();
        let alpha = dot(&v, &av);
        let vt: Vec<C64> = (0..v.len()).map(|i| av[i] - alpha * v[i] - beta_prev * v_prev[i]).collect();
        let beta = sqrt(dot(&vt, &vt));
        alphas.push(alpha);
        betas.push(beta);
        vs.push(vt.iter().map(|x| x / beta).collect());
        v_prev = v;
        beta_prev = beta;
    }
    (alphas, betas, vs)
}

/// Classical shifted COCG on `(A + σI)x = b`; returns `x_1, …, x_steps`.
pub fn cocg_reference(a: &DenseMatrix, sigma: C64, b: &[C64], steps: usize) -> Vec<Vec<C64>> {
    let dot = |u: &[C64], v: &[C64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<C64>();
    let m = a.shifted(sigma);
    let n = b.len();
    let mut x = vec![ZERO; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mp = m.matvec(&p).unwrap();
        let alpha = rr / dot(&p, &mp);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * mp[i];
        }
        out.push(x.clone());
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    out
}
