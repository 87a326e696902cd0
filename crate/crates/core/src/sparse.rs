//! Compressed-row storage for (complex) symmetric matrices.
//!
//! Both triangles are stored, so a single row sweep yields the full product.
//! Symmetry here means `Aᵀ = A`; no Hermitian structure is assumed.

use crate::error::{DimensionMismatch, MatrixError};
use crate::flops::FlopCounter;
use crate::scalar::{Scalar, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Real(Vec<f64>),
    Complex(Vec<C64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Values,
}

impl SparseSymMatrix {
    /// Builds from entries covering the full pattern. Symmetry is checked
    /// exactly, entry by entry.
    pub fn from_triplets<I>(n: usize, entries: I) -> Result<Self, MatrixError>
    where
        I: IntoIterator<Item = (usize, usize, C64)>,
    {
        let mut entries: Vec<_> = entries.into_iter().collect();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        for &(i, j, _) in &entries {
            if i >= n || j >= n {
                return Err(MatrixError::OutOfRange { row: i, col: j, n });
            }
        }
        entries.sort_by_key(|&(i, j, _)| (i, j));
        for w in entries.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(MatrixError::Duplicate { row: w[0].0, col: w[0].1 });
            }
        }
        let m = Self::assemble(n, &entries);
        m.check_symmetric()?;
        Ok(m)
    }

    /// Builds from entries of one triangle (either one, or a mix); every
    /// off-diagonal `(i, j)` is mirrored to `(j, i)`.
    pub fn from_mirrored_triplets<I>(n: usize, entries: I) -> Result<Self, MatrixError>
    where
        I: IntoIterator<Item = (usize, usize, C64)>,
    {
        let mut full = Vec::new();
        for (i, j, v) in entries {
            full.push((i, j, v));
            if i != j {
                full.push((j, i, v));
            }
        }
        Self::from_triplets(n, full)
    }

    /// Validates raw compressed-row arrays.
    pub fn from_csr(
        n: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<C64>,
    ) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if row_ptr.len() != n + 1 || row_ptr[0] != 0 {
            return Err(MatrixError::MalformedCsr("row_ptr must have n+1 entries starting at 0".into()));
        }
        if row_ptr.windows(2).any(|w| w[0] > w[1]) {
            return Err(MatrixError::MalformedCsr("row_ptr must be nondecreasing".into()));
        }
        let nnz = row_ptr[n];
        if col_idx.len() != nnz || values.len() != nnz {
            return Err(MatrixError::MalformedCsr(format!(
                "row_ptr[n] = {nnz} but {} column indices and {} values",
                col_idx.len(),
                values.len()
            )));
        }
        for i in 0..n {
            let cols = &col_idx[row_ptr[i]..row_ptr[i + 1]];
            for (k, &j) in cols.iter().enumerate() {
                if j >= n {
                    return Err(MatrixError::OutOfRange { row: i, col: j, n });
                }
                if k > 0 {
                    if cols[k - 1] == j {
                        return Err(MatrixError::Duplicate { row: i, col: j });
                    }
                    if cols[k - 1] > j {
                        return Err(MatrixError::MalformedCsr(format!("row {i} columns not sorted")));
                    }
                }
            }
        }
        let m = Self { n, row_ptr, col_idx, values: pack(values) };
        m.check_symmetric()?;
        Ok(m)
    }

    pub fn identity(n: usize) -> Result<Self, MatrixError> {
        Self::from_triplets(n, (0..n).map(|i| (i, i, C64::new(1.0, 0.0))))
    }

    /// Builds from a dense row-major closure, skipping exact zeros.
    pub fn from_dense_fn(n: usize, f: impl Fn(usize, usize) -> C64) -> Result<Self, MatrixError> {
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = f(i, j);
                if v != C64::new(0.0, 0.0) {
                    entries.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, entries)
    }

    fn assemble(n: usize, sorted: &[(usize, usize, C64)]) -> Self {
        let mut row_ptr = vec![0usize; n + 1];
        for &(i, _, _) in sorted {
            row_ptr[i + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = sorted.iter().map(|e| e.1).collect();
        let values = pack(sorted.iter().map(|e| e.2).collect());
        Self { n, row_ptr, col_idx, values }
    }

    fn check_symmetric(&self) -> Result<(), MatrixError> {
        for (i, j, v) in self.iter() {
            if i < j && self.get(j, i) != Some(v) {
                return Err(MatrixError::NotSymmetric { row: i, col: j });
            }
            if i > j && self.get(j, i).is_none() {
                return Err(MatrixError::NotSymmetric { row: i, col: j });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn is_real(&self) -> bool {
        matches!(self.values, Values::Real(_))
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    fn value_at(&self, k: usize) -> C64 {
        match &self.values {
            Values::Real(v) => C64::new(v[k], 0.0),
            Values::Complex(v) => v[k],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<C64> {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[lo..hi]
            .binary_search(&j)
            .ok()
            .map(|k| self.value_at(lo + k))
    }

    /// Iterates stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.col_idx[k], self.value_at(k)))
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.iter().map(|(_, _, v)| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `A + σI`.
    pub fn shifted(&self, sigma: C64) -> Self {
        let mut entries: Vec<_> = self.iter().collect();
        for i in 0..self.n {
            match self.get(i, i) {
                Some(_) => {}
                None => entries.push((i, i, C64::new(0.0, 0.0))),
            }
        }
        for e in entries.iter_mut() {
            if e.0 == e.1 {
                e.2 += sigma;
            }
        }
        entries.sort_by_key(|&(i, j, _)| (i, j));
        Self::assemble(self.n, &entries)
    }

    /// `cA`.
    pub fn scaled(&self, c: C64) -> Self {
        let entries: Vec<_> = self.iter().map(|(i, j, v)| (i, j, v * c)).collect();
        Self::assemble(self.n, &entries)
    }

    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        let mut d = vec![vec![C64::new(0.0, 0.0); self.n]; self.n];
        for (i, j, v) in self.iter() {
            d[i][j] = v;
        }
        d
    }

    /// `out = A·v`, by row sweep.
    ///
    /// A real matrix applied to a real vector runs entirely in `f64`. A complex
    /// matrix requires the complex field.
    pub fn spmv_into<S: Scalar>(
        &self,
        v: &[S],
        out: &mut [S],
        flops: &mut FlopCounter,
    ) -> Result<(), MatrixError> {
        DimensionMismatch::check(self.n, v.len())?;
        DimensionMismatch::check(self.n, out.len())?;
        match &self.values {
            Values::Real(vals) => {
                for (i, o) in out.iter_mut().enumerate() {
                    let mut acc = S::zero();
                    for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                        acc += v[self.col_idx[k]].scale(vals[k]);
                    }
                    *o = acc;
                }
                if S::IS_REAL {
                    flops.matvec_real += self.nnz() as u64;
                } else {
                    flops.matvec_complex += self.nnz() as u64;
                }
            }
            Values::Complex(vals) => {
                let v = S::complex_slice(v).ok_or(MatrixError::ComplexOnRealPath)?;
                let out = S::complex_slice_mut(out).ok_or(MatrixError::ComplexOnRealPath)?;
                for (i, o) in out.iter_mut().enumerate() {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                        acc += vals[k] * v[self.col_idx[k]];
                    }
                    *o = acc;
                }
                flops.matvec_complex += self.nnz() as u64;
            }
        }
        Ok(())
    }

    /// `A·v` without operation accounting.
    pub fn spmv<S: Scalar>(&self, v: &[S]) -> Result<Vec<S>, MatrixError> {
        let mut out = vec![S::zero(); self.n];
        self.spmv_into(v, &mut out, &mut FlopCounter::default())?;
        Ok(out)
    }
}

fn pack(values: Vec<C64>) -> Values {
    if values.iter().all(|v| v.im == 0.0) {
        Values::Real(values.into_iter().map(|v| v.re).collect())
    } else {
        Values::Complex(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_spmv() {
        let a = SparseSymMatrix::identity(2).unwrap();
        let v = [c(3.0, 0.0), c(0.0, 4.0)];
        assert_eq!(a.spmv(&v).unwrap(), v.to_vec());
    }

    #[test]
    fn swap_spmv() {
        let a = SparseSymMatrix::from_mirrored_triplets(2, [(1, 0, c(1.0, 0.0))]).unwrap();
        assert_eq!(a.spmv(&[1.0, 2.0]).unwrap(), vec![2.0, 1.0]);
        assert!(a.is_real());
    }

    #[test]
    fn dimension_mismatch() {
        let a = SparseSymMatrix::identity(3).unwrap();
        assert!(matches!(a.spmv(&[1.0, 2.0]), Err(MatrixError::Dimension(_))));
    }

    #[test]
    fn rejects_asymmetric_and_duplicates() {
        let e = SparseSymMatrix::from_triplets(2, [(0, 1, c(1.0, 0.0))]).unwrap_err();
        assert!(matches!(e, MatrixError::NotSymmetric { .. }));
        let e = SparseSymMatrix::from_triplets(2, [(0, 1, c(1.0, 0.0)), (1, 0, c(2.0, 0.0))]).unwrap_err();
        assert!(matches!(e, MatrixError::NotSymmetric { .. }));
        let e = SparseSymMatrix::from_triplets(2, [(0, 0, c(1.0, 0.0)), (0, 0, c(1.0, 0.0))]).unwrap_err();
        assert!(matches!(e, MatrixError::Duplicate { .. }));
        let e = SparseSymMatrix::from_triplets(2, [(0, 2, c(1.0, 0.0))]).unwrap_err();
        assert!(matches!(e, MatrixError::OutOfRange { .. }));
        assert_eq!(SparseSymMatrix::from_triplets(0, []).unwrap_err(), MatrixError::Empty);
    }

    #[test]
    fn hermitian_is_not_symmetric() {
        let e = SparseSymMatrix::from_triplets(2, [(0, 1, c(0.0, 1.0)), (1, 0, c(0.0, -1.0))]).unwrap_err();
        assert!(matches!(e, MatrixError::NotSymmetric { .. }));
    }

    #[test]
    fn complex_matrix_refuses_real_path() {
        let a = SparseSymMatrix::from_triplets(1, [(0, 0, c(1.0, 1.0))]).unwrap();
        assert!(!a.is_real());
        assert_eq!(a.spmv(&[1.0]).unwrap_err(), MatrixError::ComplexOnRealPath);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn spmv_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10;
        let mut dense = vec![vec![c(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in i..n {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                dense[i][j] = z;
                dense[j][i] = z;
            }
        }
        let a = SparseSymMatrix::from_dense_fn(n, |i, j| dense[i][j]).unwrap();
        let v: Vec<C64> = (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let got = a.spmv(&v).unwrap();
        for (row, g) in dense.iter().zip(&got) {
            let want: C64 = row.iter().zip(&v).map(|(a, x)| a * x).sum();
            assert!((g - want).norm() <= 1e-14);
        }
    }

    #[test]
    fn real_and_complex_paths_agree_bitwise() {
        let a = SparseSymMatrix::from_mirrored_triplets(
            3,
            [(0, 0, c(2.5, 0.0)), (1, 0, c(-1.25, 0.0)), (2, 1, c(0.3, 0.0)), (2, 2, c(1.0, 0.0))],
        )
        .unwrap();
        let v = [0.7, -1.1, 3.3];
        let vc: Vec<C64> = v.iter().map(|&x| c(x, 0.0)).collect();
        let mut fr = FlopCounter::default();
        let mut fc = FlopCounter::default();
        let mut out_r = vec![0.0; 3];
        let mut out_c = vec![c(0.0, 0.0); 3];
        a.spmv_into(&v, &mut out_r, &mut fr).unwrap();
        a.spmv_into(&vc, &mut out_c, &mut fc).unwrap();
        for (r, z) in out_r.iter().zip(&out_c) {
            assert_eq!(r.to_bits(), z.re.to_bits());
            assert_eq!(z.im, 0.0);
        }
        assert_eq!((fr.matvec_real, fr.matvec_complex), (a.nnz() as u64, 0));
        assert_eq!((fc.matvec_real, fc.matvec_complex), (0, a.nnz() as u64));
    }

    #[test]
    fn csr_validation() {
        let ok = SparseSymMatrix::from_csr(
            2,
            vec![0, 2, 4],
            vec![0, 1, 0, 1],
            vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
        )
        .unwrap();
        assert_eq!(ok.get(1, 0), Some(c(2.0, 0.0)));
        let unsorted = SparseSymMatrix::from_csr(
            2,
            vec![0, 2, 4],
            vec![1, 0, 0, 1],
            vec![c(2.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
        );
        assert!(matches!(unsorted, Err(MatrixError::MalformedCsr(_))));
    }

    #[test]
    fn shifted_adds_missing_diagonal() {
        let a = SparseSymMatrix::from_mirrored_triplets(2, [(1, 0, c(1.0, 0.0))]).unwrap();
        let s = a.shifted(c(0.5, 0.25));
        assert_eq!(s.get(0, 0), Some(c(0.5, 0.25)));
        assert_eq!(s.get(1, 0), Some(c(1.0, 0.0)));
        assert!(!s.is_real());
    }
}
