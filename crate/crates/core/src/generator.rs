//! Seeded synthetic matrices for benchmarks and tests.
//!
//! All generators draw from ChaCha8 seeded with `seed`, in a fixed entry
//! order, so the same arguments give bit-identical matrices on every
//! platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scalar::C64;
use crate::sparse::SparseSymMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("bandwidth must satisfy 1 <= bandwidth < n, got {bandwidth} for n = {n}")]
    Bandwidth { n: usize, bandwidth: usize },
    #[error("dominance must be finite and nonnegative, got {0}")]
    Dominance(f64),
}

/// Banded symmetric stand-in for a tight-binding Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    pub n: usize,
    pub bandwidth: usize,
    pub seed: u64,
    /// Real symmetric if set, otherwise complex symmetric.
    pub real: bool,
    /// Adds `dominance·Σ_{j≠i}|a_ij|` to each diagonal entry.
    pub dominance: f64,
    /// Center of the diagonal distribution.
    pub center: f64,
}

impl HamiltonianSpec {
    pub fn new(n: usize, bandwidth: usize, seed: u64) -> Self {
        Self { n, bandwidth, seed, real: true, dominance: 0.0, center: -0.6 }
    }

    /// Diagonal `center + U(−1, 1)`, band entries `U(−h, h)` with
    /// `h = 0.5/√bandwidth`, which keeps the spectrum width near 4
    /// independent of the bandwidth. The complex variant adds imaginary
    /// parts of a tenth of that amplitude.
    ///
    /// With the default center of `−0.6` the upper spectral edge lies in
    /// `[0.4, 1.4]`, so a sweep of `σI − H` over that window crosses from
    /// near-singular systems into well-separated ones.
    pub fn generate(&self) -> Result<SparseSymMatrix, GeneratorError> {
        let (n, bw) = (self.n, self.bandwidth);
        if n < 2 {
            return Err(GeneratorError::Dimension(n));
        }
        if bw == 0 || bw >= n {
            return Err(GeneratorError::Bandwidth { n, bandwidth: bw });
        }
        if !(self.dominance >= 0.0 && self.dominance.is_finite()) {
            return Err(GeneratorError::Dominance(self.dominance));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let h = 0.5 / (bw as f64).sqrt();
        let draw = |amp: f64, rng: &mut ChaCha8Rng| {
            let re = rng.random_range(-amp..amp);
            let im = if self.real { 0.0 } else { rng.random_range(-0.1 * amp..0.1 * amp) };
            C64::new(re, im)
        };
        let mut diag = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n * bw);
        for i in 0..n {
            diag.push(C64::new(self.center, 0.0) + draw(1.0, &mut rng));
            for j in i + 1..(i + bw + 1).min(n) {
                upper.push((i, j, draw(h, &mut rng)));
            }
        }
        if self.dominance > 0.0 {
            let mut radius = vec![0.0; n];
            for &(i, j, v) in &upper {
                radius[i] += v.norm();
                radius[j] += v.norm();
            }
            for (d, r) in diag.iter_mut().zip(radius) {
                *d += self.dominance * r;
            }
        }
        let entries = diag.into_iter().enumerate().map(|(i, d)| (i, i, d)).chain(upper);
        Ok(SparseSymMatrix::from_mirrored_triplets(n, entries).expect("band pattern is valid"))
    }
}

pub fn generate_hamiltonian_analog(
    n: usize,
    bandwidth: usize,
    seed: u64,
    real: bool,
) -> Result<SparseSymMatrix, GeneratorError> {
    HamiltonianSpec { real, ..HamiltonianSpec::new(n, bandwidth, seed) }.generate()
}

/// Dense random symmetric matrix `D + E`: diagonal `D = diag + U(−1, 1)`,
/// `E` with entries `(U(−1,1) + i·imag·U(−1,1))/√n`. `imag = 0` gives a real
/// symmetric matrix.
pub fn random_symmetric(n: usize, seed: u64, imag: f64, diag: f64) -> SparseSymMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = 1.0 / (n as f64).sqrt();
    let mut entries = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in 0..=i {
            let re = rng.random_range(-1.0..1.0) * s;
            let im = if imag == 0.0 { 0.0 } else { imag * rng.random_range(-1.0..1.0) * s };
            let mut v = C64::new(re, im);
            if i == j {
                v += diag + rng.random_range(-1.0..1.0);
            }
            entries.push((i, j, v));
        }
    }
    SparseSymMatrix::from_mirrored_triplets(n, entries).expect("dense pattern is valid")
}

/// Random vector with entries `U(−1,1) + iU(−1,1)` (imaginary part zero when `real`).
pub fn random_vector(n: usize, seed: u64, real: bool) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let re = rng.random_range(-1.0..1.0);
            let im = if real { 0.0 } else { rng.random_range(-1.0..1.0) };
            C64::new(re, im)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_is_symmetric_and_deterministic() {
        let a = generate_hamiltonian_analog(4, 1, 7, true).unwrap();
        let b = generate_hamiltonian_analog(4, 1, 7, true).unwrap();
        assert_eq!(a, b);
        assert!(a.is_real());
        for (i, j, v) in a.iter() {
            assert!(i.abs_diff(j) <= 1);
            assert_eq!(a.get(j, i), Some(v));
        }
        assert_eq!(a.nnz(), 4 + 2 * 3);
    }

    #[test]
    fn density_regime() {
        let a = generate_hamiltonian_analog(512, 34, 1, true).unwrap();
        assert!(a.nnz() >= 512 && a.nnz() <= 512 * 69);
    }

    #[test]
    fn seeds_differ() {
        let a = generate_hamiltonian_analog(16, 3, 1, true).unwrap();
        let b = generate_hamiltonian_analog(16, 3, 2, true).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn invalid_arguments() {
        assert_eq!(generate_hamiltonian_analog(1, 1, 0, true), Err(GeneratorError::Dimension(1)));
        assert!(matches!(generate_hamiltonian_analog(4, 4, 0, true), Err(GeneratorError::Bandwidth { .. })));
        assert!(matches!(generate_hamiltonian_analog(4, 0, 0, true), Err(GeneratorError::Bandwidth { .. })));
        let spec = HamiltonianSpec { dominance: -1.0, ..HamiltonianSpec::new(4, 1, 0) };
        assert!(spec.generate().is_err());
    }

    #[test]
    fn complex_variant_is_complex_symmetric() {
        let a = generate_hamiltonian_analog(8, 2, 3, false).unwrap();
        assert!(!a.is_real());
        for (i, j, v) in a.iter() {
            assert_eq!(a.get(j, i), Some(v));
        }
    }
}
