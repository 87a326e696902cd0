#![allow(dead_code)]

use shiftkrylov::generator::{random_symmetric, random_vector};
use shiftkrylov::{SparseSymMatrix, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖x − y‖₂/‖y‖₂`.
pub fn rel_dist(x: &[C64], y: &[C64]) -> f64 {
    let d: Vec<C64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    norm(&d) / norm(y)
}

pub fn e1(n: usize) -> Vec<C64> {
    let mut b = vec![c(0.0, 0.0); n];
    b[0] = c(1.0, 0.0);
    b
}

/// Random complex symmetric test problem, diagonal centered at 3.
pub fn complex_problem(n: usize, seed: u64) -> (SparseSymMatrix, Vec<C64>) {
    (random_symmetric(n, seed, 1.0, 3.0), random_vector(n, seed ^ 0x5eed, false))
}

pub fn real_problem(n: usize, seed: u64) -> (SparseSymMatrix, Vec<C64>) {
    (random_symmetric(n, seed, 0.0, 3.0), random_vector(n, seed ^ 0x5eed, true))
}

pub fn real_symmetric_spd(n: usize, seed: u64) -> SparseSymMatrix {
    random_symmetric(n, seed, 0.0, 4.0)
}
