#![allow(dead_code)]

use kaczmarz_accel::linalg::{DenseMatrix, RowMatrix};
use kaczmarz_accel::LinearSystemF64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.random_range(-1.0..=1.0)).collect()
}

/// Uniform entries in [-1, 1] plus `shift` on the diagonal, random solution.
pub fn random_system(n: usize, seed: u64, shift: f64) -> LinearSystemF64 {
    let mut r = rng(seed);
    let a = DenseMatrix::from_fn(n, n, |i, j| {
        let v: f64 = r.random_range(-1.0..=1.0);
        if i == j {
            v + shift
        } else {
            v
        }
    });
    let x = uniform_vec(&mut r, n);
    LinearSystemF64::with_solution(RowMatrix::dense(a).unwrap(), x).unwrap()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

/// Max-abs entry difference.
pub fn mat_diff(a: &DenseMatrix<f64>, b: &DenseMatrix<f64>) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
