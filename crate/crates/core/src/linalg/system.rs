use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::matrix::RowMatrix;
use crate::scalar::{vecops, Scalar};

/// Square system `A x = b`, optionally carrying the exact solution for error tracking.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<T> {
    matrix: RowMatrix<T>,
    rhs: Vec<T>,
    solution: Option<Vec<T>>,
    row_norms: Vec<T>,
    row_norms_sq: Vec<T>,
    preconditioned: bool,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn new(matrix: RowMatrix<T>, rhs: Vec<T>, solution: Option<Vec<T>>) -> Result<Self> {
        let n = matrix.order();
        if rhs.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: rhs.len(),
            });
        }
        if let Some(s) = &solution {
            if s.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: s.len(),
                });
            }
        }
        let row_norms = matrix.row_norms();
        if let Some(i) = row_norms.iter().position(|&r| !(r > T::zero())) {
            return Err(Error::Singular(format!("row {i} has zero norm")));
        }
        let row_norms_sq = squared_norms(&matrix);
        Ok(LinearSystem {
            matrix,
            rhs,
            solution,
            row_norms,
            row_norms_sq,
            preconditioned: false,
        })
    }

    /// System with right-hand side `b = A x` for the given exact solution.
    pub fn with_solution(matrix: RowMatrix<T>, solution: Vec<T>) -> Result<Self> {
        let rhs = matrix.matvec(&solution);
        Self::new(matrix, rhs, Some(solution))
    }

    pub fn order(&self) -> usize {
        self.matrix.order()
    }

    pub fn matrix(&self) -> &RowMatrix<T> {
        &self.matrix
    }

    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }

    pub fn solution(&self) -> Option<&[T]> {
        self.solution.as_deref()
    }

    pub fn row_norms(&self) -> &[T] {
        &self.row_norms
    }

    /// `||a_i||^2`, summed directly rather than squared from `row_norms`.
    pub fn row_norms_squared(&self) -> &[T] {
        &self.row_norms_sq
    }

    pub fn is_preconditioned(&self) -> bool {
        self.preconditioned
    }

    pub fn residual(&self, x: &[T]) -> Vec<T> {
        vecops::sub(&self.rhs, &self.matrix.matvec(x))
    }

    /// `||x - x_ref||`, when the reference solution is known.
    pub fn error_norm(&self, x: &[T]) -> Option<T> {
        self.solution.as_deref().map(|s| vecops::dist(s, x))
    }

    /// `||x - x_ref|| / ||x_ref||`
    pub fn relative_error(&self, x: &[T]) -> Option<T> {
        self.solution
            .as_deref()
            .map(|s| vecops::dist(s, x) / vecops::norm(s))
    }

    /// Scales every row to unit norm, `D A x = D b` with `D = diag(1 / ||a_i||)`.
    pub fn precondition_rows(&self) -> Result<Self> {
        if let Some(i) = self.row_norms.iter().position(|&r| !(r > T::zero())) {
            return Err(Error::Singular(format!("row {i} has zero norm")));
        }
        let factors: Vec<T> = self.row_norms.iter().map(|&r| T::one() / r).collect();
        let matrix = self.matrix.scale_rows(&factors);
        let rhs = self
            .rhs
            .iter()
            .zip(&factors)
            .map(|(&b, &f)| b * f)
            .collect();
        let row_norms = matrix.row_norms();
        let row_norms_sq = squared_norms(&matrix);
        Ok(LinearSystem {
            matrix,
            rhs,
            solution: self.solution.clone(),
            row_norms,
            row_norms_sq,
            preconditioned: true,
        })
    }

    /// Replaces `b` by `b + delta ||b|| u / sqrt(N)` with `u ~ N(0, I)` from a seeded generator.
    /// The reference solution is kept, so errors keep measuring the distance to the clean solution.
    pub fn add_noise(&self, spec: &NoiseSpec) -> Result<Self> {
        if !(spec.amplitude >= 0.0) || !spec.amplitude.is_finite() {
            return Err(Error::Config(format!(
                "noise amplitude must be a non-negative number, got {}",
                spec.amplitude
            )));
        }
        if spec.amplitude == 0.0 {
            return Ok(self.clone());
        }
        let n = self.order();
        let scale = spec.amplitude * vecops::norm(&self.rhs).to_f64_lossy() / (n as f64).sqrt();
        let mut out = self.clone();
        for (b, u) in out.rhs.iter_mut().zip(spec.deviates(n)) {
            *b += T::of(scale * u);
        }
        Ok(out)
    }
}

fn squared_norms<T: Scalar>(m: &RowMatrix<T>) -> Vec<T> {
    (0..m.order()).map(|i| m.row(i).norm_squared()).collect()
}

/// White noise added to the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub amplitude: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(amplitude: f64, seed: u64) -> Self {
        NoiseSpec { amplitude, seed }
    }

    /// Standard normal deviates `u`, deterministic per seed.
    pub fn deviates(&self, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }
}
