use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, LinearSystem};
use crate::scalar::{vecops, Scalar};

pub const SPECTRAL_GUARD: usize = 4096;
/// Largest order for which the Krylov degree of the initial error is estimated.
pub const KRYLOV_GUARD: usize = 512;

#[derive(Debug, Clone)]
pub struct SpectralDiagnostics {
    /// Eigenvalues `tau_i` of the sweep matrix `Q`, by decreasing modulus.
    pub eigenvalues: Vec<Complex<f64>>,
    pub spectral_radius: f64,
    /// `1 - (det A)^2 / prod ||a_i||^2`
    pub meany_constant: f64,
    /// 2-norm condition number of `A`.
    pub condition_number: f64,
    /// Degree of the minimal polynomial of `Q` for `x - x_0` with `x_0 = 0`; needs a reference
    /// solution and `N <= KRYLOV_GUARD`.
    pub krylov_degree: Option<usize>,
}

impl SpectralDiagnostics {
    pub fn moduli(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.norm()).collect()
    }
}

/// `Q x` for the homogeneous system: one sweep with `b = 0`.
pub fn apply_q<T: Scalar>(system: &LinearSystem<T>, x: &mut [T]) {
    let m = system.matrix();
    for i in 0..system.order() {
        let row = m.row(i);
        row.axpy_into(-row.dot(x) / system.row_norms_squared()[i], x);
    }
}

/// The sweep matrix `Q = Q_N ... Q_1`, column by column.
pub fn iteration_matrix<T: Scalar>(system: &LinearSystem<T>) -> DenseMatrix<T> {
    let n = system.order();
    let cols: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            apply_q(system, &mut e);
            e
        })
        .collect();
    DenseMatrix::from_columns(&cols)
}

pub fn spectral_diagnostics<T: Scalar>(system: &LinearSystem<T>) -> Result<SpectralDiagnostics> {
    spectral_diagnostics_with_guard(system, SPECTRAL_GUARD)
}

pub fn spectral_diagnostics_with_guard<T: Scalar>(
    system: &LinearSystem<T>,
    guard: usize,
) -> Result<SpectralDiagnostics> {
    let n = system.order();
    if n > guard {
        return Err(Error::Capability {
            what: "dense spectral diagnostics",
            n,
            limit: guard,
        });
    }
    let q = iteration_matrix(system);
    let qf = DMatrix::from_fn(n, n, |i, j| q[(i, j)].to_f64_lossy());
    let mut eigenvalues: Vec<Complex<f64>> = qf.complex_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let spectral_radius = eigenvalues.first().map_or(0.0, |z| z.norm());

    let a = system.matrix().to_dense();
    let af = DMatrix::from_fn(n, n, |i, j| a[(i, j)].to_f64_lossy());
    let log_prod: f64 = system
        .row_norms()
        .iter()
        .map(|r| r.to_f64_lossy().ln())
        .sum();
    let meany_constant = if af.clone().lu().determinant() == 0.0 {
        1.0
    } else {
        let log_det = log_abs_det(&af);
        1.0 - (2.0 * (log_det - log_prod)).exp()
    };
    let sv = af.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition_number = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };

    let krylov_degree = match system.solution() {
        Some(x) if n <= KRYLOV_GUARD => Some(krylov_degree(system, x, 1e-10)),
        _ => None,
    };
    Ok(SpectralDiagnostics {
        eigenvalues,
        spectral_radius,
        meany_constant,
        condition_number,
        krylov_degree,
    })
}

/// `log |det A|` from the LU diagonal, so large orders do not overflow.
fn log_abs_det(a: &DMatrix<f64>) -> f64 {
    let lu = a.clone().lu();
    let u = lu.u();
    (0..u.nrows()).map(|i| u[(i, i)].abs().ln()).sum()
}

/// Dimension of the Krylov space `span{v, Qv, Q^2 v, ...}`: the degree of the minimal
/// polynomial of `Q` for `v`. A new direction counts when its component orthogonal to the
/// previous ones exceeds `tol` times its norm.
pub fn krylov_degree<T: Scalar>(system: &LinearSystem<T>, v: &[T], tol: f64) -> usize {
    let n = system.order();
    let mut basis: Vec<Vec<T>> = Vec::new();
    let mut w = v.to_vec();
    for _ in 0..=n {
        let norm = vecops::norm(&w);
        if norm == T::zero() {
            break;
        }
        let mut u = w.clone();
        // Two passes of Gram-Schmidt.
        for _ in 0..2 {
            for q in &basis {
                let c = vecops::dot(q, &u);
                vecops::axpy(-c, q, &mut u);
            }
        }
        let rest = vecops::norm(&u);
        if rest.to_f64_lossy() <= tol * norm.to_f64_lossy() {
            break;
        }
        basis.push(vecops::scale(T::one() / rest, &u));
        apply_q(system, &mut w);
    }
    basis.len()
}
