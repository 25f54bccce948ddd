//! Small dense matrices: pivoted LU and Householder QR.
//!
//! These back the coefficient systems of the transformations (order k + 1),
//! the block pseudoinverses, and the verification-scale projector oracle.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{vecops, Scalar};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    nrows: usize,
    ncols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMatrix {
            nrows,
            ncols,
            data: vec![T::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { nrows, ncols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        DenseMatrix {
            nrows,
            ncols,
            data: rows.concat(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        Self::from_fn(nrows, ncols, |i, j| cols[j][i])
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.nrows).map(|i| self[(i, j)]).collect()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)])
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows)
            .map(|i| vecops::dot(self.row(i), x))
            .collect()
    }

    /// `self^T x`
    pub fn matvec_transpose(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.nrows);
        let mut out = vec![T::zero(); self.ncols];
        for (i, &xi) in x.iter().enumerate() {
            vecops::axpy(xi, self.row(i), &mut out);
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ncols, rhs.nrows);
        let mut out = Self::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            let out_row = &mut out.data[i * rhs.ncols..(i + 1) * rhs.ncols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a != T::zero() {
                    vecops::axpy(a, rhs.row(k), out_row);
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        DenseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: vecops::sub(&self.data, &rhs.data),
        }
    }

    pub fn scaled(&self, alpha: T) -> Self {
        DenseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: vecops::scale(alpha, &self.data),
        }
    }

    /// In-place `self -= u v^T`.
    pub fn rank_one_sub(&mut self, u: &[T], v: &[T]) {
        assert_eq!((u.len(), v.len()), (self.nrows, self.ncols));
        for (i, &ui) in u.iter().enumerate() {
            if ui != T::zero() {
                vecops::axpy(-ui, v, self.row_mut(i));
            }
        }
    }

    pub fn frobenius_norm(&self) -> T {
        vecops::norm(&self.data)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        (0..self.ncols)
            .map(|j| (0..self.nrows).map(|i| self[(i, j)].abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn lu(&self) -> Result<Lu<T>> {
        Lu::new(self.clone())
    }

    pub fn qr(&self) -> Qr<T> {
        Qr::new(self)
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        Ok(self.lu()?.solve(b))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(self.lu()?.inverse())
    }

    /// One-norm condition number computed from the explicit inverse; meant for small matrices.
    pub fn condition_one(&self) -> T {
        match self.lu() {
            Ok(lu) => self.norm_one() * lu.inverse().norm_one(),
            Err(_) => T::infinity(),
        }
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.ncols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.ncols + j]
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    factors: DenseMatrix<T>,
    perm: Vec<usize>,
    sign: T,
}

impl<T: Scalar> Lu<T> {
    fn new(mut a: DenseMatrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension {
                expected: a.nrows,
                got: a.ncols,
            });
        }
        let n = a.nrows;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = T::one();
        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, a[(i, k)].abs()))
                    .fold(
                        (k, -T::one()),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot == T::zero() || !pivot.is_finite() {
                return Err(Error::Singular(format!("zero pivot in column {k}")));
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let factor = a[(i, k)] / pivot;
                a[(i, k)] = factor;
                if factor != T::zero() {
                    for j in k + 1..n {
                        let v = a[(k, j)];
                        a[(i, j)] -= factor * v;
                    }
                }
            }
        }
        Ok(Lu {
            factors: a,
            perm,
            sign,
        })
    }

    pub fn order(&self) -> usize {
        self.factors.nrows
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.order();
        assert_eq!(b.len(), n);
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s = (0..i).fold(T::zero(), |acc, j| acc + self.factors[(i, j)] * x[j]);
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s = (i + 1..n).fold(T::zero(), |acc, j| acc + self.factors[(i, j)] * x[j]);
            x[i] = (x[i] - s) / self.factors[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> DenseMatrix<T> {
        let n = self.order();
        let cols: Vec<Vec<T>> = (0..n)
            .map(|j| {
                let mut e = vec![T::zero(); n];
                e[j] = T::one();
                self.solve(&e)
            })
            .collect();
        DenseMatrix::from_columns(&cols)
    }

    pub fn det(&self) -> T {
        (0..self.order()).fold(self.sign, |acc, i| acc * self.factors[(i, i)])
    }

    /// `ln |det|`, safe against overflow for large orders.
    pub fn log_abs_det(&self) -> T {
        (0..self.order())
            .map(|i| self.factors[(i, i)].abs().ln())
            .sum()
    }
}

/// Thin Householder QR of an `m x n` matrix with `m >= n`.
#[derive(Debug, Clone)]
pub struct Qr<T> {
    /// `m x n`, orthonormal columns.
    pub q: DenseMatrix<T>,
    /// `n x n`, upper triangular.
    pub r: DenseMatrix<T>,
}

impl<T: Scalar> Qr<T> {
    fn new(a: &DenseMatrix<T>) -> Self {
        let (m, n) = (a.nrows, a.ncols);
        assert!(m >= n, "thin QR needs at least as many rows as columns");
        let mut work = a.clone();
        let mut reflectors: Vec<Vec<T>> = Vec::with_capacity(n);
        for k in 0..n {
            let x: Vec<T> = (k..m).map(|i| work[(i, k)]).collect();
            let alpha = vecops::norm(&x);
            let mut v = x;
            let s = if v[0] >= T::zero() {
                T::one()
            } else {
                -T::one()
            };
            v[0] += s * alpha;
            let vnorm = vecops::norm(&v);
            if vnorm > T::zero() {
                for vi in &mut v {
                    *vi /= vnorm;
                }
                for j in k..n {
                    let proj = (k..m).fold(T::zero(), |acc, i| acc + v[i - k] * work[(i, j)]);
                    for i in k..m {
                        work[(i, j)] -= T::of(2.0) * v[i - k] * proj;
                    }
                }
            }
            reflectors.push(v);
        }
        let r = DenseMatrix::from_fn(n, n, |i, j| if j >= i { work[(i, j)] } else { T::zero() });
        // Accumulate Q = H_0 H_1 ... H_{n-1} applied to the first n columns of I.
        let mut q = DenseMatrix::from_fn(m, n, |i, j| if i == j { T::one() } else { T::zero() });
        for k in (0..n).rev() {
            let v = &reflectors[k];
            for j in 0..n {
                let proj = (k..m).fold(T::zero(), |acc, i| acc + v[i - k] * q[(i, j)]);
                for i in k..m {
                    q[(i, j)] -= T::of(2.0) * v[i - k] * proj;
                }
            }
        }
        Qr { q, r }
    }

    /// Smallest `|r_jj| / max |r_jj|`; a rank estimate for the column space.
    pub fn diagonal_ratio(&self) -> T {
        let n = self.r.nrows;
        let diag: Vec<T> = (0..n).map(|i| self.r[(i, i)].abs()).collect();
        let max = diag.iter().copied().fold(T::zero(), T::max);
        if max == T::zero() {
            return T::zero();
        }
        diag.iter().copied().fold(T::infinity(), T::min) / max
    }

    /// Solves `R^T y = b` (forward substitution).
    pub fn solve_rt(&self, b: &[T]) -> Vec<T> {
        let n = self.r.nrows;
        let mut y = b.to_vec();
        for i in 0..n {
            let s = (0..i).fold(T::zero(), |acc, j| acc + self.r[(j, i)] * y[j]);
            y[i] = (y[i] - s) / self.r[(i, i)];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample() -> DenseMatrix<f64> {
        DenseMatrix::from_rows(&[
            vec![4.0, -2.0, 1.0],
            vec![3.0, 6.0, -4.0],
            vec![2.0, 1.0, 8.0],
        ])
    }

    #[test]
    fn lu_solves_and_inverts() {
        let a = sample();
        let x = vec![1.0, -2.0, 0.5];
        let b = a.matvec(&x);
        let got = a.solve(&b).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert_relative_eq!(*g, *e, epsilon = 1e-14);
        }
        let prod = a.matmul(&a.inverse().unwrap());
        assert!(prod.sub(&DenseMatrix::identity(3)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        // 4(48+4) + 2(24+8) + 1(3-12) = 208 + 64 - 9
        let lu = sample().lu().unwrap();
        assert_relative_eq!(lu.det(), 263.0, epsilon = 1e-12);
        assert_relative_eq!(lu.log_abs_det(), 263f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = DenseMatrix::from_rows(&[vec![1.0f64, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(a.lu(), Err(Error::Singular(_))));
        assert!(a.condition_one().is_infinite());
    }

    #[test]
    fn qr_reconstructs_tall_matrix() {
        let a = DenseMatrix::from_rows(&[
            vec![1.0, 2.0],
            vec![0.0, 1.0],
            vec![1.0, -1.0],
            vec![3.0, 0.5],
        ]);
        let qr = a.qr();
        assert!(qr.q.matmul(&qr.r).sub(&a).frobenius_norm() < 1e-14);
        let qtq = qr.q.transpose().matmul(&qr.q);
        assert!(qtq.sub(&DenseMatrix::identity(2)).frobenius_norm() < 1e-14);
        assert!(qr.diagonal_ratio() > 0.1);
    }

    #[test]
    fn qr_flags_dependent_columns() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]);
        assert!(a.qr().diagonal_ratio() < 1e-14);
    }
}
