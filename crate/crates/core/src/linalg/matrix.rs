//! Square matrices with cheap row access, stored dense or banded.

use std::io::Write;

use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;
use crate::scalar::{vecops, Scalar};

/// Contiguous nonzero span of one matrix row: entries `values[t]` sit in column `start + t`.
#[derive(Debug, Clone, Copy)]
pub struct RowView<'a, T> {
    pub start: usize,
    pub values: &'a [T],
}

impl<T: Scalar> RowView<'_, T> {
    #[inline]
    pub fn dot(&self, x: &[T]) -> T {
        vecops::dot(self.values, &x[self.start..self.start + self.values.len()])
    }

    /// `x += alpha * row`
    #[inline]
    pub fn axpy_into(&self, alpha: T, x: &mut [T]) {
        vecops::axpy(
            alpha,
            self.values,
            &mut x[self.start..self.start + self.values.len()],
        );
    }

    #[inline]
    pub fn norm_squared(&self) -> T {
        vecops::dot(self.values, self.values)
    }

    pub fn to_dense(&self, n: usize) -> Vec<T> {
        let mut out = vec![T::zero(); n];
        out[self.start..self.start + self.values.len()].copy_from_slice(self.values);
        out
    }
}

/// Band storage: row `i` keeps columns `i - lower ..= i + upper`, zero padded at the edges.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix<T> {
    n: usize,
    lower: usize,
    upper: usize,
    data: Vec<T>,
}

impl<T: Scalar> BandedMatrix<T> {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        BandedMatrix {
            n,
            lower,
            upper,
            data: vec![T::zero(); n * (lower + upper + 1)],
        }
    }

    /// Builds from diagonals: `diagonals[d]` holds offset `offsets[d]`, entry `t` belonging to
    /// row `t` (superdiagonals) or row `t - offset` (subdiagonals).
    pub fn from_diagonals(n: usize, offsets: &[isize], diagonals: &[Vec<T>]) -> Self {
        let lower = offsets
            .iter()
            .map(|&o| (-o).max(0) as usize)
            .max()
            .unwrap_or(0);
        let upper = offsets
            .iter()
            .map(|&o| o.max(0) as usize)
            .max()
            .unwrap_or(0);
        let mut m = Self::zeros(n, lower, upper);
        for (&off, diag) in offsets.iter().zip(diagonals) {
            let len = n - off.unsigned_abs();
            assert_eq!(diag.len(), len, "diagonal {off} has wrong length");
            for (t, &v) in diag.iter().enumerate() {
                let (i, j) = if off >= 0 {
                    (t, t + off as usize)
                } else {
                    (t + off.unsigned_abs(), t)
                };
                m.set(i, j, v);
            }
        }
        m
    }

    fn width(&self) -> usize {
        self.lower + self.upper + 1
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.lower, self.upper)
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if j + self.lower < i || j > i + self.upper {
            None
        } else {
            Some(i * self.width() + (j + self.lower - i))
        }
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.slot(i, j).map_or(T::zero(), |s| self.data[s])
    }

    /// Panics when `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let s = self.slot(i, j).expect("entry outside band");
        self.data[s] = v;
    }

    pub fn row(&self, i: usize) -> RowView<'_, T> {
        let start = i.saturating_sub(self.lower);
        let end = (i + self.upper + 1).min(self.n);
        let base = i * self.width() + (start + self.lower - i);
        RowView {
            start,
            values: &self.data[base..base + (end - start)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StorageKind {
    Dense,
    Banded,
}

/// Square matrix with row access; the storage used by every solver in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum RowMatrix<T> {
    Dense(DenseMatrix<T>),
    Banded(BandedMatrix<T>),
}

impl<T: Scalar> RowMatrix<T> {
    pub fn dense(m: DenseMatrix<T>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::Config(format!(
                "matrix must be square of order >= 1, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(RowMatrix::Dense(m))
    }

    pub fn banded(m: BandedMatrix<T>) -> Result<Self> {
        if m.n == 0 {
            return Err(Error::Config("matrix order must be >= 1".into()));
        }
        Ok(RowMatrix::Banded(m))
    }

    pub fn order(&self) -> usize {
        match self {
            RowMatrix::Dense(m) => m.nrows(),
            RowMatrix::Banded(m) => m.n,
        }
    }

    pub fn storage(&self) -> StorageKind {
        match self {
            RowMatrix::Dense(_) => StorageKind::Dense,
            RowMatrix::Banded(_) => StorageKind::Banded,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        match self {
            RowMatrix::Dense(m) => m[(i, j)],
            RowMatrix::Banded(m) => m.get(i, j),
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> RowView<'_, T> {
        match self {
            RowMatrix::Dense(m) => RowView {
                start: 0,
                values: m.row(i),
            },
            RowMatrix::Banded(m) => m.row(i),
        }
    }

    /// The row as a full-length column vector (the `a_i` of the projection formulas).
    pub fn row_vector(&self, i: usize) -> Vec<T> {
        self.row(i).to_dense(self.order())
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        match self {
            RowMatrix::Dense(m) => m.clone(),
            RowMatrix::Banded(_) => {
                let n = self.order();
                DenseMatrix::from_fn(n, n, |i, j| self.get(i, j))
            }
        }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        (0..self.order()).map(|i| self.row(i).dot(x)).collect()
    }

    /// `A^T y`
    pub fn matvec_transpose(&self, y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.order()];
        for (i, &yi) in y.iter().enumerate() {
            self.row(i).axpy_into(yi, &mut out);
        }
        out
    }

    pub fn row_norms(&self) -> Vec<T> {
        (0..self.order())
            .map(|i| self.row(i).norm_squared().sqrt())
            .collect()
    }

    /// Multiplies row `i` by `factors[i]`, keeping the storage kind.
    pub fn scale_rows(&self, factors: &[T]) -> Self {
        match self {
            RowMatrix::Dense(m) => {
                let mut m = m.clone();
                for (i, &f) in factors.iter().enumerate() {
                    for v in m.row_mut(i) {
                        *v *= f;
                    }
                }
                RowMatrix::Dense(m)
            }
            RowMatrix::Banded(m) => {
                let mut m = m.clone();
                let w = m.width();
                for (i, &f) in factors.iter().enumerate() {
                    for v in &mut m.data[i * w..(i + 1) * w] {
                        *v *= f;
                    }
                }
                RowMatrix::Banded(m)
            }
        }
    }

    /// One row per line, space separated, 17 significant digits.
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let n = self.order();
        for i in 0..n {
            let line: Vec<String> = (0..n)
                .map(|j| format!("{:.16e}", self.get(i, j).to_f64_lossy()))
                .collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(n: usize) -> BandedMatrix<f64> {
        BandedMatrix::from_diagonals(
            n,
            &[-1, 0, 1],
            &[
                (0..n - 1).map(|t| 10.0 + t as f64).collect(),
                (0..n).map(|t| -(t as f64) - 1.0).collect(),
                (0..n - 1).map(|t| 0.5 * t as f64 + 0.25).collect(),
            ],
        )
    }

    #[test]
    fn banded_rows_match_dense_assembly() {
        let m = RowMatrix::banded(tridiag(6)).unwrap();
        let d = m.to_dense();
        for i in 0..6 {
            assert_eq!(m.row_vector(i), d.row(i).to_vec());
        }
        assert_eq!(m.get(3, 2), 12.0);
        assert_eq!(m.get(3, 4), 1.75);
        assert_eq!(m.get(0, 5), 0.0);
    }

    #[test]
    fn edge_rows_are_clipped() {
        let m = tridiag(4);
        let first = m.row(0);
        assert_eq!((first.start, first.values.len()), (0, 2));
        let last = m.row(3);
        assert_eq!((last.start, last.values.len()), (2, 2));
    }

    #[test]
    fn transpose_product_agrees_with_dense() {
        let m = RowMatrix::banded(tridiag(5)).unwrap();
        let y = [1.0, -1.0, 2.0, 0.5, 3.0];
        assert_eq!(m.matvec_transpose(&y), m.to_dense().matvec_transpose(&y));
    }

    #[test]
    fn text_dump_has_one_line_per_row() {
        let m = RowMatrix::banded(tridiag(3)).unwrap();
        let mut buf = Vec::new();
        m.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<Vec<f64>> = text
            .lines()
            .map(|l| l.split(' ').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1], vec![10.0, -2.0, 0.75]);
    }

    #[test]
    fn rejects_non_square() {
        assert!(RowMatrix::dense(DenseMatrix::<f64>::zeros(2, 3)).is_err());
    }
}
