//! Classic test matrices, with exact solution `(1, ..., 1)` and `b = A x`.
//!
//! Entries use 1-based `i, j`:
//! * `parter`: `1 / (i - j + 1/2)`, dense Toeplitz.
//! * `clement`: zero diagonal, superdiagonal `i`, subdiagonal `N - i` (`i = 1 .. N-1`).
//! * `toeppen`: pentadiagonal Toeplitz with diagonals `(1, -10, 0, 10, 1)` at offsets `-2 ..= 2`.
//! * `lesp`: diagonal `-(5, 7, ..., 2N + 3)`, superdiagonal `2, ..., N`, subdiagonal `1/2, ..., 1/N`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;
use crate::linalg::matrix::{BandedMatrix, RowMatrix};
use crate::linalg::system::LinearSystem;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GalleryKind {
    Parter,
    Clement,
    Toeppen,
    Lesp,
}

impl GalleryKind {
    pub const ALL: [GalleryKind; 4] = [
        GalleryKind::Parter,
        GalleryKind::Clement,
        GalleryKind::Toeppen,
        GalleryKind::Lesp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GalleryKind::Parter => "parter",
            GalleryKind::Clement => "clement",
            GalleryKind::Toeppen => "toeppen",
            GalleryKind::Lesp => "lesp",
        }
    }
}

impl fmt::Display for GalleryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GalleryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GalleryKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown matrix kind `{s}`")))
    }
}

pub fn gallery_matrix<T: Scalar>(kind: GalleryKind, n: usize) -> Result<RowMatrix<T>> {
    if n < 2 {
        return Err(Error::Config(format!(
            "gallery order must be >= 2, got {n}"
        )));
    }
    let f = |v: f64| T::of(v);
    match kind {
        GalleryKind::Parter => RowMatrix::dense(DenseMatrix::from_fn(n, n, |i, j| {
            f(1.0 / (i as f64 - j as f64 + 0.5))
        })),
        GalleryKind::Clement => RowMatrix::banded(BandedMatrix::from_diagonals(
            n,
            &[-1, 1],
            &[
                (1..n).map(|i| f((n - i) as f64)).collect(),
                (1..n).map(|i| f(i as f64)).collect(),
            ],
        )),
        GalleryKind::Toeppen => {
            let offsets = [-2isize, -1, 0, 1, 2];
            let values = [1.0, -10.0, 0.0, 10.0, 1.0];
            let diagonals: Vec<Vec<T>> = offsets
                .iter()
                .zip(values)
                .map(|(&o, v)| vec![f(v); n.saturating_sub(o.unsigned_abs())])
                .collect();
            // N = 2 has no second diagonals.
            let (offsets, diagonals): (Vec<isize>, Vec<Vec<T>>) = offsets
                .into_iter()
                .zip(diagonals)
                .filter(|(o, _)| o.unsigned_abs() < n)
                .unzip();
            RowMatrix::banded(BandedMatrix::from_diagonals(n, &offsets, &diagonals))
        }
        GalleryKind::Lesp => RowMatrix::banded(BandedMatrix::from_diagonals(
            n,
            &[-1, 0, 1],
            &[
                (2..=n).map(|i| f(1.0 / i as f64)).collect(),
                (1..=n).map(|i| f(-(2.0 * i as f64 + 3.0))).collect(),
                (2..=n).map(|i| f(i as f64)).collect(),
            ],
        )),
    }
}

/// Gallery system with reference solution `(1, ..., 1)`.
pub fn build_gallery<T: Scalar>(kind: GalleryKind, n: usize) -> Result<LinearSystem<T>> {
    let matrix = gallery_matrix(kind, n)?;
    LinearSystem::with_solution(matrix, vec![T::one(); n])
}
