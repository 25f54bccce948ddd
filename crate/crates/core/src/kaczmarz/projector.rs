//! Explicit projection matrices of one sweep, for verification at small order.

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, LinearSystem};
use crate::scalar::{vecops, Scalar};

pub const PROJECTOR_GUARD: usize = 512;

/// `P_i = I - A alpha_i e_i^T`, `Q_i = I - alpha_i a_i^T` with `alpha_i = a_i / ||a_i||^2`,
/// and the sweep products `P = P_N ... P_1`, `Q = Q_N ... Q_1`.
#[derive(Debug, Clone)]
pub struct ProjectorSet<T> {
    a: DenseMatrix<T>,
    alphas: Vec<Vec<T>>,
    /// `A alpha_i`, the nontrivial column of `P_i`.
    a_alphas: Vec<Vec<T>>,
    pub p: DenseMatrix<T>,
    pub q: DenseMatrix<T>,
}

pub fn projector_oracle<T: Scalar>(system: &LinearSystem<T>) -> Result<ProjectorSet<T>> {
    let n = system.order();
    if n > PROJECTOR_GUARD {
        return Err(Error::Capability {
            what: "explicit projector assembly",
            n,
            limit: PROJECTOR_GUARD,
        });
    }
    let a = system.matrix().to_dense();
    let alphas: Vec<Vec<T>> = (0..n)
        .map(|i| vecops::scale(T::one() / system.row_norms_squared()[i], a.row(i)))
        .collect();
    let a_alphas: Vec<Vec<T>> = alphas.iter().map(|al| a.matvec(al)).collect();
    let mut set = ProjectorSet {
        p: DenseMatrix::identity(n),
        q: DenseMatrix::identity(n),
        a,
        alphas,
        a_alphas,
    };
    for i in 0..n {
        set.p = set.apply_p(i, &set.p);
        set.q = set.apply_q(i, &set.q);
    }
    Ok(set)
}

impl<T: Scalar> ProjectorSet<T> {
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn alpha(&self, i: usize) -> &[T] {
        &self.alphas[i]
    }

    pub fn p_i(&self, i: usize) -> DenseMatrix<T> {
        let n = self.order();
        let mut m = DenseMatrix::identity(n);
        let e = unit(n, i);
        m.rank_one_sub(&self.a_alphas[i], &e);
        m
    }

    pub fn q_i(&self, i: usize) -> DenseMatrix<T> {
        let mut m = DenseMatrix::identity(self.order());
        m.rank_one_sub(&self.alphas[i], self.a.row(i));
        m
    }

    /// `P_i M`
    fn apply_p(&self, i: usize, m: &DenseMatrix<T>) -> DenseMatrix<T> {
        let mut out = m.clone();
        out.rank_one_sub(&self.a_alphas[i], m.row(i));
        out
    }

    /// `Q_i M`
    fn apply_q(&self, i: usize, m: &DenseMatrix<T>) -> DenseMatrix<T> {
        let mut out = m.clone();
        let row = m.matvec_transpose(self.a.row(i));
        out.rank_one_sub(&self.alphas[i], &row);
        out
    }

    /// `Q^{(j)} = P_{j-1} ... P_1 P_N ... P_j` (1-based), mapping the residual after step
    /// `nN + j - 1` to the one after step `(n+1)N + j - 1`. Takes a 1-based `j`.
    pub fn shifted_residual_operator(&self, j: usize) -> Result<DenseMatrix<T>> {
        let n = self.order();
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
        let mut m = DenseMatrix::identity(n);
        for i in (j - 1..n).chain(0..j - 1) {
            m = self.apply_p(i, &m);
        }
        Ok(m)
    }

    /// `A^{-1} (I - P) b`, the constant term of `x_{n+1} = Q x_n + c`.
    pub fn sweep_offset(&self, b: &[T]) -> Result<Vec<T>> {
        let pb = self.p.matvec(b);
        self.a.solve(&vecops::sub(b, &pb))
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.a
    }
}

fn unit<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut e = vec![T::zero(); n];
    e[i] = T::one();
    e
}
