use std::ops::Range;

use crate::error::{Error, Result};
use crate::kaczmarz::sweep::check_len;
use crate::linalg::{DenseMatrix, LinearSystem, Qr};
use crate::scalar::{vecops, Scalar};

/// Contiguous row blocks `N_1, ..., N_m` covering `0 .. N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    sizes: Vec<usize>,
}

impl BlockPartition {
    pub fn new(sizes: Vec<usize>, n: usize) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::Config("block sizes must be positive".into()));
        }
        let total: usize = sizes.iter().sum();
        if total != n {
            return Err(Error::Config(format!(
                "block sizes sum to {total}, system order is {n}"
            )));
        }
        Ok(BlockPartition { sizes })
    }

    pub fn singletons(n: usize) -> Self {
        BlockPartition { sizes: vec![1; n] }
    }

    /// Blocks of `size` rows; the last one takes the remainder.
    pub fn uniform(n: usize, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Config("block size must be positive".into()));
        }
        let mut sizes = vec![size; n / size];
        if !n.is_multiple_of(size) {
            sizes.push(n % size);
        }
        Self::new(sizes, n)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.sizes
            .iter()
            .map(|&s| {
                let r = start..start + s;
                start += s;
                r
            })
            .collect()
    }
}

/// Block Kaczmarz with each block `A_i` (`N x N_i`, columns = the block's rows) factored once.
///
/// The update `p += (A_i^T)^+ (b_i - A_i^T p)` is evaluated as `Q_i R_i^{-T} (b_i - A_i^T p)`.
#[derive(Debug, Clone)]
pub struct BlockKaczmarz<T> {
    ranges: Vec<Range<usize>>,
    factors: Vec<Qr<T>>,
}

/// Blocks whose `R` diagonal ratio falls below this are treated as rank deficient.
const RANK_TOL: f64 = 1e-12;

impl<T: Scalar> BlockKaczmarz<T> {
    pub fn new(system: &LinearSystem<T>, partition: &BlockPartition) -> Result<Self> {
        let n = system.order();
        if partition.sizes().iter().sum::<usize>() != n {
            return Err(Error::Config("partition does not cover the system".into()));
        }
        let ranges = partition.ranges();
        let mut factors = Vec::with_capacity(ranges.len());
        for (k, r) in ranges.iter().enumerate() {
            let cols: Vec<Vec<T>> = r.clone().map(|i| system.matrix().row_vector(i)).collect();
            let qr = DenseMatrix::from_columns(&cols).qr();
            let ratio = qr.diagonal_ratio();
            if !(ratio > T::of(RANK_TOL)) {
                return Err(Error::Singular(format!(
                    "block {k} (rows {}..{}) is rank deficient (diagonal ratio {:e})",
                    r.start,
                    r.end,
                    ratio.to_f64_lossy()
                )));
            }
            factors.push(qr);
        }
        Ok(BlockKaczmarz { ranges, factors })
    }

    pub fn sweep_in_place(&self, system: &LinearSystem<T>, p: &mut [T]) {
        let matrix = system.matrix();
        for (r, qr) in self.ranges.iter().zip(&self.factors) {
            let res: Vec<T> = r
                .clone()
                .map(|i| system.rhs()[i] - matrix.row(i).dot(p))
                .collect();
            let y = qr.solve_rt(&res);
            let update = qr.q.matvec(&y);
            vecops::axpy(T::one(), &update, p);
        }
    }

    pub fn sweep(&self, system: &LinearSystem<T>, x: &[T]) -> Result<Vec<T>> {
        check_len(system.order(), x)?;
        let mut out = x.to_vec();
        self.sweep_in_place(system, &mut out);
        Ok(out)
    }
}

/// One block sweep; factors the blocks on every call; use [`BlockKaczmarz`] for repeated sweeps.
pub fn block_sweep<T: Scalar>(
    system: &LinearSystem<T>,
    partition: &BlockPartition,
    x: &[T],
) -> Result<Vec<T>> {
    BlockKaczmarz::new(system, partition)?.sweep(system, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kaczmarz::sweep::sweep;
    use crate::linalg::RowMatrix;

    fn sample() -> LinearSystem<f64> {
        let a = DenseMatrix::from_rows(&[
            vec![4.0, 1.0, 0.0, 0.5],
            vec![1.0, 3.0, -1.0, 0.0],
            vec![0.0, -1.0, 5.0, 2.0],
            vec![0.5, 0.0, 2.0, 6.0],
        ]);
        LinearSystem::with_solution(RowMatrix::dense(a).unwrap(), vec![1.0, -2.0, 0.5, 3.0])
            .unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(BlockPartition::new(vec![2, 1], 4).is_err());
        assert!(BlockPartition::new(vec![2, 0, 2], 4).is_err());
        let p = BlockPartition::uniform(7, 3).unwrap();
        assert_eq!(p.sizes(), &[3, 3, 1]);
        assert_eq!(p.ranges()[2], 6..7);
    }

    #[test]
    fn singleton_blocks_reproduce_sweep() {
        let s = sample();
        let x0 = [0.3, -0.1, 2.0, 1.0];
        let a = block_sweep(&s, &BlockPartition::singletons(4), &x0).unwrap();
        let b = sweep(&s, &x0).unwrap();
        assert!(vecops::dist(&a, &b) <= 1e-13);
    }

    #[test]
    fn full_block_solves() {
        let s = sample();
        let x = block_sweep(&s, &BlockPartition::new(vec![4], 4).unwrap(), &[0.0; 4]).unwrap();
        assert!(s.error_norm(&x).unwrap() <= 1e-12);
    }

    #[test]
    fn dependent_rows_name_the_block() {
        let a = DenseMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![1.0, 2.0, 0.0],
            vec![2.0, 4.0, 0.0],
        ]);
        let s = LinearSystem::new(RowMatrix::dense(a).unwrap(), vec![1.0; 3], None).unwrap();
        let err = BlockKaczmarz::new(&s, &BlockPartition::new(vec![1, 2], 3).unwrap()).unwrap_err();
        match err {
            Error::Singular(msg) => assert!(msg.starts_with("block 1"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }
}
