use std::io::Write;

use crate::error::{Breakdown, Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::{vecops, Scalar};
use crate::transforms::epsilon::{epsilon_transform, EpsilonKind};
use crate::transforms::kind::TransformKind;

/// Coefficient systems whose row-equilibrated condition number exceeds this are rejected.
pub const MAX_CONDITION: f64 = 1e20;

/// Iterates `x_n, ..., x_{n+l}` with their first and second differences.
#[derive(Debug, Clone)]
pub struct TransformWindow<T> {
    base: usize,
    iterates: Vec<Vec<T>>,
    dx: Vec<Vec<T>>,
}

impl<T: Scalar> TransformWindow<T> {
    pub fn new(base: usize, iterates: Vec<Vec<T>>) -> Result<Self> {
        if iterates.is_empty() {
            return Err(Error::InsufficientWindow { have: 0, need: 1 });
        }
        let n = iterates[0].len();
        if let Some(bad) = iterates.iter().find(|x| x.len() != n) {
            return Err(Error::Dimension {
                expected: n,
                got: bad.len(),
            });
        }
        let dx = iterates
            .windows(2)
            .map(|w| vecops::sub(&w[1], &w[0]))
            .collect();
        Ok(TransformWindow { base, iterates, dx })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.iterates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterates.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.iterates[0].len()
    }

    /// `x_{n+j}`
    pub fn x(&self, j: usize) -> &[T] {
        &self.iterates[j]
    }

    /// `dx_{n+j} = x_{n+j+1} - x_{n+j}`
    pub fn dx(&self, j: usize) -> &[T] {
        &self.dx[j]
    }

    /// `d2x_{n+j} = dx_{n+j+1} - dx_{n+j}`
    pub fn d2x(&self, j: usize) -> Vec<T> {
        vecops::sub(&self.dx[j + 1], &self.dx[j])
    }

    fn require(&self, need: usize) -> Result<()> {
        if self.len() < need {
            return Err(Error::InsufficientWindow {
                have: self.len(),
                need,
            });
        }
        Ok(())
    }

    /// `x_{n+1} = x_n` exactly.
    pub fn is_stationary(&self) -> bool {
        self.dx
            .first()
            .is_some_and(|d| d.iter().all(|&v| v == T::zero()))
    }
}

/// Iterates a transform of order `k` reads from its window.
pub fn required_points<T: Scalar>(kind: &TransformKind<T>, k: usize) -> usize {
    kind.window_len(k) + 1
}

/// The `k x (k+1)` matrix `d_{i,j}`, `i = 1..k` (row `i - 1`), `j = 0..k`.
pub fn moment_matrix<T: Scalar>(
    kind: &TransformKind<T>,
    window: &TransformWindow<T>,
    k: usize,
) -> Result<DenseMatrix<T>> {
    let need = match kind {
        TransformKind::Topological { .. } => 2 * k + 1,
        TransformKind::Mpe | TransformKind::Rre | TransformKind::Mmpe { .. } => k + 2,
        TransformKind::VectorEpsilon | TransformKind::ScalarEpsilon => {
            return Err(Error::Config(format!(
                "{} has no moment matrix",
                kind.tag()
            )))
        }
    };
    window.require(need)?;
    let dim = window.dim();
    let d = match kind {
        TransformKind::Mpe => {
            DenseMatrix::from_fn(k, k + 1, |i, j| vecops::dot(window.dx(i), window.dx(j)))
        }
        TransformKind::Rre => {
            let d2: Vec<Vec<T>> = (0..k).map(|i| window.d2x(i)).collect();
            DenseMatrix::from_fn(k, k + 1, |i, j| vecops::dot(&d2[i], window.dx(j)))
        }
        TransformKind::Mmpe { aux } => {
            if aux.len() < k {
                return Err(Error::Config(format!(
                    "MMPE of order {k} needs {k} auxiliary vectors, has {}",
                    aux.len()
                )));
            }
            check_dim(dim, &aux[0])?;
            DenseMatrix::from_fn(k, k + 1, |i, j| vecops::dot(&aux[i], window.dx(j)))
        }
        TransformKind::Topological { y } => {
            check_dim(dim, y)?;
            let moments: Vec<T> = (0..2 * k).map(|m| vecops::dot(y, window.dx(m))).collect();
            DenseMatrix::from_fn(k, k + 1, |i, j| moments[i + j])
        }
        TransformKind::VectorEpsilon | TransformKind::ScalarEpsilon => unreachable!(),
    };
    Ok(d)
}

fn check_dim<T>(n: usize, v: &[T]) -> Result<()> {
    if v.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: v.len(),
        });
    }
    Ok(())
}

/// Solution of the coefficient systems for one window.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients<T> {
    /// `a_0 .. a_k`, summing to one: `y = sum a_j x_{n+j}`.
    pub a: Vec<T>,
    /// `alpha_1 .. alpha_k`: `y = x_n - sum alpha_j dx_{n+j-1}`.
    pub alpha: Vec<T>,
    /// Condition number of the row-equilibrated normalized system.
    pub condition: f64,
}

/// Which of the two equivalent formulas produces the output vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolvePath {
    /// `sum a_j x_{n+j}` from the system with the normalization row `a_0 + ... + a_k = 1`.
    #[default]
    Normalized,
    /// `x_n - [dx_n, ..., dx_{n+k-1}] (delta d)^{-1} d_{.,0}`
    Schur,
}

pub fn solve_coefficients<T: Scalar>(d: &DenseMatrix<T>) -> Result<Coefficients<T>> {
    solve_coefficients_with(d, MAX_CONDITION)
}

/// Solves `[1 ... 1; d] a = e_1` and `(delta d) alpha = d_{.,0}` with
/// `delta d_{i,j} = d_{i,j+1} - d_{i,j}`.
pub fn solve_coefficients_with<T: Scalar>(
    d: &DenseMatrix<T>,
    max_condition: f64,
) -> Result<Coefficients<T>> {
    let k = d.nrows();
    if d.ncols() != k + 1 {
        return Err(Error::Dimension {
            expected: k + 1,
            got: d.ncols(),
        });
    }
    let m = DenseMatrix::from_fn(
        k + 1,
        k + 1,
        |i, j| if i == 0 { T::one() } else { d[(i - 1, j)] },
    );
    let condition = equilibrated_condition(&m);
    if !(condition <= max_condition) {
        return Err(Breakdown::condition(condition).into());
    }
    let mut rhs = vec![T::zero(); k + 1];
    rhs[0] = T::one();
    let a = m
        .solve(&rhs)
        .map_err(|_| Breakdown::condition(f64::INFINITY))?;

    let delta = DenseMatrix::from_fn(k, k, |i, j| d[(i, j + 1)] - d[(i, j)]);
    let d0: Vec<T> = (0..k).map(|i| d[(i, 0)]).collect();
    let alpha = if k == 0 {
        Vec::new()
    } else {
        delta
            .solve(&d0)
            .map_err(|_| Breakdown::condition(f64::INFINITY))?
    };
    if !vecops::is_finite(&a) || !vecops::is_finite(&alpha) {
        return Err(Breakdown::condition(f64::INFINITY).into());
    }
    Ok(Coefficients {
        a,
        alpha,
        condition,
    })
}

/// 1-norm condition number after scaling each row to unit maximum.
fn equilibrated_condition<T: Scalar>(m: &DenseMatrix<T>) -> f64 {
    let n = m.nrows();
    let scaled = DenseMatrix::from_fn(n, n, |i, j| {
        let s = m.row(i).iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
        if s > T::zero() {
            m[(i, j)] / s
        } else {
            T::zero()
        }
    });
    scaled.condition_one().to_f64_lossy()
}

/// `y_k^{(n)}` over `window`, using the normalized coefficient system.
pub fn transform_apply<T: Scalar>(
    kind: &TransformKind<T>,
    window: &TransformWindow<T>,
    k: usize,
) -> Result<Vec<T>> {
    transform_apply_with(kind, window, k, SolvePath::Normalized, MAX_CONDITION)
}

pub fn transform_apply_with<T: Scalar>(
    kind: &TransformKind<T>,
    window: &TransformWindow<T>,
    k: usize,
    path: SolvePath,
    max_condition: f64,
) -> Result<Vec<T>> {
    if k == 0 || window.is_stationary() {
        return Ok(window.x(0).to_vec());
    }
    let eps_kind = match kind {
        TransformKind::VectorEpsilon => Some(EpsilonKind::Vector),
        TransformKind::ScalarEpsilon => Some(EpsilonKind::Scalar),
        _ => None,
    };
    if let Some(ek) = eps_kind {
        window.require(2 * k + 1)?;
        return Ok(epsilon_transform(ek, k, &window.iterates)?);
    }
    let d = moment_matrix(kind, window, k)?;
    let c = solve_coefficients_with(&d, max_condition)?;
    Ok(combine(window, &c, path))
}

/// Evaluates the output vector from solved coefficients.
pub fn combine<T: Scalar>(
    window: &TransformWindow<T>,
    c: &Coefficients<T>,
    path: SolvePath,
) -> Vec<T> {
    match path {
        SolvePath::Normalized => {
            let mut y = vec![T::zero(); window.dim()];
            for (j, &aj) in c.a.iter().enumerate() {
                vecops::axpy(aj, window.x(j), &mut y);
            }
            y
        }
        SolvePath::Schur => {
            let mut y = window.x(0).to_vec();
            for (j, &al) in c.alpha.iter().enumerate() {
                vecops::axpy(-al, window.dx(j), &mut y);
            }
            y
        }
    }
}

/// Moment matrix and condition number of one window, for debugging output.
#[derive(Debug, Clone)]
pub struct WindowDiagnostics<T> {
    pub base: usize,
    pub moments: DenseMatrix<T>,
    pub condition: f64,
}

impl<T: Scalar> WindowDiagnostics<T> {
    pub fn compute(kind: &TransformKind<T>, window: &TransformWindow<T>, k: usize) -> Result<Self> {
        let moments = moment_matrix(kind, window, k)?;
        let m = DenseMatrix::from_fn(k + 1, k + 1, |i, j| {
            if i == 0 {
                T::one()
            } else {
                moments[(i - 1, j)]
            }
        });
        Ok(WindowDiagnostics {
            base: window.base(),
            condition: equilibrated_condition(&m),
            moments,
        })
    }
}

/// CSV with columns `n,i,j,d,condition`, one line per moment (1-based `i`, 0-based `j`).
pub fn write_diagnostics_csv<T: Scalar, W: Write>(
    records: &[WindowDiagnostics<T>],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "n,i,j,d,condition")?;
    for r in records {
        for i in 0..r.moments.nrows() {
            for j in 0..r.moments.ncols() {
                writeln!(
                    out,
                    "{},{},{},{:.16e},{:.16e}",
                    r.base,
                    i + 1,
                    j,
                    r.moments[(i, j)].to_f64_lossy(),
                    r.condition
                )?;
            }
        }
    }
    Ok(())
}
