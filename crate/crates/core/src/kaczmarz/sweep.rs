use std::io::Write;

use crate::error::{Error, Result};
use crate::linalg::LinearSystem;
use crate::scalar::{vecops, Scalar};

/// Projects `p` onto the hyperplane of row `i` in place and returns the step coefficient
/// `lambda_i = (b_i - (p, a_i)) / ||a_i||^2`. Touches only the nonzeros of row `i`.
#[inline]
pub fn step_in_place<T: Scalar>(system: &LinearSystem<T>, p: &mut [T], i: usize) -> T {
    let row = system.matrix().row(i);
    let lambda = (system.rhs()[i] - row.dot(p)) / system.row_norms_squared()[i];
    row.axpy_into(lambda, p);
    lambda
}

/// `p + ((b_i - (p, a_i)) / ||a_i||^2) a_i` for a 0-based row index.
pub fn single_step<T: Scalar>(system: &LinearSystem<T>, p: &[T], i: usize) -> Result<Vec<T>> {
    let n = system.order();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    check_len(n, p)?;
    let mut out = p.to_vec();
    step_in_place(system, &mut out, i);
    Ok(out)
}

/// One cycle over the rows in natural order, in place. `lambdas`, when given, receives the
/// `N` step coefficients of this sweep.
pub fn sweep_in_place<T: Scalar>(
    system: &LinearSystem<T>,
    x: &mut [T],
    lambdas: Option<&mut Vec<T>>,
) {
    match lambdas {
        Some(out) => {
            out.clear();
            for i in 0..system.order() {
                out.push(step_in_place(system, x, i));
            }
        }
        None => {
            for i in 0..system.order() {
                step_in_place(system, x, i);
            }
        }
    }
}

pub fn sweep<T: Scalar>(system: &LinearSystem<T>, x: &[T]) -> Result<Vec<T>> {
    check_len(system.order(), x)?;
    let mut out = x.to_vec();
    sweep_in_place(system, &mut out, None);
    Ok(out)
}

/// `m` consecutive sweeps, returning `x_0, ..., x_m`.
pub fn sweeps<T: Scalar>(system: &LinearSystem<T>, x0: &[T], m: usize) -> Result<Vec<Vec<T>>> {
    check_len(system.order(), x0)?;
    let mut out = Vec::with_capacity(m + 1);
    out.push(x0.to_vec());
    for _ in 0..m {
        let mut next = out.last().unwrap().clone();
        sweep_in_place(system, &mut next, None);
        out.push(next);
    }
    Ok(out)
}

pub(crate) fn check_len<T>(n: usize, x: &[T]) -> Result<()> {
    if x.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x.len(),
        });
    }
    Ok(())
}

/// Record of a plain Kaczmarz run.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTrace<T> {
    /// `x_0, ..., x_n`
    pub iterates: Vec<Vec<T>>,
    /// `||b - A x_n||`
    pub residual_norms: Vec<T>,
    /// `||x - x_n||`; empty when the system has no reference solution.
    pub error_norms: Vec<T>,
    /// Step coefficients `lambda_1, ..., lambda_N` of the last sweep (`x_n = x_{n-1} + A^T Lambda`).
    pub last_lambdas: Vec<T>,
    pub converged: bool,
}

impl<T: Scalar> SweepTrace<T> {
    /// Number of sweeps performed.
    pub fn sweeps(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn last(&self) -> &[T] {
        self.iterates.last().unwrap()
    }

    /// Largest `|stored - recomputed|` residual norm discrepancy, relative to `||b||`.
    pub fn residual_discrepancy(&self, system: &LinearSystem<T>) -> T {
        let bnorm = vecops::norm(system.rhs());
        self.iterates
            .iter()
            .zip(&self.residual_norms)
            .map(|(x, &r)| (vecops::norm(&system.residual(x)) - r).abs() / bnorm)
            .fold(T::zero(), T::max)
    }

    /// CSV with columns `n,err_norm,res_norm`; `err_norm` is empty without a reference solution.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,err_norm,res_norm")?;
        for (n, r) in self.residual_norms.iter().enumerate() {
            let err = self
                .error_norms
                .get(n)
                .map(|e| format!("{:.16e}", e.to_f64_lossy()))
                .unwrap_or_default();
            writeln!(out, "{n},{err},{:.16e}", r.to_f64_lossy())?;
        }
        Ok(())
    }
}

/// Sweeps from `x0` until `||r_n|| <= tol ||b||` or `max_sweeps` sweeps have been done.
///
/// The stopping test uses the true residual, one product with `A` per sweep; the sweep itself
/// never forms `A x`.
pub fn iterate<T: Scalar>(
    system: &LinearSystem<T>,
    x0: &[T],
    max_sweeps: usize,
    tol: T,
) -> Result<SweepTrace<T>> {
    check_len(system.order(), x0)?;
    if !(tol >= T::zero()) {
        return Err(Error::Config(format!("tolerance must be >= 0, got {tol}")));
    }
    let bnorm = vecops::norm(system.rhs());
    let mut trace = SweepTrace {
        iterates: vec![x0.to_vec()],
        residual_norms: vec![vecops::norm(&system.residual(x0))],
        error_norms: system.error_norm(x0).into_iter().collect(),
        last_lambdas: Vec::new(),
        converged: false,
    };
    let mut x = x0.to_vec();
    loop {
        if *trace.residual_norms.last().unwrap() <= tol * bnorm {
            trace.converged = true;
            break;
        }
        if trace.sweeps() >= max_sweeps {
            break;
        }
        sweep_in_place(system, &mut x, Some(&mut trace.last_lambdas));
        trace
            .residual_norms
            .push(vecops::norm(&system.residual(&x)));
        if let Some(e) = system.error_norm(&x) {
            trace.error_norms.push(e);
        }
        trace.iterates.push(x.clone());
    }
    Ok(trace)
}
