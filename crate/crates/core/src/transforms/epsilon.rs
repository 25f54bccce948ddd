//! Epsilon algorithms with one ascending diagonal of storage.
//!
//! After points `x_0 .. x_m` have been accepted, entry `j` of the diagonal is `eps_j^{(m-j)}`.
//! A new point `x_{m+1}` gives the next diagonal by the lozenge rule
//! `new[j+1] = old[j-1] + inv(new[j] - old[j])`, with `old[-1] = eps_{-1} = 0`.

use crate::error::{Breakdown, BreakdownSite};
use crate::scalar::{vecops, Scalar};

/// Denominators `|(p, q)| <= BREAKDOWN_TOL ||p|| ||q||` count as zero.
pub const BREAKDOWN_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub enum EpsilonKind<T> {
    /// `inv(u) = u / (u, u)`
    Vector,
    /// Even columns `inv(u) = y / (y, u)`; odd columns use the even difference of the same
    /// upper index: `inv(u) = d / (u, d)` with `d = eps_{2k}^{(n+1)} - eps_{2k}^{(n)}`.
    Topological { y: Vec<T> },
    /// The scalar rule `1 / u` on each component.
    Scalar,
}

#[derive(Debug, Clone)]
pub struct EpsilonTable<T> {
    kind: EpsilonKind<T>,
    max_column: usize,
    tol: T,
    diagonal: Vec<Vec<T>>,
    /// Topological only: `eps_{2k}` differences computed by the last update, indexed by column.
    even_diffs: Vec<Option<Vec<T>>>,
    count: usize,
}

impl<T: Scalar> EpsilonTable<T> {
    /// Table computing columns up to `2k`.
    pub fn new(kind: EpsilonKind<T>, k: usize) -> Self {
        EpsilonTable {
            kind,
            max_column: 2 * k,
            tol: T::of(BREAKDOWN_TOL),
            diagonal: Vec::new(),
            even_diffs: Vec::new(),
            count: 0,
        }
    }

    pub fn with_tolerance(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn kind(&self) -> &EpsilonKind<T> {
        &self.kind
    }

    /// Number of points accepted so far.
    pub fn count(&self) -> usize {
        self.count
    }

    /// The current ascending diagonal `eps_0^{(m)}, eps_1^{(m-1)}, ...`.
    pub fn diagonal(&self) -> &[Vec<T>] {
        &self.diagonal
    }

    /// `eps_{2k}^{(m-2k)}` for the last accepted point `m`, when the diagonal reaches column `2k`.
    pub fn even(&self, k: usize) -> Option<&[T]> {
        self.diagonal.get(2 * k).map(Vec::as_slice)
    }

    /// Deepest even column currently on the diagonal, with its value.
    pub fn deepest_even(&self) -> Option<(usize, &[T])> {
        let len = self.diagonal.len();
        if len == 0 {
            return None;
        }
        let k = (len - 1) / 2;
        Some((k, &self.diagonal[2 * k]))
    }

    /// Accepts `x_{m+1}` and advances the diagonal.
    ///
    /// The point is accepted even when a denominator vanishes: the new diagonal then stops at
    /// the column before the failed cell, and the breakdown is returned. Later points rebuild
    /// the deeper columns once enough non-degenerate differences are available.
    pub fn extend(&mut self, point: &[T]) -> Result<(), Breakdown> {
        let m_new = self.count;
        let old = std::mem::take(&mut self.diagonal);
        let mut new: Vec<Vec<T>> = Vec::with_capacity(self.max_column + 1);
        new.push(point.to_vec());
        let mut diffs: Vec<Option<Vec<T>>> = vec![None; self.max_column + 1];
        let mut failure = None;
        for j in 0..self.max_column {
            if j >= old.len() {
                break;
            }
            let diff = vecops::sub(&new[j], &old[j]);
            let inv = match self.inverse(j, &diff) {
                Ok(v) => v,
                Err(denominator) => {
                    failure = Some(Breakdown {
                        site: BreakdownSite::EpsilonCell {
                            column: j + 1,
                            row: m_new - j - 1,
                        },
                        denominator,
                    });
                    break;
                }
            };
            if j % 2 == 0 {
                diffs[j] = Some(diff);
            }
            let next = match j {
                0 => inv,
                _ => vecops::add(&old[j - 1], &inv),
            };
            new.push(next);
        }
        self.diagonal = new;
        if matches!(self.kind, EpsilonKind::Topological { .. }) {
            self.even_diffs = diffs;
        }
        self.count += 1;
        failure.map_or(Ok(()), Err)
    }

    /// Inverse of the column-`j` difference `u`; `Err` carries the vanishing denominator.
    fn inverse(&self, j: usize, u: &[T]) -> Result<Vec<T>, f64> {
        match &self.kind {
            EpsilonKind::Vector => {
                let uu = vecops::dot(u, u);
                if !(uu > T::zero()) || !uu.is_finite() {
                    return Err(uu.to_f64_lossy());
                }
                Ok(vecops::scale(T::one() / uu, u))
            }
            EpsilonKind::Scalar => {
                let mut out = Vec::with_capacity(u.len());
                for &v in u {
                    if v == T::zero() || !v.is_finite() {
                        return Err(v.to_f64_lossy());
                    }
                    out.push(T::one() / v);
                }
                Ok(out)
            }
            EpsilonKind::Topological { y } => {
                let d = if j.is_multiple_of(2) {
                    y.as_slice()
                } else {
                    match self.even_diffs.get(j - 1).and_then(Option::as_ref) {
                        Some(d) => d.as_slice(),
                        None => return Err(0.0),
                    }
                };
                let den = vecops::dot(d, u);
                let scale = vecops::norm(d) * vecops::norm(u);
                if !(den.abs() > self.tol * scale) || !den.is_finite() {
                    return Err(den.to_f64_lossy());
                }
                Ok(vecops::scale(T::one() / den, d))
            }
        }
    }
}

/// `eps_{2k}^{(0)}` of a full table over `points` (needs `2k + 1` points).
pub fn epsilon_transform<T: Scalar>(
    kind: EpsilonKind<T>,
    k: usize,
    points: &[Vec<T>],
) -> Result<Vec<T>, Breakdown> {
    let mut table = EpsilonTable::new(kind, k);
    for p in &points[..(2 * k + 1).min(points.len())] {
        table.extend(p)?;
    }
    Ok(table
        .even(k)
        .expect("2k + 1 points fill column 2k")
        .to_vec())
}

/// The scalar epsilon algorithm on one sequence, as a full table; `eps_{2k}^{(0)}`.
pub fn scalar_epsilon(seq: &[f64], k: usize) -> Option<f64> {
    let mut prev = vec![0.0; seq.len() + 1];
    let mut cur = seq.to_vec();
    for _ in 0..2 * k {
        if cur.len() < 2 {
            return None;
        }
        let next: Vec<f64> = (0..cur.len() - 1)
            .map(|n| prev[n + 1] + 1.0 / (cur[n + 1] - cur[n]))
            .collect();
        prev = cur;
        cur = next;
    }
    cur.first().copied()
}
