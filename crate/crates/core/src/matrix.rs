//! Pairwise comparison matrices and their inconsistency indices.
//!
//! A [`PcMatrix`] stores direct judgments `c_ij` ("how many times alternative
//! i is preferred to alternative j"). Entries are strictly positive, the
//! diagonal is exactly 1. Reciprocity (`c_ij * c_ji = 1`) is *not* required:
//! non-reciprocal matrices are accepted everywhere, callers that care emit a
//! warning (see the model parser).

use thiserror::Error;

use crate::linalg::{self, LinalgError};

/// Default relative tolerance for reciprocity / consistency checks.
pub const DEFAULT_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NonSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("entry c[{row}][{col}] = {value} is not strictly positive")]
    NonPositiveEntry { row: usize, col: usize, value: f64 },
    #[error("diagonal entry c[{index}][{index}] = {value}, expected exactly 1")]
    NonUnitDiagonal { index: usize, value: f64 },
    #[error("entry c[{row}][{col}] is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("matrix must have at least one row")]
    Empty,
}

/// A square, strictly positive matrix of pairwise judgments.
#[derive(Debug, Clone, PartialEq)]
pub struct PcMatrix {
    order: usize,
    entries: Vec<f64>, // row-major, order * order
}

impl PcMatrix {
    /// Validates and wraps a square grid of judgments. Entries are preserved
    /// bit-exactly. Positions in errors are 1-based, matching the usual
    /// `c_ij` notation.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::NonSquare {
                    row: i + 1,
                    found: row.len(),
                    expected: n,
                });
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(MatrixError::NonFiniteEntry {
                        row: i + 1,
                        col: j + 1,
                    });
                }
                if v <= 0.0 {
                    return Err(MatrixError::NonPositiveEntry {
                        row: i + 1,
                        col: j + 1,
                        value: v,
                    });
                }
                if i == j && v != 1.0 {
                    return Err(MatrixError::NonUnitDiagonal {
                        index: i + 1,
                        value: v,
                    });
                }
                entries.push(v);
            }
        }
        Ok(PcMatrix { order: n, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Judgment `c_ij` with 0-based indices.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.order)
            .map(|i| self.entries[i * self.order..(i + 1) * self.order].to_vec())
            .collect()
    }

    /// True iff `|c_ij * c_ji - 1| <= tol` for every pair `i < j`.
    pub fn is_reciprocal(&self, tol: f64) -> bool {
        for i in 0..self.order {
            for j in (i + 1)..self.order {
                if (self.get(i, j) * self.get(j, i) - 1.0).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `|c_ik - c_ij * c_jk| <= tol * c_ik` over all index triples.
    /// Orders below 3 are vacuously consistent. The triple check with `i = k`
    /// subsumes reciprocity, so consistent implies reciprocal.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let n = self.order;
        if n < 3 {
            return true;
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let expected = self.get(i, k);
                    if (expected - self.get(i, j) * self.get(j, k)).abs() > tol * expected {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Saaty consistency index `(lambda_max - n) / (n - 1)`, clamped to be
    /// non-negative. An order-1 matrix has index 0 by convention.
    pub fn saaty_ci(&self) -> Result<f64, LinalgError> {
        let n = self.order;
        if n < 2 {
            return Ok(0.0);
        }
        let eigen = linalg::principal_eigenpair(
            self,
            linalg::DEFAULT_EIGEN_TOL,
            linalg::DEFAULT_EIGEN_MAX_ITER,
        )?;
        Ok(((eigen.lambda_max - n as f64) / (n as f64 - 1.0)).max(0.0))
    }

    /// Koczkodaj inconsistency index: the worst local triad deviation
    /// `min(|1 - c_ij/(c_ik*c_kj)|, |1 - (c_ik*c_kj)/c_ij|)` maximized over
    /// all triads of distinct indices. Orders below 3 have no triads and
    /// yield 0.
    pub fn koczkodaj_index(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for triad in triads(self.order) {
            let Triad { i, j, k } = triad;
            let direct = self.get(i, j);
            let via = self.get(i, k) * self.get(k, j);
            let local = (1.0 - direct / via).abs().min((1.0 - via / direct).abs());
            worst = worst.max(local);
        }
        worst
    }
}

/// Indices of one triad `(i, j, k)`, pairwise distinct, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triad {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Triad {
    /// None unless the three indices are pairwise distinct.
    pub fn new(i: usize, j: usize, k: usize) -> Option<Self> {
        if i != j && j != k && k != i {
            Some(Triad { i, j, k })
        } else {
            None
        }
    }
}

/// All ordered triads of distinct indices below `n`.
pub fn triads(n: usize) -> impl Iterator<Item = Triad> {
    (0..n).flat_map(move |i| {
        (0..n).flat_map(move |j| (0..n).filter_map(move |k| Triad::new(i, j, k)))
    })
}
