//! Small dense numerical kernels: linear-system solving and the dominant
//! eigenpair of a positive matrix. Systems here are tiny (a handful of
//! unknowns), so plain Gaussian elimination with partial pivoting and plain
//! power iteration are all that is needed.

use thiserror::Error;

use crate::matrix::PcMatrix;

/// Convergence tolerance for power iteration (infinity-norm of successive
/// L1-normalized iterates).
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;
/// Iteration cap for power iteration.
pub const DEFAULT_EIGEN_MAX_ITER: usize = 10_000;
/// A pivot below `PIVOT_RTOL * max|A|` marks the system singular.
pub const PIVOT_RTOL: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("linear system is singular or numerically rank-deficient")]
    SingularSystem,
    #[error("power iteration did not converge within {max_iter} iterations")]
    EigenNotConverged { max_iter: usize },
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },
    #[error("value at [{row}][{col}] is not finite")]
    NonFiniteValue { row: usize, col: usize },
}

/// Row-major dense matrix of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 || values.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                context: format!(
                    "{} values cannot fill a {}x{} matrix",
                    values.len(),
                    rows,
                    cols
                ),
            });
        }
        for (idx, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(LinalgError::NonFiniteValue {
                    row: idx / cols,
                    col: idx % cols,
                });
            }
        }
        Ok(DenseMatrix { rows, cols, values })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::ShapeMismatch {
                context: "ragged rows".to_string(),
            });
        }
        DenseMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "vector length must match matrix cols");
        (0..self.rows)
            .map(|r| {
                self.values[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve_linear_system(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let n = a.rows();
    if a.cols() != n {
        return Err(LinalgError::ShapeMismatch {
            context: format!("coefficient matrix is {}x{}, need square", a.rows(), a.cols()),
        });
    }
    if b.len() != n {
        return Err(LinalgError::ShapeMismatch {
            context: format!("rhs has length {}, expected {}", b.len(), n),
        });
    }

    let amax = a.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let pivot_floor = PIVOT_RTOL * amax;

    let mut m = a.values.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| {
                m[r1 * n + col]
                    .abs()
                    .total_cmp(&m[r2 * n + col].abs())
            })
            .expect("non-empty pivot range");
        if m[pivot_row * n + col].abs() <= pivot_floor {
            return Err(LinalgError::SingularSystem);
        }
        if pivot_row != col {
            for j in 0..n {
                m.swap(col * n + j, pivot_row * n + j);
            }
            rhs.swap(col, pivot_row);
        }
        let pivot = m[col * n + col];
        for row in (col + 1)..n {
            let factor = m[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            m[row * n + col] = 0.0;
            for j in (col + 1)..n {
                m[row * n + j] -= factor * m[col * n + j];
            }
            rhs[row] -= factor * rhs[col];
        }
    }

    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for j in (row + 1)..n {
            acc -= m[row * n + j] * x[j];
        }
        x[row] = acc / m[row * n + row];
    }
    Ok(x)
}

/// Dominant eigenpair of a positive PC matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Spectral radius estimate.
    pub lambda_max: f64,
    /// Strictly positive eigenvector, L1-normalized.
    pub vector: Vec<f64>,
}

/// Power iteration from the uniform start vector. Iterates are L1-normalized;
/// convergence is reached when successive iterates differ by less than `tol`
/// in the infinity norm. The eigenvalue estimate is the ratio `(C w)_i / w_i`
/// averaged over components. The start vector is fixed so results are
/// bit-reproducible run to run.
pub fn principal_eigenpair(
    c: &PcMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<EigenResult, LinalgError> {
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(max_iter >= 1, "need at least one iteration");
    let n = c.order();
    let mut w = vec![1.0 / n as f64; n];
    for _ in 0..max_iter {
        let mut next: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| c.get(i, j) * w[j]).sum())
            .collect();
        let sum: f64 = next.iter().sum();
        for v in &mut next {
            *v /= sum;
        }
        let delta = next
            .iter()
            .zip(&w)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        w = next;
        if delta < tol {
            let lambda = (0..n)
                .map(|i| (0..n).map(|j| c.get(i, j) * w[j]).sum::<f64>() / w[i])
                .sum::<f64>()
                / n as f64;
            return Ok(EigenResult {
                lambda_max: lambda,
                vector: w,
            });
        }
    }
    Err(LinalgError::EigenNotConverged { max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::PcMatrix;

    fn pc(rows: &[&[f64]]) -> PcMatrix {
        PcMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn solves_diagonal_system() {
        let a = DenseMatrix::from_rows(vec![vec![2.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let x = solve_linear_system(&a, &[2.0, 4.0]).unwrap();
        assert_eq!(x, vec![1.0, 1.0]);
    }

    #[test]
    fn reports_rank_deficient_system() {
        let a = DenseMatrix::from_rows(vec![vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(
            solve_linear_system(&a, &[1.0, 2.0]).unwrap_err(),
            LinalgError::SingularSystem
        );
    }

    #[test]
    fn solves_profitability_reference_system() {
        // 4-unknown system from the sports-facility walkthrough, entries as
        // exact fractions.
        let a = DenseMatrix::from_rows(vec![
            vec![1.0, -(2.0 / 3.0) / 6.0, -2.0 / 6.0, -0.5 / 6.0],
            vec![-1.5 / 6.0, 1.0, -2.0 / 6.0, -(2.0 / 3.0) / 6.0],
            vec![-0.5 / 6.0, -0.5 / 6.0, 1.0, -(1.0 / 3.0) / 6.0],
            vec![-2.0 / 6.0, -1.5 / 6.0, -3.0 / 6.0, 1.0],
        ])
        .unwrap();
        let b = [35.5 / 6.0, 40.0 / 6.0, 23.0 / 6.0, 121.0 / 18.0];
        let x = solve_linear_system(&a, &b).unwrap();
        let expected = [11.164, 13.667, 6.863, 17.292];
        for (got, want) in x.iter().zip(expected) {
            assert!((got - want).abs() < 0.01, "got {got}, want {want}");
        }
        // residual contract
        let r = a
            .mul_vec(&x)
            .iter()
            .zip(&b)
            .fold(0.0_f64, |m, (ax, bi)| m.max((ax - bi).abs()));
        let bmax = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(r <= 1e-10 * (1.0 + bmax));
    }

    #[test]
    fn eigenpair_of_identity() {
        let c = pc(&[&[1.0; 3], &[1.0; 3], &[1.0; 3]]);
        let e = principal_eigenpair(&c, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER).unwrap();
        assert!((e.lambda_max - 3.0).abs() < 1e-12);
        for v in &e.vector {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenpair_of_consistent_matrix_recovers_ratios() {
        let c = pc(&[&[1.0, 2.0, 4.0], &[0.5, 1.0, 2.0], &[0.25, 0.5, 1.0]]);
        let e = principal_eigenpair(&c, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER).unwrap();
        assert!((e.lambda_max - 3.0).abs() < 1e-9);
        let expected = [4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0];
        for (got, want) in e.vector.iter().zip(expected) {
            assert!((got - want).abs() < 1e-6);
        }
    }

    #[test]
    fn eigenpair_of_criteria_matrix() {
        let c = pc(&[
            &[1.0, 4.0, 2.0, 8.0],
            &[0.25, 1.0, 0.5, 2.0],
            &[0.5, 2.0, 1.0, 4.0],
            &[1.0 / 8.0, 0.5, 0.25, 1.0],
        ]);
        let e = principal_eigenpair(&c, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER).unwrap();
        let expected = [8.0 / 15.0, 2.0 / 15.0, 4.0 / 15.0, 1.0 / 15.0];
        for (got, want) in e.vector.iter().zip(expected) {
            assert!((got - want).abs() < 1e-6);
        }
    }

    #[test]
    fn eigen_vector_is_positive_and_normalized() {
        let c = pc(&[
            &[1.0, 9.0, 0.2],
            &[1.0 / 9.0, 1.0, 3.0],
            &[5.0, 1.0 / 3.0, 1.0],
        ]);
        let e = principal_eigenpair(&c, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER).unwrap();
        assert!(e.vector.iter().all(|&v| v > 0.0));
        assert!((e.vector.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn eigen_iteration_cap_is_reported() {
        let c = pc(&[
            &[1.0, 9.0, 0.2],
            &[1.0 / 9.0, 1.0, 3.0],
            &[5.0, 1.0 / 3.0, 1.0],
        ]);
        assert_eq!(
            principal_eigenpair(&c, 1e-16, 2).unwrap_err(),
            LinalgError::EigenNotConverged { max_iter: 2 }
        );
    }
}
