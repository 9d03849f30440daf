//! Priority vectors and the two classical prioritization methods, EVM and
//! GMM. Outputs here are always L1-normalized; raw unit-bearing vectors only
//! arise in the reference-based solver where known values carry units.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, LinalgError};
use crate::matrix::PcMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PriorityError {
    #[error("{labels} labels do not match {values} values")]
    LengthMismatch { labels: usize, values: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("value for {label:?} is not finite")]
    NonFiniteValue { label: String },
    #[error("value for {label:?} is negative ({value})")]
    NegativeValue { label: String, value: f64 },
    #[error("values sum to zero, cannot normalize")]
    ZeroSum,
}

/// Named, non-negative priority values over alternatives (or criteria).
/// Either raw (criterion units: currency, months, points, ...) or
/// L1-normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorityVector {
    labels: Vec<String>,
    values: Vec<f64>,
    normalized: bool,
}

impl PriorityVector {
    /// A raw, unit-bearing vector. Values must be finite and non-negative.
    pub fn raw(labels: Vec<String>, values: Vec<f64>) -> Result<Self, PriorityError> {
        Self::build(labels, values, false)
    }

    /// A vector already scaled to sum 1 (the constructor rescales exactly, so
    /// tiny drift in the input is absorbed).
    pub fn normalized(labels: Vec<String>, values: Vec<f64>) -> Result<Self, PriorityError> {
        Self::build(labels, values, false)?.normalize()
    }

    fn build(labels: Vec<String>, values: Vec<f64>, normalized: bool) -> Result<Self, PriorityError> {
        if labels.len() != values.len() {
            return Err(PriorityError::LengthMismatch {
                labels: labels.len(),
                values: values.len(),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(PriorityError::DuplicateLabel(l.clone()));
            }
        }
        for (l, &v) in labels.iter().zip(&values) {
            if !v.is_finite() {
                return Err(PriorityError::NonFiniteValue { label: l.clone() });
            }
            if v < 0.0 {
                return Err(PriorityError::NegativeValue {
                    label: l.clone(),
                    value: v,
                });
            }
        }
        Ok(PriorityVector {
            labels,
            values,
            normalized,
        })
    }

    /// Rescales so the components sum to 1. Order of components (and hence
    /// the argmax) is preserved; normalizing twice is exactly a no-op.
    pub fn normalize(&self) -> Result<Self, PriorityError> {
        if self.normalized {
            return Ok(self.clone());
        }
        let sum: f64 = self.values.iter().sum();
        if sum <= 0.0 {
            return Err(PriorityError::ZeroSum);
        }
        Ok(PriorityVector {
            labels: self.labels.clone(),
            values: self.values.iter().map(|v| v / sum).collect(),
            normalized: true,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.values.iter().copied())
    }
}

/// Eigenvector method: the L1-normalized principal eigenvector of `c`.
pub fn evm(c: &PcMatrix, labels: &[String]) -> Result<PriorityVector, LinalgError> {
    assert_eq!(labels.len(), c.order(), "one label per matrix row");
    let eigen = linalg::principal_eigenpair(
        c,
        linalg::DEFAULT_EIGEN_TOL,
        linalg::DEFAULT_EIGEN_MAX_ITER,
    )?;
    Ok(PriorityVector::normalized(labels.to_vec(), eigen.vector)
        .expect("eigenvector of a positive matrix is positive"))
}

/// Geometric mean method: row-wise geometric means, L1-normalized. Means are
/// taken in log space so extreme judgments cannot overflow.
pub fn gmm(c: &PcMatrix, labels: &[String]) -> PriorityVector {
    assert_eq!(labels.len(), c.order(), "one label per matrix row");
    let n = c.order();
    let means: Vec<f64> = (0..n)
        .map(|i| ((0..n).map(|j| c.get(i, j).ln()).sum::<f64>() / n as f64).exp())
        .collect();
    PriorityVector::normalized(labels.to_vec(), means)
        .expect("geometric means of positive entries are positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc(rows: &[&[f64]]) -> PcMatrix {
        PcMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn assert_close(got: &PriorityVector, want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for ((_, g), w) in got.iter().zip(want) {
            assert!((g - w).abs() < tol, "{:?} vs {:?}", got.values(), want);
        }
    }

    #[test]
    fn evm_stress_resistance_example() {
        let c = pc(&[&[1.0, 0.5, 1.0], &[2.0, 1.0, 2.0], &[1.0, 0.5, 1.0]]);
        let w = evm(&c, &labels(&["A", "B", "C"])).unwrap();
        assert_close(&w, &[0.25, 0.5, 0.25], 1e-9);
    }

    #[test]
    fn evm_five_cups_uniqueness_example() {
        let c = pc(&[
            &[1.0, 0.5, 0.5, 0.5, 1.0 / 3.0],
            &[2.0, 1.0, 2.0, 1.0, 0.5],
            &[2.0, 0.5, 1.0, 1.0, 0.5],
            &[2.0, 1.0, 1.0, 1.0, 0.5],
            &[3.0, 2.0, 2.0, 2.0, 1.0],
        ]);
        let w = evm(&c, &labels(&["a1", "a2", "a3", "a4", "a5"])).unwrap();
        assert_close(&w, &[0.097, 0.214, 0.161, 0.182, 0.345], 1e-3);
    }

    #[test]
    fn evm_identity_is_uniform() {
        let row: &[f64] = &[1.0; 5];
        let c = pc(&[row; 5]);
        let w = evm(&c, &labels(&["a", "b", "c", "d", "e"])).unwrap();
        assert_close(&w, &[0.2; 5], 1e-12);
    }

    #[test]
    fn gmm_education_example() {
        let c = pc(&[
            &[1.0, 0.5, 1.0 / 8.0],
            &[2.0, 1.0, 0.25],
            &[8.0, 4.0, 1.0],
        ]);
        let w = gmm(&c, &labels(&["A", "B", "C"]));
        assert_close(&w, &[1.0 / 11.0, 2.0 / 11.0, 8.0 / 11.0], 1e-12);
    }

    #[test]
    fn gmm_identity_and_two_by_two() {
        let row: &[f64] = &[1.0; 4];
        let id = pc(&[row; 4]);
        assert_close(&gmm(&id, &labels(&["a", "b", "c", "d"])), &[0.25; 4], 1e-15);
        let c = pc(&[&[1.0, 4.0], &[0.25, 1.0]]);
        assert_close(&gmm(&c, &labels(&["x", "y"])), &[0.8, 0.2], 1e-12);
    }

    #[test]
    fn normalize_profitability_catenation() {
        let v = PriorityVector::raw(
            labels(&["a1", "a2", "a3", "a4", "a5", "a6", "a7"]),
            vec![11.164, 13.667, 6.863, 17.292, 20.0, 12.0, 9.0],
        )
        .unwrap();
        let n = v.normalize().unwrap();
        assert_close(&n, &[0.124, 0.152, 0.076, 0.192, 0.222, 0.133, 0.1], 1e-3);
        assert!(n.is_normalized());
    }

    #[test]
    fn normalize_small_cases() {
        let v = PriorityVector::raw(labels(&["a", "b"]), vec![1.0, 1.0]).unwrap();
        assert_eq!(v.normalize().unwrap().values(), &[0.5, 0.5]);
        let v = PriorityVector::raw(labels(&["a", "b"]), vec![2.0, 6.0]).unwrap();
        assert_eq!(v.normalize().unwrap().values(), &[0.25, 0.75]);
    }

    #[test]
    fn normalize_is_idempotent_and_order_preserving() {
        let v = PriorityVector::raw(labels(&["a", "b", "c"]), vec![3.0, 1.0, 2.0]).unwrap();
        let once = v.normalize().unwrap();
        let twice = once.normalize().unwrap();
        assert_eq!(once, twice);
        let argmax = |p: &PriorityVector| {
            p.values()
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0
        };
        assert_eq!(argmax(&v), argmax(&once));
    }

    #[test]
    fn vector_validation() {
        assert!(matches!(
            PriorityVector::raw(labels(&["a"]), vec![1.0, 2.0]),
            Err(PriorityError::LengthMismatch { .. })
        ));
        assert!(matches!(
            PriorityVector::raw(labels(&["a", "a"]), vec![1.0, 2.0]),
            Err(PriorityError::DuplicateLabel(_))
        ));
        assert!(matches!(
            PriorityVector::raw(labels(&["a"]), vec![f64::NAN]),
            Err(PriorityError::NonFiniteValue { .. })
        ));
        assert!(matches!(
            PriorityVector::raw(labels(&["a"]), vec![-1.0]),
            Err(PriorityError::NegativeValue { .. })
        ));
        assert!(matches!(
            PriorityVector::raw(labels(&["a", "b"]), vec![0.0, 0.0])
                .unwrap()
                .normalize(),
            Err(PriorityError::ZeroSum)
        ));
    }
}
