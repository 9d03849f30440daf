//! Reference-based rating estimation over a PC matrix: a subset of
//! alternatives carries fixed, known priorities and anchors the scale; the
//! remaining priorities are recovered from a small linear system.
//!
//! Two variants exist. The additive one postulates that each priority is the
//! weighted average of all the others and leads to `M w = b`; its solution
//! must be strictly positive to be admissible. The geometric one postulates
//! a geometric mean instead, log-linearizes to `N mu = d`, and always has a
//! solution for a non-empty reference set.

use std::collections::BTreeMap;

use crate::linalg::{self, DenseMatrix, LinalgError};
use crate::matrix::PcMatrix;
use crate::prioritize::PriorityVector;
use thiserror::Error;

/// Solution components at or below this threshold are treated as
/// non-positive and rejected as inadmissible.
pub const ADMISSIBILITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("no unknown alternatives: nothing to solve (use passthrough_known)")]
    EmptyUnknownSet,
    #[error("label {label:?} appears in both the known and unknown sets")]
    OverlappingSets { label: String },
    #[error("known priority for {label:?} must be finite and positive, got {value}")]
    InvalidKnownValue { label: String, value: f64 },
    #[error("partition does not match the matrix labels: {context}")]
    PartitionMismatch { context: String },
    #[error("need at least two alternatives to relate them pairwise")]
    OrderTooSmall,
    #[error("auxiliary system is singular")]
    SingularSystem,
    #[error(
        "solution is inadmissible: component for {label:?} is {value} (not strictly positive); \
         the judgments are too inconsistent for this reference set"
    )]
    InadmissibleSolution { label: String, value: f64 },
}

/// Split of the alternatives into references with fixed priorities and
/// unknowns to be estimated.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePartition {
    known: BTreeMap<String, f64>,
    unknown: Vec<String>,
}

impl ReferencePartition {
    pub fn new(
        known: impl IntoIterator<Item = (String, f64)>,
        unknown: Vec<String>,
    ) -> Result<Self, SolverError> {
        let known: BTreeMap<String, f64> = known.into_iter().collect();
        for (label, &value) in &known {
            if !value.is_finite() || value <= 0.0 {
                return Err(SolverError::InvalidKnownValue {
                    label: label.clone(),
                    value,
                });
            }
        }
        for label in &unknown {
            if known.contains_key(label) {
                return Err(SolverError::OverlappingSets {
                    label: label.clone(),
                });
            }
        }
        Ok(ReferencePartition { known, unknown })
    }

    /// Partition derived from a full label list: everything in `known` is a
    /// reference, the rest are unknowns in label order.
    pub fn from_labels(
        labels: &[String],
        known: &BTreeMap<String, f64>,
    ) -> Result<Self, SolverError> {
        let unknown = labels
            .iter()
            .filter(|l| !known.contains_key(*l))
            .cloned()
            .collect();
        Self::new(known.clone(), unknown)
    }

    pub fn known(&self) -> &BTreeMap<String, f64> {
        &self.known
    }

    pub fn unknown(&self) -> &[String] {
        &self.unknown
    }

    /// Resolves the partition against the matrix label order: every label
    /// must be covered exactly once.
    fn align(&self, labels: &[String]) -> Result<Aligned, SolverError> {
        if self.known.len() + self.unknown.len() != labels.len() {
            return Err(SolverError::PartitionMismatch {
                context: format!(
                    "partition covers {} labels, matrix has {}",
                    self.known.len() + self.unknown.len(),
                    labels.len()
                ),
            });
        }
        let position = |label: &String| {
            labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| SolverError::PartitionMismatch {
                    context: format!("label {label:?} is not among the matrix labels"),
                })
        };
        let mut unknown_idx = Vec::with_capacity(self.unknown.len());
        for label in &self.unknown {
            unknown_idx.push(position(label)?);
        }
        let mut known_idx = Vec::with_capacity(self.known.len());
        for (label, &value) in &self.known {
            known_idx.push((position(label)?, value));
        }
        let mut seen = vec![false; labels.len()];
        for &i in unknown_idx.iter().chain(known_idx.iter().map(|(i, _)| i)) {
            if seen[i] {
                return Err(SolverError::PartitionMismatch {
                    context: format!("label {:?} covered twice", labels[i]),
                });
            }
            seen[i] = true;
        }
        Ok(Aligned {
            unknown_idx,
            known_idx,
        })
    }
}

struct Aligned {
    unknown_idx: Vec<usize>,
    known_idx: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HreVariant {
    Additive,
    Geometric,
}

/// The auxiliary linear system of one solve: `M w = b` (additive) or
/// `N mu = d` (geometric), with one row per unknown alternative.
#[derive(Debug, Clone, PartialEq)]
pub struct HreSystem {
    pub variant: HreVariant,
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
    pub unknown_labels: Vec<String>,
}

fn check_preconditions(
    c: &PcMatrix,
    labels: &[String],
    part: &ReferencePartition,
) -> Result<Aligned, SolverError> {
    if labels.len() != c.order() {
        return Err(SolverError::PartitionMismatch {
            context: format!(
                "{} labels for a matrix of order {}",
                labels.len(),
                c.order()
            ),
        });
    }
    let aligned = part.align(labels)?;
    if aligned.unknown_idx.is_empty() {
        return Err(SolverError::EmptyUnknownSet);
    }
    if c.order() < 2 {
        return Err(SolverError::OrderTooSmall);
    }
    Ok(aligned)
}

/// Builds `M w = b` for the additive variant: unit diagonal, off-diagonal
/// `-(1/(n-1)) c_ij` over unknown pairs, and `b_i = (1/(n-1)) * sum over
/// references of c_ij * w(a_j)`. `n` is the total alternative count, not the
/// unknown count.
pub fn build_additive_system(
    c: &PcMatrix,
    labels: &[String],
    part: &ReferencePartition,
) -> Result<HreSystem, SolverError> {
    let aligned = check_preconditions(c, labels, part)?;
    let n = c.order();
    let factor = 1.0 / (n as f64 - 1.0);
    let u = aligned.unknown_idx.len();

    let mut m = vec![0.0; u * u];
    let mut b = vec![0.0; u];
    for (r, &i) in aligned.unknown_idx.iter().enumerate() {
        for (s, &j) in aligned.unknown_idx.iter().enumerate() {
            m[r * u + s] = if r == s { 1.0 } else { -factor * c.get(i, j) };
        }
        b[r] = factor
            * aligned
                .known_idx
                .iter()
                .map(|&(j, w)| c.get(i, j) * w)
                .sum::<f64>();
    }
    Ok(HreSystem {
        variant: HreVariant::Additive,
        matrix: DenseMatrix::new(u, u, m).expect("system entries are finite"),
        rhs: b,
        unknown_labels: aligned
            .unknown_idx
            .iter()
            .map(|&i| labels[i].clone())
            .collect(),
    })
}

/// Builds `N mu = d` for the geometric variant: diagonal `n-1`, off-diagonal
/// `-1`, and `d_i` the natural log of the product of the i-th row (skipping
/// the diagonal) with the known priorities attached. Computed as a sum of
/// logs so extreme products cannot overflow. Any fixed log base would give
/// the same final priorities; natural log is used throughout.
pub fn build_geometric_system(
    c: &PcMatrix,
    labels: &[String],
    part: &ReferencePartition,
) -> Result<HreSystem, SolverError> {
    let aligned = check_preconditions(c, labels, part)?;
    let n = c.order();
    let u = aligned.unknown_idx.len();

    let mut m = vec![-1.0; u * u];
    for r in 0..u {
        m[r * u + r] = n as f64 - 1.0;
    }
    let mut d = vec![0.0; u];
    for (r, &i) in aligned.unknown_idx.iter().enumerate() {
        let mut acc = 0.0;
        for j in 0..n {
            if j != i {
                acc += c.get(i, j).ln();
            }
        }
        for &(_, w) in &aligned.known_idx {
            acc += w.ln();
        }
        d[r] = acc;
    }
    Ok(HreSystem {
        variant: HreVariant::Geometric,
        matrix: DenseMatrix::new(u, u, m).expect("system entries are finite"),
        rhs: d,
        unknown_labels: aligned
            .unknown_idx
            .iter()
            .map(|&i| labels[i].clone())
            .collect(),
    })
}

fn assemble(
    labels: &[String],
    part: &ReferencePartition,
    unknown_labels: &[String],
    solved: &[f64],
) -> Result<PriorityVector, SolverError> {
    let full: Vec<f64> = labels
        .iter()
        .map(|l| {
            part.known().get(l).copied().unwrap_or_else(|| {
                let r = unknown_labels
                    .iter()
                    .position(|u| u == l)
                    .expect("every non-reference label is an unknown");
                solved[r]
            })
        })
        .collect();
    Ok(PriorityVector::raw(labels.to_vec(), full).expect("admissible components are positive"))
}

/// Solves the additive system and returns the full raw vector over all
/// alternatives, computed values for the unknowns catenated with the fixed
/// references, in label order. The solution is admissible only when every
/// component is finite and strictly positive; otherwise the judgments are
/// too inconsistent for the given reference set.
pub fn solve_additive(
    c: &PcMatrix,
    labels: &[String],
    part: &ReferencePartition,
) -> Result<PriorityVector, SolverError> {
    let system = build_additive_system(c, labels, part)?;
    let solved = linalg::solve_linear_system(&system.matrix, &system.rhs).map_err(|e| match e {
        LinalgError::SingularSystem => SolverError::SingularSystem,
        other => unreachable!("square system with finite entries: {other}"),
    })?;
    for (label, &value) in system.unknown_labels.iter().zip(&solved) {
        if !value.is_finite() || value <= ADMISSIBILITY_FLOOR {
            return Err(SolverError::InadmissibleSolution {
                label: label.clone(),
                value,
            });
        }
    }
    assemble(labels, part, &system.unknown_labels, &solved)
}

/// Solves the geometric system and exponentiates: `w_i = exp(mu_i)`. For a
/// non-empty reference set the system matrix is strictly diagonally dominant
/// and the solve cannot fail; with no references at all it is singular.
pub fn solve_geometric(
    c: &PcMatrix,
    labels: &[String],
    part: &ReferencePartition,
) -> Result<PriorityVector, SolverError> {
    let system = build_geometric_system(c, labels, part)?;
    let mu = linalg::solve_linear_system(&system.matrix, &system.rhs).map_err(|e| match e {
        LinalgError::SingularSystem => SolverError::SingularSystem,
        other => unreachable!("square system with finite entries: {other}"),
    })?;
    let solved: Vec<f64> = mu.iter().map(|m| m.exp()).collect();
    for (label, &value) in system.unknown_labels.iter().zip(&solved) {
        if !value.is_finite() || value <= ADMISSIBILITY_FLOOR {
            return Err(SolverError::InadmissibleSolution {
                label: label.clone(),
                value,
            });
        }
    }
    assemble(labels, part, &system.unknown_labels, &solved)
}

/// Degenerate all-known case: the references already are the full ranking.
pub fn passthrough_known(
    labels: &[String],
    part: &ReferencePartition,
) -> Result<PriorityVector, SolverError> {
    if !part.unknown().is_empty() {
        return Err(SolverError::PartitionMismatch {
            context: format!("{} unknowns present, expected none", part.unknown().len()),
        });
    }
    if part.known().len() != labels.len() {
        return Err(SolverError::PartitionMismatch {
            context: format!(
                "{} known values for {} labels",
                part.known().len(),
                labels.len()
            ),
        });
    }
    let mut values = Vec::with_capacity(labels.len());
    for label in labels {
        match part.known().get(label) {
            Some(&v) => values.push(v),
            None => {
                return Err(SolverError::PartitionMismatch {
                    context: format!("label {label:?} has no known value"),
                })
            }
        }
    }
    Ok(PriorityVector::raw(labels.to_vec(), values).expect("known values validated positive"))
}
