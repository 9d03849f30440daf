//! The multiple-criteria layer: alternatives are ranked per criterion with a
//! per-node method (reference-based additive/geometric estimation, or plain
//! EVM/GMM), criterion trees combine sub-rankings with local weights, cost
//! criteria are inverted, and the final ranking is the criteria-weighted
//! linear combination of the normalized per-criterion vectors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::LinalgError;
use crate::matrix::{PcMatrix, DEFAULT_CHECK_TOL};
use crate::prioritize::{self, PriorityVector};
use crate::solver::{self, ReferencePartition, SolverError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    HreAdditive,
    HreGeometric,
    Evm,
    Gmm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::HreAdditive => "hre-additive",
            Method::HreGeometric => "hre-geometric",
            Method::Evm => "evm",
            Method::Gmm => "gmm",
        }
    }

    pub fn uses_references(&self) -> bool {
        matches!(self, Method::HreAdditive | Method::HreGeometric)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Larger raw values are better.
    Benefit,
    /// Smaller raw values are better (e.g. expected defect counts); handled
    /// by taking elementwise reciprocals of the raw vector.
    Cost,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Benefit => "benefit",
            Direction::Cost => "cost",
        }
    }
}

/// Either a judgment matrix over the alternatives or a list of weighted
/// sub-criteria; never both.
#[derive(Debug, Clone, PartialEq)]
pub enum NodeContent {
    Matrix(PcMatrix),
    Subcriteria(Vec<SubCriterion>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubCriterion {
    pub node: CriterionNode,
    /// Local weight among siblings; positive, normalized before combining.
    pub weight: f64,
}

/// One criterion: how to rank the alternatives under it.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionNode {
    pub id: String,
    pub method: Method,
    pub direction: Direction,
    /// Fixed a-priori priorities for the reference alternatives, in criterion
    /// units. Empty for eigen-based methods.
    pub known: BTreeMap<String, f64>,
    pub content: NodeContent,
    /// Explicit criterion weight; set on every root criterion or on none.
    pub weight: Option<f64>,
}

/// A complete decision problem: alternatives, a criteria forest, and the
/// criteria weighting (explicit per-criterion weights or a criteria-level
/// comparison matrix, exclusively).
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionModel {
    pub alternatives: Vec<String>,
    pub criteria: Vec<CriterionNode>,
    pub criteria_matrix: Option<PcMatrix>,
    pub criteria_method: Method,
}

impl DecisionModel {
    /// Looks a criterion up by id anywhere in the tree.
    pub fn find_criterion(&self, id: &str) -> Option<&CriterionNode> {
        fn walk<'n>(node: &'n CriterionNode, id: &str) -> Option<&'n CriterionNode> {
            if node.id == id {
                return Some(node);
            }
            match &node.content {
                NodeContent::Subcriteria(subs) => {
                    subs.iter().find_map(|s| walk(&s.node, id))
                }
                NodeContent::Matrix(_) => None,
            }
        }
        self.criteria.iter().find_map(|n| walk(n, id))
    }
}

/// Inconsistency diagnostics of one judgment matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDiagnostics {
    pub reciprocal: bool,
    pub consistency_index: f64,
    pub koczkodaj_index: f64,
}

/// Evaluation outcome of one criterion node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: String,
    pub method: Method,
    pub direction: Direction,
    /// Raw unit-bearing vector (reference-based solves only, before any cost
    /// inversion).
    pub raw: Option<PriorityVector>,
    /// Normalized ranking under this criterion, cost inversion applied.
    pub normalized: PriorityVector,
    /// Matrix diagnostics; absent on sub-criteria aggregation nodes.
    pub diagnostics: Option<MatrixDiagnostics>,
    /// Whether the additive/geometric solution passed the positivity check;
    /// absent for eigen-based methods.
    pub admissible: Option<bool>,
    /// Reports of the sub-criteria with their normalized local weights.
    pub subcriteria: Vec<(f64, CriterionReport)>,
}

/// Full evaluation of a decision model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub alternatives: Vec<String>,
    pub criteria: Vec<CriterionReport>,
    /// Criteria weights, normalized, labeled by criterion id.
    pub criteria_weights: PriorityVector,
    /// The composite ranking: criteria-weighted sum of the per-criterion
    /// normalized vectors. Sums to 1.
    pub final_vector: PriorityVector,
}

impl RankingReport {
    /// Ranking positions sorted by descending final weight; ties keep input
    /// label order (the sort is stable).
    pub fn ranking(&self) -> Vec<(&str, f64)> {
        let mut order: Vec<(&str, f64)> = self.final_vector.iter().collect();
        order.sort_by(|a, b| b.1.total_cmp(&a.1));
        order
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HierarchyError {
    #[error("criterion {id:?}: {source}")]
    Solver { id: String, source: SolverError },
    #[error("criterion {id:?}: {source}")]
    Eigen { id: String, source: LinalgError },
    #[error(
        "criterion {id:?}: method {} takes no reference priorities but `known` is non-empty",
        method.as_str()
    )]
    KnownValuesWithEigenMethod { id: String, method: Method },
    #[error(
        "criteria weights must be given either explicitly on every root criterion or via a \
         criteria matrix; mixing or omitting both is not allowed"
    )]
    MixedWeightSpecification,
    #[error("criterion {id:?}: known label {label:?} is not an alternative")]
    UnknownReferenceLabel { id: String, label: String },
    #[error("criterion {id:?}: {context}")]
    InvalidNode { id: String, context: String },
}

/// Elementwise reciprocal followed by L1 normalization. Reverses the order
/// of components, so worst becomes best; applied to raw cost-criterion
/// vectors before they enter the aggregation.
pub fn invert_cost(v: &PriorityVector) -> PriorityVector {
    assert!(
        v.values().iter().all(|&x| x > 0.0),
        "cost inversion needs strictly positive values"
    );
    let inverted: Vec<f64> = v.values().iter().map(|x| 1.0 / x).collect();
    PriorityVector::raw(v.labels().to_vec(), inverted)
        .expect("reciprocals of positive values are positive")
        .normalize()
        .expect("positive values have positive sum")
}

/// Weighted linear combination `sum_t weights[t] * vectors[t]` over a shared
/// label set. The weights are used as given (callers normalize first when
/// convex combinations are wanted).
pub fn weighted_combination(weights: &[f64], vectors: &[&PriorityVector]) -> PriorityVector {
    assert_eq!(weights.len(), vectors.len(), "one weight per vector");
    assert!(!vectors.is_empty(), "need at least one vector");
    let labels = vectors[0].labels();
    for v in vectors {
        assert_eq!(v.labels(), labels, "vectors must share the label set");
    }
    let mut acc = vec![0.0; labels.len()];
    for (w, v) in weights.iter().zip(vectors) {
        for (slot, x) in acc.iter_mut().zip(v.values()) {
            *slot += w * x;
        }
    }
    PriorityVector::raw(labels.to_vec(), acc).expect("combination of non-negative values")
}

/// Ranks the alternatives under one criterion and returns the normalized
/// vector. See [`evaluate_criterion`] for the full report.
pub fn rank_criterion(
    node: &CriterionNode,
    alternatives: &[String],
) -> Result<PriorityVector, HierarchyError> {
    Ok(evaluate_criterion(node, alternatives)?.normalized)
}

/// Evaluates one criterion node: sub-criteria recurse and combine with
/// normalized local weights; matrix nodes dispatch on the method; cost
/// criteria invert the raw vector; the result is L1-normalized.
pub fn evaluate_criterion(
    node: &CriterionNode,
    alternatives: &[String],
) -> Result<CriterionReport, HierarchyError> {
    for label in node.known.keys() {
        if !alternatives.contains(label) {
            return Err(HierarchyError::UnknownReferenceLabel {
                id: node.id.clone(),
                label: label.clone(),
            });
        }
    }

    match &node.content {
        NodeContent::Subcriteria(children) => {
            if children.is_empty() {
                return Err(HierarchyError::InvalidNode {
                    id: node.id.clone(),
                    context: "sub-criteria list is empty".to_string(),
                });
            }
            let total: f64 = children.iter().map(|s| s.weight).sum();
            if !children.iter().all(|s| s.weight > 0.0) || !total.is_finite() {
                return Err(HierarchyError::InvalidNode {
                    id: node.id.clone(),
                    context: "sub-criterion weights must be positive".to_string(),
                });
            }
            let mut reports = Vec::with_capacity(children.len());
            for sub in children {
                reports.push((
                    sub.weight / total,
                    evaluate_criterion(&sub.node, alternatives)?,
                ));
            }
            let weights: Vec<f64> = reports.iter().map(|(w, _)| *w).collect();
            let vectors: Vec<&PriorityVector> =
                reports.iter().map(|(_, r)| &r.normalized).collect();
            let combined = weighted_combination(&weights, &vectors);
            let normalized = match node.direction {
                Direction::Benefit => combined
                    .normalize()
                    .expect("convex combination of rankings is positive"),
                Direction::Cost => invert_cost(&combined),
            };
            Ok(CriterionReport {
                id: node.id.clone(),
                method: node.method,
                direction: node.direction,
                raw: None,
                normalized,
                diagnostics: None,
                admissible: None,
                subcriteria: reports,
            })
        }
        NodeContent::Matrix(matrix) => {
            if matrix.order() != alternatives.len() {
                return Err(HierarchyError::InvalidNode {
                    id: node.id.clone(),
                    context: format!(
                        "matrix order {} does not match {} alternatives",
                        matrix.order(),
                        alternatives.len()
                    ),
                });
            }
            let diagnostics = MatrixDiagnostics {
                reciprocal: matrix.is_reciprocal(DEFAULT_CHECK_TOL),
                consistency_index: matrix.saaty_ci().map_err(|source| HierarchyError::Eigen {
                    id: node.id.clone(),
                    source,
                })?,
                koczkodaj_index: matrix.koczkodaj_index(),
            };

            let (raw, admissible) = if node.method.uses_references() {
                let part = ReferencePartition::from_labels(alternatives, &node.known)
                    .map_err(|source| HierarchyError::Solver {
                        id: node.id.clone(),
                        source,
                    })?;
                let solved = if part.unknown().is_empty() {
                    solver::passthrough_known(alternatives, &part)
                } else {
                    match node.method {
                        Method::HreAdditive => solver::solve_additive(matrix, alternatives, &part),
                        Method::HreGeometric => {
                            solver::solve_geometric(matrix, alternatives, &part)
                        }
                        _ => unreachable!("eigen methods handled below"),
                    }
                };
                let vector = solved.map_err(|source| HierarchyError::Solver {
                    id: node.id.clone(),
                    source,
                })?;
                (Some(vector), Some(true))
            } else {
                if !node.known.is_empty() {
                    return Err(HierarchyError::KnownValuesWithEigenMethod {
                        id: node.id.clone(),
                        method: node.method,
                    });
                }
                let vector = match node.method {
                    Method::Evm => prioritize::evm(matrix, alternatives).map_err(|source| {
                        HierarchyError::Eigen {
                            id: node.id.clone(),
                            source,
                        }
                    })?,
                    Method::Gmm => prioritize::gmm(matrix, alternatives),
                    _ => unreachable!("reference methods handled above"),
                };
                (Some(vector), None)
            };

            let raw_vector = raw.expect("both branches produce a vector");
            let normalized = match node.direction {
                Direction::Benefit => raw_vector
                    .normalize()
                    .expect("solver outputs are strictly positive"),
                Direction::Cost => invert_cost(&raw_vector),
            };
            // raw unit-bearing values are only meaningful for reference solves
            let raw = node.method.uses_references().then_some(raw_vector);
            Ok(CriterionReport {
                id: node.id.clone(),
                method: node.method,
                direction: node.direction,
                raw,
                normalized,
                diagnostics: Some(diagnostics),
                admissible,
                subcriteria: Vec::new(),
            })
        }
    }
}

/// Criteria weights, normalized to sum 1: explicit weights when every root
/// criterion carries one, otherwise derived from the criteria matrix with
/// the configured method.
pub fn criteria_weights(model: &DecisionModel) -> Result<PriorityVector, HierarchyError> {
    let ids: Vec<String> = model.criteria.iter().map(|c| c.id.clone()).collect();
    let explicit: Vec<Option<f64>> = model.criteria.iter().map(|c| c.weight).collect();
    let any_explicit = explicit.iter().any(Option::is_some);
    let all_explicit = explicit.iter().all(Option::is_some);

    match (&model.criteria_matrix, any_explicit) {
        (Some(_), true) | (None, false) => Err(HierarchyError::MixedWeightSpecification),
        (None, true) if !all_explicit => Err(HierarchyError::MixedWeightSpecification),
        (None, true) => {
            let values: Vec<f64> = explicit.into_iter().map(Option::unwrap).collect();
            PriorityVector::raw(ids, values)
                .and_then(|v| v.normalize())
                .map_err(|e| HierarchyError::InvalidNode {
                    id: "criteria".to_string(),
                    context: format!("invalid explicit weights: {e}"),
                })
        }
        (Some(matrix), false) => {
            if matrix.order() != ids.len() {
                return Err(HierarchyError::InvalidNode {
                    id: "criteria".to_string(),
                    context: format!(
                        "criteria matrix order {} does not match {} criteria",
                        matrix.order(),
                        ids.len()
                    ),
                });
            }
            match model.criteria_method {
                Method::Evm => prioritize::evm(matrix, &ids).map_err(|source| {
                    HierarchyError::Eigen {
                        id: "criteria".to_string(),
                        source,
                    }
                }),
                Method::Gmm => Ok(prioritize::gmm(matrix, &ids)),
                m => Err(HierarchyError::InvalidNode {
                    id: "criteria".to_string(),
                    context: format!(
                        "criteria weights cannot use {} (no reference priorities exist for criteria)",
                        m.as_str()
                    ),
                }),
            }
        }
    }
}

/// Evaluates every root criterion and combines the normalized vectors with
/// the criteria weights. Any per-criterion failure (most importantly an
/// inadmissible additive solution) aborts the whole ranking with the
/// criterion id attached.
pub fn aggregate(model: &DecisionModel) -> Result<RankingReport, HierarchyError> {
    let weights = criteria_weights(model)?;
    let mut reports = Vec::with_capacity(model.criteria.len());
    for node in &model.criteria {
        reports.push(evaluate_criterion(node, &model.alternatives)?);
    }
    let vectors: Vec<&PriorityVector> = reports.iter().map(|r| &r.normalized).collect();
    let final_vector = weighted_combination(weights.values(), &vectors);
    debug_assert!((final_vector.values().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    let final_vector = PriorityVector::normalized(
        final_vector.labels().to_vec(),
        final_vector.values().to_vec(),
    )
    .expect("weighted combination of rankings is valid");
    Ok(RankingReport {
        alternatives: model.alternatives.clone(),
        criteria: reports,
        criteria_weights: weights,
        final_vector,
    })
}
