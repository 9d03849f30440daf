//! Decision ranking from pairwise comparisons, with and without reference
//! alternatives.
//!
//! The crate covers the full pipeline:
//!
//! - [`matrix`]: pairwise comparison matrices with reciprocity/consistency
//!   checks and the Saaty and Koczkodaj inconsistency indices
//! - [`linalg`]: the dense kernels behind everything (Gaussian elimination
//!   with partial pivoting, power iteration for the dominant eigenpair)
//! - [`prioritize`]: classical single-matrix prioritization (EVM, GMM) and
//!   the [`prioritize::PriorityVector`] type
//! - [`solver`]: rating estimation when some alternatives carry fixed,
//!   a-priori known priorities (additive `Mw = b` and geometric `N mu = d`
//!   variants)
//! - [`hierarchy`]: multi-criteria models mixing all of the above, with
//!   sub-criterion trees, cost-direction handling, criteria weighting and
//!   the final linear aggregation
//! - [`model`]: the JSON document format, validation with path-qualified
//!   errors, and report rendering

pub mod hierarchy;
pub mod linalg;
pub mod matrix;
pub mod model;
pub mod prioritize;
pub mod solver;

pub use hierarchy::{
    aggregate, criteria_weights, evaluate_criterion, invert_cost, rank_criterion, CriterionNode,
    CriterionReport, DecisionModel, Direction, HierarchyError, MatrixDiagnostics, Method,
    NodeContent, RankingReport, SubCriterion,
};
pub use linalg::{principal_eigenpair, solve_linear_system, DenseMatrix, EigenResult, LinalgError};
pub use matrix::{MatrixError, PcMatrix, Triad};
pub use model::{
    autofill_known_ratios, parse_model, render_report, serialize_model, ModelError, ParsedModel,
    ReportFormat, Warning,
};
pub use prioritize::{evm, gmm, PriorityError, PriorityVector};
pub use solver::{
    build_additive_system, build_geometric_system, passthrough_known, solve_additive,
    solve_geometric, HreSystem, HreVariant, ReferencePartition, SolverError,
};
