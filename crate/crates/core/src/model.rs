//! Decision-model documents: parsing with path-qualified validation,
//! known-ratio autofill, canonical serialization, and report rendering.
//!
//! Documents are UTF-8 JSON:
//!
//! ```json
//! {
//!   "alternatives": ["a1", "a2", "a3"],
//!   "criteria": [
//!     {
//!       "id": "pr",
//!       "method": "hre-additive",
//!       "direction": "benefit",
//!       "weight": 0.5,
//!       "known": { "a3": 20 },
//!       "matrix": [[1, "1/2", 2], [2, 1, null], ...]
//!     }
//!   ],
//!   "criteria_matrix": [[...]],
//!   "criteria_method": "evm"
//! }
//! ```
//!
//! Numeric entries may be JSON numbers or fraction strings ("8/15", "1/3").
//! A matrix entry may be `null` only where both alternatives have known
//! priorities; such entries are recomputed as the ratio of the known values.
//! Supplied known-known entries are recomputed too, after checking they do
//! not contradict the ratio.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::hierarchy::{
    CriterionNode, CriterionReport, DecisionModel, Direction, Method, NodeContent, RankingReport,
    SubCriterion,
};
use crate::matrix::{MatrixError, PcMatrix, DEFAULT_CHECK_TOL};
use std::collections::BTreeMap;

/// A user-supplied known-known entry may deviate from the ratio of the known
/// priorities by at most this relative amount before it is rejected.
pub const KNOWN_RATIO_RTOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {reason}")]
    Schema { path: String, reason: String },
    #[error("{path}: expected {expected} entries, found {found}")]
    DimensionMismatch {
        path: String,
        expected: usize,
        found: usize,
    },
    #[error("{path}: label {label:?} is not among the alternatives")]
    UnknownLabel { path: String, label: String },
    #[error(
        "criteria weights must be given either explicitly on every root criterion or via \
         `criteria_matrix`, not both, not partially"
    )]
    ConflictingWeightSpec,
    #[error("{path}: entry may be null only where both alternatives have known priorities")]
    HoleAtUnknownPair { path: String },
    #[error(
        "{path}: supplied value {supplied} conflicts with the ratio {expected} of the known \
         priorities (these entries are derived, not judged)"
    )]
    KnownRatioConflict {
        path: String,
        supplied: f64,
        expected: f64,
    },
}

/// Non-fatal finding attached to a document path.
#[derive(Debug, Clone, PartialEq)]
pub struct Warning {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "warning: {}: {}", self.path, self.message)
    }
}

/// A validated model plus any warnings raised while reading it.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedModel {
    pub model: DecisionModel,
    pub warnings: Vec<Warning>,
}

/// Parses and validates a model document. Every failure names the document
/// path it was found at.
pub fn parse_model(text: &str) -> Result<ParsedModel, ModelError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ModelError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut warnings = Vec::new();

    let root = expect_object(&value, "$")?;
    check_keys(
        root,
        "$",
        &["alternatives", "criteria", "criteria_matrix", "criteria_method"],
    )?;

    let alternatives = parse_alternatives(require(root, "$", "alternatives")?)?;

    let criteria_value = require(root, "$", "criteria")?;
    let criteria_array = expect_array(criteria_value, "$.criteria")?;
    if criteria_array.is_empty() {
        return Err(ModelError::Schema {
            path: "$.criteria".to_string(),
            reason: "at least one criterion is required".to_string(),
        });
    }
    let mut seen_ids = BTreeSet::new();
    let mut criteria = Vec::with_capacity(criteria_array.len());
    for (i, item) in criteria_array.iter().enumerate() {
        let path = format!("$.criteria[{i}]");
        criteria.push(parse_criterion(
            item,
            &path,
            &alternatives,
            &mut seen_ids,
            false,
            &mut warnings,
        )?);
    }

    let criteria_matrix = match root.get("criteria_matrix") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let path = "$.criteria_matrix";
            let grid = parse_grid(v, path, criteria.len())?;
            // no reference priorities exist at the criteria level, so a null
            // entry can never be filled
            let matrix = autofill_known_ratios(&grid, &ids_of(&criteria), &BTreeMap::new(), path)?;
            if !matrix.is_reciprocal(DEFAULT_CHECK_TOL) {
                warnings.push(Warning {
                    path: path.to_string(),
                    message: "matrix is not reciprocal".to_string(),
                });
            }
            Some(matrix)
        }
    };

    let criteria_method = match root.get("criteria_method") {
        None => Method::Evm,
        Some(v) => {
            let m = parse_method(v, "$.criteria_method")?;
            if m.uses_references() {
                return Err(ModelError::Schema {
                    path: "$.criteria_method".to_string(),
                    reason: format!(
                        "{} needs known priorities, which do not exist for criteria; use evm or gmm",
                        m.as_str()
                    ),
                });
            }
            m
        }
    };

    // weights are all-explicit XOR matrix-derived
    let with_weight = criteria.iter().filter(|c| c.weight.is_some()).count();
    match (&criteria_matrix, with_weight) {
        (Some(_), 0) => {}
        (None, w) if w == criteria.len() => {}
        _ => return Err(ModelError::ConflictingWeightSpec),
    }

    Ok(ParsedModel {
        model: DecisionModel {
            alternatives,
            criteria,
            criteria_matrix,
            criteria_method,
        },
        warnings,
    })
}

fn ids_of(criteria: &[CriterionNode]) -> Vec<String> {
    criteria.iter().map(|c| c.id.clone()).collect()
}

fn parse_alternatives(value: &Value) -> Result<Vec<String>, ModelError> {
    let array = expect_array(value, "$.alternatives")?;
    if array.is_empty() {
        return Err(ModelError::Schema {
            path: "$.alternatives".to_string(),
            reason: "at least one alternative is required".to_string(),
        });
    }
    let mut labels = Vec::with_capacity(array.len());
    for (i, item) in array.iter().enumerate() {
        let path = format!("$.alternatives[{i}]");
        let label = item
            .as_str()
            .ok_or_else(|| ModelError::Schema {
                path: path.clone(),
                reason: "expected a string label".to_string(),
            })?
            .to_string();
        if label.is_empty() {
            return Err(ModelError::Schema {
                path,
                reason: "label must not be empty".to_string(),
            });
        }
        if labels.contains(&label) {
            return Err(ModelError::Schema {
                path,
                reason: format!("duplicate alternative {label:?}"),
            });
        }
        labels.push(label);
    }
    Ok(labels)
}

fn parse_criterion(
    value: &Value,
    path: &str,
    alternatives: &[String],
    seen_ids: &mut BTreeSet<String>,
    is_sub: bool,
    warnings: &mut Vec<Warning>,
) -> Result<CriterionNode, ModelError> {
    let obj = expect_object(value, path)?;
    check_keys(
        obj,
        path,
        &["id", "method", "direction", "weight", "known", "matrix", "subcriteria"],
    )?;

    let id = obj
        .get("id")
        .and_then(Value::as_str)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| ModelError::Schema {
            path: format!("{path}.id"),
            reason: "a non-empty string id is required".to_string(),
        })?
        .to_string();
    if !seen_ids.insert(id.clone()) {
        return Err(ModelError::Schema {
            path: format!("{path}.id"),
            reason: format!("duplicate criterion id {id:?}"),
        });
    }

    let direction = match obj.get("direction") {
        None => Direction::Benefit,
        Some(v) => parse_direction(v, &format!("{path}.direction"))?,
    };

    let mut known = BTreeMap::new();
    if let Some(v) = obj.get("known") {
        let map = expect_object(v, &format!("{path}.known"))?;
        for (label, raw) in map {
            let entry_path = format!("{path}.known.{label}");
            if !alternatives.contains(label) {
                return Err(ModelError::UnknownLabel {
                    path: entry_path,
                    label: label.clone(),
                });
            }
            let value = parse_number(raw, &entry_path)?;
            if value <= 0.0 {
                return Err(ModelError::Schema {
                    path: entry_path,
                    reason: format!("known priority must be positive, got {value}"),
                });
            }
            known.insert(label.clone(), value);
        }
    }

    let method = match obj.get("method") {
        Some(v) => parse_method(v, &format!("{path}.method"))?,
        // mirror the usual usage: references present means estimation from
        // references, otherwise plain eigenvector prioritization
        None => {
            if known.is_empty() {
                Method::Evm
            } else {
                Method::HreAdditive
            }
        }
    };
    if method.uses_references() && known.is_empty() {
        return Err(ModelError::Schema {
            path: format!("{path}.method"),
            reason: format!(
                "{} requires at least one known priority in `known`",
                method.as_str()
            ),
        });
    }
    if !method.uses_references() && !known.is_empty() {
        return Err(ModelError::Schema {
            path: format!("{path}.known"),
            reason: format!("method {} takes no known priorities", method.as_str()),
        });
    }

    let weight = match obj.get("weight") {
        None => None,
        Some(v) => {
            let w = parse_number(v, &format!("{path}.weight"))?;
            let floor_ok = if is_sub { w > 0.0 } else { w >= 0.0 };
            if !floor_ok {
                return Err(ModelError::Schema {
                    path: format!("{path}.weight"),
                    reason: format!(
                        "weight must be {} , got {w}",
                        if is_sub { "positive" } else { "non-negative" }
                    ),
                });
            }
            Some(w)
        }
    };
    if is_sub && weight.is_none() {
        return Err(ModelError::Schema {
            path: format!("{path}.weight"),
            reason: "sub-criteria must carry an explicit local weight".to_string(),
        });
    }

    let content = match (obj.get("matrix"), obj.get("subcriteria")) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(ModelError::Schema {
                path: path.to_string(),
                reason: "exactly one of `matrix` or `subcriteria` is required".to_string(),
            });
        }
        (Some(m), None) => {
            let matrix_path = format!("{path}.matrix");
            let grid = parse_grid(m, &matrix_path, alternatives.len())?;
            let matrix = autofill_known_ratios(&grid, alternatives, &known, &matrix_path)?;
            if !matrix.is_reciprocal(DEFAULT_CHECK_TOL) {
                warnings.push(Warning {
                    path: matrix_path,
                    message: "matrix is not reciprocal".to_string(),
                });
            }
            NodeContent::Matrix(matrix)
        }
        (None, Some(s)) => {
            if !known.is_empty() {
                return Err(ModelError::Schema {
                    path: format!("{path}.known"),
                    reason: "known priorities apply to judgment matrices, not sub-criteria nodes"
                        .to_string(),
                });
            }
            let array = expect_array(s, &format!("{path}.subcriteria"))?;
            if array.is_empty() {
                return Err(ModelError::Schema {
                    path: format!("{path}.subcriteria"),
                    reason: "at least one sub-criterion is required".to_string(),
                });
            }
            let mut subs = Vec::with_capacity(array.len());
            for (i, item) in array.iter().enumerate() {
                let sub_path = format!("{path}.subcriteria[{i}]");
                let node =
                    parse_criterion(item, &sub_path, alternatives, seen_ids, true, warnings)?;
                let weight = node.weight.expect("sub-criterion weight enforced above");
                subs.push(SubCriterion { node, weight });
            }
            NodeContent::Subcriteria(subs)
        }
    };

    Ok(CriterionNode {
        id,
        method,
        direction,
        known,
        content,
        weight,
    })
}

/// Grid of judgments where `None` marks an entry left for autofill.
fn parse_grid(
    value: &Value,
    path: &str,
    expected: usize,
) -> Result<Vec<Vec<Option<f64>>>, ModelError> {
    let rows = expect_array(value, path)?;
    if rows.len() != expected {
        return Err(ModelError::DimensionMismatch {
            path: path.to_string(),
            expected,
            found: rows.len(),
        });
    }
    let mut grid = Vec::with_capacity(expected);
    for (r, row_value) in rows.iter().enumerate() {
        let row_path = format!("{path}[{r}]");
        let row = expect_array(row_value, &row_path)?;
        if row.len() != expected {
            return Err(ModelError::DimensionMismatch {
                path: row_path,
                expected,
                found: row.len(),
            });
        }
        let mut parsed = Vec::with_capacity(expected);
        for (c, entry) in row.iter().enumerate() {
            if entry.is_null() {
                parsed.push(None);
            } else {
                parsed.push(Some(parse_number(entry, &format!("{row_path}[{c}]"))?));
            }
        }
        grid.push(parsed);
    }
    Ok(grid)
}

/// Fills every known-known position with the ratio of the known priorities.
/// Holes anywhere else are errors; supplied known-known values are checked
/// against the ratio and then replaced by it (derived entries are never
/// trusted as judgments).
pub fn autofill_known_ratios(
    grid: &[Vec<Option<f64>>],
    labels: &[String],
    known: &BTreeMap<String, f64>,
    base_path: &str,
) -> Result<PcMatrix, ModelError> {
    let n = grid.len();
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let path = || format!("{base_path}[{i}][{j}]");
            let ratio = match (known.get(&labels[i]), known.get(&labels[j])) {
                (Some(wi), Some(wj)) => Some(wi / wj),
                _ => None,
            };
            rows[i][j] = match (grid[i][j], ratio) {
                (None, Some(r)) => r,
                (None, None) => return Err(ModelError::HoleAtUnknownPair { path: path() }),
                (Some(v), Some(r)) => {
                    if (v - r).abs() > KNOWN_RATIO_RTOL * r.abs() {
                        return Err(ModelError::KnownRatioConflict {
                            path: path(),
                            supplied: v,
                            expected: r,
                        });
                    }
                    r
                }
                (Some(v), None) => v,
            };
        }
    }
    PcMatrix::new(rows).map_err(|e| matrix_error_to_schema(e, base_path))
}

fn matrix_error_to_schema(err: MatrixError, base_path: &str) -> ModelError {
    let path = match &err {
        MatrixError::NonPositiveEntry { row, col, .. }
        | MatrixError::NonFiniteEntry { row, col } => {
            format!("{base_path}[{}][{}]", row - 1, col - 1)
        }
        MatrixError::NonUnitDiagonal { index, .. } => {
            format!("{base_path}[{}][{}]", index - 1, index - 1)
        }
        MatrixError::NonSquare { row, .. } => format!("{base_path}[{}]", row - 1),
        MatrixError::Empty => base_path.to_string(),
    };
    ModelError::Schema {
        path,
        reason: err.to_string(),
    }
}

fn parse_method(value: &Value, path: &str) -> Result<Method, ModelError> {
    match value.as_str() {
        Some("hre-additive") => Ok(Method::HreAdditive),
        Some("hre-geometric") => Ok(Method::HreGeometric),
        Some("evm") => Ok(Method::Evm),
        Some("gmm") => Ok(Method::Gmm),
        _ => Err(ModelError::Schema {
            path: path.to_string(),
            reason: format!(
                "expected one of \"hre-additive\", \"hre-geometric\", \"evm\", \"gmm\", got {value}"
            ),
        }),
    }
}

fn parse_direction(value: &Value, path: &str) -> Result<Direction, ModelError> {
    match value.as_str() {
        Some("benefit") => Ok(Direction::Benefit),
        Some("cost") => Ok(Direction::Cost),
        _ => Err(ModelError::Schema {
            path: path.to_string(),
            reason: format!("expected \"benefit\" or \"cost\", got {value}"),
        }),
    }
}

/// Numbers are JSON numbers or strings: a fraction "a/b" (components may be
/// decimal) or a plain decimal string.
fn parse_number(value: &Value, path: &str) -> Result<f64, ModelError> {
    let schema_err = |reason: String| ModelError::Schema {
        path: path.to_string(),
        reason,
    };
    let parse_component = |s: &str| -> Result<f64, ModelError> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| schema_err(format!("cannot read {s:?} as a number")))
    };
    match value {
        Value::Number(n) => n
            .as_f64()
            .filter(|v| v.is_finite())
            .ok_or_else(|| schema_err(format!("number {n} is not a finite double"))),
        Value::String(s) => match s.split_once('/') {
            Some((num, den)) => {
                let num = parse_component(num)?;
                let den = parse_component(den)?;
                if den == 0.0 {
                    return Err(schema_err(format!("fraction {s:?} divides by zero")));
                }
                Ok(num / den)
            }
            None => parse_component(s),
        },
        other => Err(schema_err(format!(
            "expected a number or fraction string, got {other}"
        ))),
    }
}

fn expect_object<'v>(value: &'v Value, path: &str) -> Result<&'v Map<String, Value>, ModelError> {
    value.as_object().ok_or_else(|| ModelError::Schema {
        path: path.to_string(),
        reason: "expected an object".to_string(),
    })
}

fn expect_array<'v>(value: &'v Value, path: &str) -> Result<&'v Vec<Value>, ModelError> {
    value.as_array().ok_or_else(|| ModelError::Schema {
        path: path.to_string(),
        reason: "expected an array".to_string(),
    })
}

fn require<'v>(
    obj: &'v Map<String, Value>,
    path: &str,
    key: &str,
) -> Result<&'v Value, ModelError> {
    obj.get(key).ok_or_else(|| ModelError::Schema {
        path: format!("{path}.{key}"),
        reason: format!("missing required key {key:?}"),
    })
}

fn check_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), ModelError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(ModelError::Schema {
                path: format!("{path}.{key}"),
                reason: format!("unknown key {key:?} (allowed: {})", allowed.join(", ")),
            });
        }
    }
    Ok(())
}

/// Canonical JSON form of a model; `parse_model` on the output yields an
/// equivalent model with bit-exact matrices.
pub fn serialize_model(model: &DecisionModel) -> String {
    let mut root = Map::new();
    root.insert(
        "alternatives".to_string(),
        json!(model.alternatives.clone()),
    );
    root.insert(
        "criteria".to_string(),
        Value::Array(model.criteria.iter().map(criterion_value).collect()),
    );
    if let Some(matrix) = &model.criteria_matrix {
        root.insert("criteria_matrix".to_string(), json!(matrix.rows()));
        root.insert(
            "criteria_method".to_string(),
            json!(model.criteria_method.as_str()),
        );
    }
    serde_json::to_string_pretty(&Value::Object(root)).expect("document values are plain JSON")
}

fn criterion_value(node: &CriterionNode) -> Value {
    let mut obj = Map::new();
    obj.insert("id".to_string(), json!(node.id));
    obj.insert("method".to_string(), json!(node.method.as_str()));
    obj.insert("direction".to_string(), json!(node.direction.as_str()));
    if let Some(w) = node.weight {
        obj.insert("weight".to_string(), json!(w));
    }
    if !node.known.is_empty() {
        obj.insert("known".to_string(), json!(node.known));
    }
    match &node.content {
        NodeContent::Matrix(matrix) => {
            obj.insert("matrix".to_string(), json!(matrix.rows()));
        }
        NodeContent::Subcriteria(subs) => {
            obj.insert(
                "subcriteria".to_string(),
                Value::Array(subs.iter().map(|s| criterion_value(&s.node)).collect()),
            );
        }
    }
    Value::Object(obj)
}

/// Output encoding for [`render_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Human-readable tables, 4 decimal places.
    Text,
    /// JSON mirror of the report, full precision.
    Structured,
}

/// Renders a ranking report. The text form prints per-criterion tables (raw
/// and normalized), criteria weights, per-matrix diagnostics, and the final
/// ranking sorted descending with ties in input order. The structured form
/// is the JSON serialization of the report itself.
pub fn render_report(report: &RankingReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Structured => {
            serde_json::to_string_pretty(report).expect("report serializes")
        }
        ReportFormat::Text => render_text(report),
    }
}

fn render_text(report: &RankingReport) -> String {
    let mut out = String::new();
    let label_width = report
        .alternatives
        .iter()
        .map(String::len)
        .max()
        .unwrap_or(1)
        .max(4);

    writeln!(out, "alternatives: {}", report.alternatives.join(", ")).unwrap();
    for criterion in &report.criteria {
        render_criterion_text(&mut out, criterion, None, 0, label_width);
    }

    writeln!(out, "\ncriteria weights").unwrap();
    for (id, weight) in report.criteria_weights.iter() {
        writeln!(out, "  {id}  {weight:.4}").unwrap();
    }

    writeln!(out, "\nfinal ranking").unwrap();
    for (position, (label, value)) in report.ranking().iter().enumerate() {
        writeln!(
            out,
            "  {}. {label:<label_width$}  {value:.4}",
            position + 1
        )
        .unwrap();
    }
    out
}

fn render_criterion_text(
    out: &mut String,
    criterion: &CriterionReport,
    local_weight: Option<f64>,
    depth: usize,
    label_width: usize,
) {
    let indent = "  ".repeat(depth);
    let kind = if depth == 0 { "criterion" } else { "sub-criterion" };
    write!(
        out,
        "\n{indent}{kind} {} [{}, {}]",
        criterion.id,
        criterion.method.as_str(),
        criterion.direction.as_str()
    )
    .unwrap();
    if let Some(w) = local_weight {
        write!(out, " local-weight={w:.4}").unwrap();
    }
    match &criterion.diagnostics {
        Some(d) => {
            write!(
                out,
                "  reciprocal={} CI={:.4} K={:.4}",
                if d.reciprocal { "yes" } else { "no" },
                d.consistency_index,
                d.koczkodaj_index
            )
            .unwrap();
        }
        None => write!(out, "  (aggregates sub-criteria)").unwrap(),
    }
    if let Some(admissible) = criterion.admissible {
        write!(out, " admissible={}", if admissible { "yes" } else { "no" }).unwrap();
    }
    out.push('\n');

    match &criterion.raw {
        Some(raw) => {
            writeln!(
                out,
                "{indent}  {:<label_width$}  {:>12}  {:>10}",
                "", "raw", "normalized"
            )
            .unwrap();
            for ((label, value), (_, normalized)) in raw.iter().zip(criterion.normalized.iter()) {
                writeln!(
                    out,
                    "{indent}  {label:<label_width$}  {value:>12.4}  {normalized:>10.4}"
                )
                .unwrap();
            }
        }
        None => {
            for (label, normalized) in criterion.normalized.iter() {
                writeln!(out, "{indent}  {label:<label_width$}  {normalized:>10.4}").unwrap();
            }
        }
    }
    for (weight, sub) in &criterion.subcriteria {
        render_criterion_text(out, sub, Some(*weight), depth + 1, label_width);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "alternatives": ["x", "y"],
        "criteria": [
            { "id": "c", "method": "evm", "weight": 1, "matrix": [[1, 2], ["1/2", 1]] }
        ]
    }"#;

    #[test]
    fn parses_minimal_document() {
        let parsed = parse_model(MINIMAL).unwrap();
        assert!(parsed.warnings.is_empty());
        let model = parsed.model;
        assert_eq!(model.alternatives, vec!["x", "y"]);
        assert_eq!(model.criteria.len(), 1);
        let NodeContent::Matrix(m) = &model.criteria[0].content else {
            panic!("expected a matrix node");
        };
        assert_eq!(m.get(1, 0), 0.5);
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_model("{ not json").unwrap_err();
        assert!(matches!(err, ModelError::Syntax { line: 1, .. }));
    }

    #[test]
    fn dimension_mismatch_carries_path() {
        let text = r#"{
            "alternatives": ["x", "y", "z"],
            "criteria": [
                { "id": "c", "weight": 1,
                  "matrix": [[1, 2, 3, 4], [1, 1, 1, 1], [1, 1, 1, 1]] }
            ]
        }"#;
        let err = parse_model(text).unwrap_err();
        assert_eq!(
            err,
            ModelError::DimensionMismatch {
                path: "$.criteria[0].matrix[0]".to_string(),
                expected: 3,
                found: 4,
            }
        );
    }

    #[test]
    fn unknown_reference_label_is_rejected() {
        let text = r#"{
            "alternatives": ["x", "y"],
            "criteria": [
                { "id": "c", "weight": 1, "known": {"zz": 3},
                  "matrix": [[1, 2], ["1/2", 1]] }
            ]
        }"#;
        let err = parse_model(text).unwrap_err();
        assert!(matches!(err, ModelError::UnknownLabel { ref label, .. } if label == "zz"));
    }

    #[test]
    fn conflicting_weight_specs_are_rejected() {
        let partial = r#"{
            "alternatives": ["x", "y"],
            "criteria": [
                { "id": "a", "weight": 1, "matrix": [[1, 1], [1, 1]] },
                { "id": "b", "matrix": [[1, 1], [1, 1]] }
            ]
        }"#;
        assert_eq!(
            parse_model(partial).unwrap_err(),
            ModelError::ConflictingWeightSpec
        );
        let both = r#"{
            "alternatives": ["x", "y"],
            "criteria": [
                { "id": "a", "weight": 1, "matrix": [[1, 1], [1, 1]] }
            ],
            "criteria_matrix": [[1]]
        }"#;
        assert_eq!(
            parse_model(both).unwrap_err(),
            ModelError::ConflictingWeightSpec
        );
    }

    #[test]
    fn autofill_fills_known_known_holes() {
        let labels: Vec<String> = vec!["a3".into(), "a4".into()];
        let known: BTreeMap<String, f64> = [("a3".to_string(), 8.7), ("a4".to_string(), 4.2)]
            .into_iter()
            .collect();
        let grid = vec![vec![None, None], vec![None, None]];
        let m = autofill_known_ratios(&grid, &labels, &known, "$.m").unwrap();
        assert_eq!(m.get(0, 1), 8.7 / 4.2);
        assert_eq!(m.get(1, 0), 4.2 / 8.7);
        assert_eq!(m.get(0, 0), 1.0);

        let known: BTreeMap<String, f64> = [("a3".to_string(), 72.0), ("a4".to_string(), 24.0)]
            .into_iter()
            .collect();
        let m = autofill_known_ratios(&grid, &labels, &known, "$.m").unwrap();
        assert_eq!(m.get(0, 1), 3.0);
    }

    #[test]
    fn autofill_leaves_consistent_supplied_entries() {
        let labels: Vec<String> = vec!["a".into(), "b".into()];
        let known: BTreeMap<String, f64> = [("a".to_string(), 6.0), ("b".to_string(), 2.0)]
            .into_iter()
            .collect();
        let grid = vec![vec![Some(1.0), Some(3.0)], vec![Some(1.0 / 3.0), Some(1.0)]];
        let m = autofill_known_ratios(&grid, &labels, &known, "$.m").unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 2.0 / 6.0);
    }

    #[test]
    fn autofill_rejects_conflicts_and_bad_holes() {
        let labels: Vec<String> = vec!["a".into(), "b".into()];
        let known: BTreeMap<String, f64> = [("a".to_string(), 6.0), ("b".to_string(), 2.0)]
            .into_iter()
            .collect();
        let grid = vec![vec![Some(1.0), Some(2.9)], vec![None, Some(1.0)]];
        let err = autofill_known_ratios(&grid, &labels, &known, "$.m").unwrap_err();
        assert!(matches!(
            err,
            ModelError::KnownRatioConflict { ref path, .. } if path == "$.m[0][1]"
        ));

        let no_known = BTreeMap::new();
        let grid = vec![vec![Some(1.0), None], vec![Some(1.0), Some(1.0)]];
        let err = autofill_known_ratios(&grid, &labels, &no_known, "$.m").unwrap_err();
        assert_eq!(
            err,
            ModelError::HoleAtUnknownPair {
                path: "$.m[0][1]".to_string()
            }
        );
    }

    #[test]
    fn non_reciprocal_matrix_warns_but_parses() {
        let text = r#"{
            "alternatives": ["x", "y"],
            "criteria": [
                { "id": "c", "weight": 1, "matrix": [[1, 3], ["1/2", 1]] }
            ]
        }"#;
        let parsed = parse_model(text).unwrap();
        assert_eq!(parsed.warnings.len(), 1);
        assert_eq!(parsed.warnings[0].path, "$.criteria[0].matrix");
    }

    #[test]
    fn fraction_strings_parse_to_doubles() {
        assert_eq!(parse_number(&json!("8/15"), "$").unwrap(), 8.0 / 15.0);
        assert_eq!(parse_number(&json!("1/3"), "$").unwrap(), 1.0 / 3.0);
        assert_eq!(parse_number(&json!("8.7/4.2"), "$").unwrap(), 8.7 / 4.2);
        assert_eq!(parse_number(&json!("2.5"), "$").unwrap(), 2.5);
        assert_eq!(parse_number(&json!(0.25), "$").unwrap(), 0.25);
        assert!(parse_number(&json!("1/0"), "$").is_err());
        assert!(parse_number(&json!("x/2"), "$").is_err());
        assert!(parse_number(&json!(true), "$").is_err());
    }

    #[test]
    fn default_method_follows_known_presence() {
        let text = r#"{
            "alternatives": ["x", "y"],
            "criteria": [
                { "id": "a", "weight": 1, "known": {"y": 2}, "matrix": [[1, 2], ["1/2", 1]] },
                { "id": "b", "weight": 1, "matrix": [[1, 2], ["1/2", 1]] }
            ]
        }"#;
        let model = parse_model(text).unwrap().model;
        assert_eq!(model.criteria[0].method, Method::HreAdditive);
        assert_eq!(model.criteria[1].method, Method::Evm);
    }

    #[test]
    fn round_trip_preserves_model() {
        let text = r#"{
            "alternatives": ["x", "y", "z"],
            "criteria": [
                { "id": "a", "weight": 0.7, "known": {"z": "7/3"}, "direction": "cost",
                  "matrix": [[1, 2, 3], ["1/2", 1, "1/5"], ["1/3", 5, 1]] },
                { "id": "s", "weight": 0.3, "subcriteria": [
                    { "id": "s1", "weight": 1, "method": "gmm",
                      "matrix": [[1, 2, 3], ["1/2", 1, "1/5"], ["1/3", 5, 1]] },
                    { "id": "s2", "weight": 2,
                      "matrix": [[1, 1, 1], [1, 1, 1], [1, 1, 1]] }
                ]}
            ]
        }"#;
        let first = parse_model(text).unwrap().model;
        let second = parse_model(&serialize_model(&first)).unwrap().model;
        assert_eq!(first, second);
    }
}
