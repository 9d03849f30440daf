//! `hre` — rank decision alternatives from pairwise comparison documents.
//!
//! Three subcommands: `solve` runs the full ranking, `validate` checks a
//! document and prints per-matrix diagnostics, `inspect` prints one
//! inconsistency index for one criterion. Output goes to stdout, errors to
//! stderr. Exit codes: 0 success, 1 input/validation error, 2 mathematical
//! infeasibility (a singular or inadmissible solve).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hre_core::hierarchy::{self, HierarchyError, NodeContent};
use hre_core::matrix::DEFAULT_CHECK_TOL;
use hre_core::model::{self, ParsedModel, ReportFormat};
use hre_core::solver::SolverError;

const EXIT_INPUT: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;

#[derive(Parser)]
#[command(name = "hre", version, about = "Decision ranking from pairwise comparisons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a decision model and print the ranking report.
    Solve {
        /// Path to the model document (JSON).
        model: PathBuf,
        /// Report encoding.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Validate a model document and print per-matrix diagnostics.
    Validate {
        /// Path to the model document (JSON).
        model: PathBuf,
    },
    /// Print one inconsistency index of one criterion's matrix.
    Inspect {
        /// Path to the model document (JSON).
        model: PathBuf,
        /// Criterion id (sub-criteria are found too).
        #[arg(long)]
        criterion: String,
        /// Which index to print.
        #[arg(long, value_enum)]
        index: IndexKind,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IndexKind {
    /// Saaty consistency index.
    Ci,
    /// Koczkodaj triad index.
    Koczkodaj,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { model, format } => cmd_solve(&model, format),
        Command::Validate { model } => cmd_validate(&model),
        Command::Inspect {
            model,
            criterion,
            index,
        } => cmd_inspect(&model, &criterion, index),
    }
}

fn load(path: &Path) -> Result<ParsedModel, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    model::parse_model(&text).map_err(|e| Failure::input(e.to_string()))
}

fn cmd_solve(path: &Path, format: Format) -> Result<(), Failure> {
    let parsed = load(path)?;
    for warning in &parsed.warnings {
        eprintln!("{warning}");
    }
    let report = hierarchy::aggregate(&parsed.model).map_err(classify_hierarchy_error)?;
    let rendered = model::render_report(
        &report,
        match format {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Structured,
        },
    );
    println!("{rendered}");
    Ok(())
}

/// Infeasible mathematics gets its own exit code so scripts can branch on
/// "the judgments do not admit a solution" separately from bad input.
fn classify_hierarchy_error(err: HierarchyError) -> Failure {
    let code = match &err {
        HierarchyError::Solver {
            source: SolverError::InadmissibleSolution { .. } | SolverError::SingularSystem,
            ..
        }
        | HierarchyError::Eigen { .. } => EXIT_INFEASIBLE,
        _ => EXIT_INPUT,
    };
    Failure {
        code,
        message: err.to_string(),
    }
}

fn cmd_validate(path: &Path) -> Result<(), Failure> {
    let parsed = load(path)?;
    for warning in &parsed.warnings {
        println!("{warning}");
    }
    let model = &parsed.model;
    for node in &model.criteria {
        print_node_diagnostics(node, 0)?;
    }
    if let Some(matrix) = &model.criteria_matrix {
        print_matrix_line("criteria matrix", matrix, 0)?;
    }
    println!(
        "model OK: {} alternatives, {} criteria{}",
        model.alternatives.len(),
        model.criteria.len(),
        if parsed.warnings.is_empty() {
            ""
        } else {
            " (with warnings)"
        }
    );
    Ok(())
}

fn print_node_diagnostics(node: &hre_core::CriterionNode, depth: usize) -> Result<(), Failure> {
    let indent = "  ".repeat(depth);
    match &node.content {
        NodeContent::Matrix(matrix) => {
            print_matrix_line(&format!("{indent}criterion {}", node.id), matrix, depth)?;
        }
        NodeContent::Subcriteria(subs) => {
            println!("{indent}criterion {}: aggregates {} sub-criteria", node.id, subs.len());
            for sub in subs {
                print_node_diagnostics(&sub.node, depth + 1)?;
            }
        }
    }
    Ok(())
}

fn print_matrix_line(
    prefix: &str,
    matrix: &hre_core::PcMatrix,
    _depth: usize,
) -> Result<(), Failure> {
    let ci = matrix
        .saaty_ci()
        .map_err(|e| Failure::input(format!("{prefix}: {e}")))?;
    println!(
        "{prefix}: order={} reciprocal={} CI={:.4} koczkodaj={:.4}",
        matrix.order(),
        if matrix.is_reciprocal(DEFAULT_CHECK_TOL) {
            "yes"
        } else {
            "no"
        },
        ci,
        matrix.koczkodaj_index()
    );
    Ok(())
}

fn cmd_inspect(path: &Path, criterion: &str, index: IndexKind) -> Result<(), Failure> {
    let parsed = load(path)?;
    let node = parsed
        .model
        .find_criterion(criterion)
        .ok_or_else(|| Failure::input(format!("no criterion with id {criterion:?}")))?;
    let matrix = match &node.content {
        NodeContent::Matrix(m) => m,
        NodeContent::Subcriteria(_) => {
            return Err(Failure::input(format!(
                "criterion {criterion:?} aggregates sub-criteria and has no matrix of its own"
            )));
        }
    };
    let value = match index {
        IndexKind::Ci => matrix
            .saaty_ci()
            .map_err(|e| Failure::input(e.to_string()))?,
        IndexKind::Koczkodaj => matrix.koczkodaj_index(),
    };
    println!("{value}");
    Ok(())
}
