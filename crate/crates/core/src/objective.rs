//! Scalar objectives over a quality report.
//!
//! Coverage is enforced by penalty rather than hard rejection: the binary
//! visibility makes the constraint discontinuous in pose variables, so each
//! uncovered target is charged `penalty * (1 + uncovered_count)`. That orders
//! infeasible configurations by violation count and gives a derivative-free
//! solver a slope toward feasibility.

use crate::fusion::QualityReport;

/// Which scalar to minimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// Average fused quality over targets.
    Mean,
    /// Worst-case (maximum) fused quality over targets.
    Minimax,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSpec {
    pub kind: ObjectiveKind,
    /// Charge per uncovered target, millimeters per pixel. Must exceed any
    /// plausible fused quality in the workspace.
    pub coverage_penalty: f64,
}

/// Far above any physical fused quality for room-scale scenes.
pub const DEFAULT_COVERAGE_PENALTY: f64 = 1e6;

impl ObjectiveSpec {
    pub fn new(kind: ObjectiveKind) -> Self {
        Self {
            kind,
            coverage_penalty: DEFAULT_COVERAGE_PENALTY,
        }
    }
}

/// True iff every target is covered by at least one camera.
pub fn is_feasible(report: &QualityReport) -> bool {
    report.targets.iter().all(|t| t.covered)
}

/// Penalized scalarization of the report under the given objective.
pub fn objective_value(report: &QualityReport, spec: &ObjectiveSpec) -> f64 {
    let uncovered = report.targets.iter().filter(|t| !t.covered).count();
    let substitute = spec.coverage_penalty * (1.0 + uncovered as f64);
    let scores = report
        .targets
        .iter()
        .map(|t| if t.covered { t.fused_q } else { substitute });
    match spec.kind {
        ObjectiveKind::Mean => {
            let n = report.targets.len().max(1);
            scores.sum::<f64>() / n as f64
        }
        ObjectiveKind::Minimax => scores.fold(f64::NEG_INFINITY, f64::max),
    }
}
