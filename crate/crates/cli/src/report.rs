//! JSON documents for command output.
//!
//! JSON has no infinity literal, so uncovered targets serialize their fused
//! quality as the string `"inf"`; everything else is plain numbers. Field
//! order is fixed by the struct definitions, which keeps output byte-stable
//! for fixed inputs.

use camnet_core::{
    objective_value, ErrorTrialStats, ObjectiveKind, ObjectiveSpec, OptResult, QualityReport,
    Scene,
};
use serde::{Serialize, Serializer};

fn quality_or_inf<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    if value.is_finite() {
        serializer.serialize_f64(*value)
    } else {
        serializer.serialize_str("inf")
    }
}

#[derive(Debug, Serialize)]
pub struct PairDoc {
    pub camera: String,
    pub target: String,
    pub visible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_rad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_rad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_mm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_total: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ContributorDoc {
    pub camera: String,
    pub visible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_total: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct TargetDoc {
    pub id: String,
    pub covered: bool,
    #[serde(serialize_with = "quality_or_inf")]
    pub fused_q: f64,
    pub contributors: Vec<ContributorDoc>,
}

#[derive(Debug, Serialize)]
pub struct ObjectivesDoc {
    pub mean: f64,
    pub minimax: f64,
}

#[derive(Debug, Serialize)]
pub struct ReportDoc {
    pub pairs: Vec<PairDoc>,
    pub targets: Vec<TargetDoc>,
    pub objectives: ObjectivesDoc,
    pub feasible: bool,
}

impl ReportDoc {
    pub fn new(scene: &Scene, report: &QualityReport) -> Self {
        let pairs = report
            .pairs
            .iter()
            .map(|p| PairDoc {
                camera: scene.cameras[p.camera_index].id.clone(),
                target: scene.targets[p.target_index].id.clone(),
                visible: p.visible,
                beta_rad: p.geometry.map(|g| g.beta),
                gamma_rad: p.geometry.map(|g| g.gamma),
                distance_mm: p.geometry.map(|g| g.distance),
                q_p: p.quality.map(|q| q.q_p),
                q_d: p.quality.map(|q| q.q_d),
                q_total: p.quality.map(|q| q.q_total),
                error: p.error.clone(),
            })
            .collect();
        let targets = report
            .targets
            .iter()
            .map(|t| TargetDoc {
                id: t.target_id.clone(),
                covered: t.covered,
                fused_q: t.fused_q,
                contributors: t
                    .contributors
                    .iter()
                    .map(|c| ContributorDoc {
                        camera: scene.cameras[c.camera_index].id.clone(),
                        visible: c.visible,
                        q_total: c.quality,
                    })
                    .collect(),
            })
            .collect();
        let objectives = ObjectivesDoc {
            mean: objective_value(report, &ObjectiveSpec::new(ObjectiveKind::Mean)),
            minimax: objective_value(report, &ObjectiveSpec::new(ObjectiveKind::Minimax)),
        };
        ReportDoc {
            pairs,
            targets,
            objectives,
            feasible: report.targets.iter().all(|t| t.covered),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OptimizeDoc {
    pub mode: String,
    pub objective: String,
    pub starts: u32,
    pub seed: u64,
    pub max_evals: u32,
    pub best_value: f64,
    pub feasible: bool,
    pub evals_used: usize,
    pub best_config: Vec<f64>,
    pub per_start_values: Vec<f64>,
    pub report: ReportDoc,
}

#[derive(Debug, Serialize)]
pub struct OracleDoc {
    pub mode: String,
    pub objective: String,
    pub grid_points: usize,
    pub cells: u64,
    pub lipschitz_slack: f64,
    pub best_value: f64,
    pub feasible: bool,
    pub best_config: Vec<f64>,
    pub report: ReportDoc,
}

#[derive(Debug, Serialize)]
pub struct SimulateErrorDoc {
    pub camera: String,
    pub target: String,
    pub segment_length_mm: f64,
    pub trials: u32,
    pub seed: u64,
    pub quality_bound: f64,
    pub violations: u32,
    pub length_violations: u32,
    pub max_ratio: f64,
    pub ratio_q99: f64,
    pub mean_length_error_mm: f64,
}

impl SimulateErrorDoc {
    pub fn new(
        camera: &str,
        target: &str,
        segment_length_mm: f64,
        seed: u64,
        stats: &ErrorTrialStats,
    ) -> Self {
        Self {
            camera: camera.to_string(),
            target: target.to_string(),
            segment_length_mm,
            trials: stats.trials,
            seed,
            quality_bound: stats.quality_bound,
            violations: stats.violations,
            length_violations: stats.length_violations,
            max_ratio: stats.max_ratio,
            ratio_q99: stats.ratio_q99,
            mean_length_error_mm: stats.mean_length_error,
        }
    }
}

pub fn mode_name(mode: camnet_core::Mode) -> &'static str {
    match mode {
        camnet_core::Mode::Ptz => "ptz",
        camnet_core::Mode::Drone => "drone",
    }
}

pub fn objective_name(kind: ObjectiveKind) -> &'static str {
    match kind {
        ObjectiveKind::Mean => "mean",
        ObjectiveKind::Minimax => "minimax",
    }
}

pub fn optimize_doc(scene: &Scene, problem_mode: camnet_core::Mode, kind: ObjectiveKind, starts: u32, seed: u64, max_evals: u32, result: &OptResult) -> OptimizeDoc {
    OptimizeDoc {
        mode: mode_name(problem_mode).to_string(),
        objective: objective_name(kind).to_string(),
        starts,
        seed,
        max_evals,
        best_value: result.best_value,
        feasible: result.feasible,
        evals_used: result.evals_used,
        best_config: result.best_config.0.clone(),
        per_start_values: result.per_start_values.clone(),
        report: ReportDoc::new(scene, &result.report),
    }
}

/// Pretty JSON plus a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("report serialization");
    out.push('\n');
    out
}
