//! Command implementations behind the `camnet` binary.
//!
//! Each command returns its stdout payload plus an exit code so tests can
//! call them in-process. The exit contract: 0 ok, 1 input error (reported by
//! the caller via the error path), 2 evaluate found uncovered targets,
//! 3 optimization/oracle ended infeasible (files are still written).

use std::path::Path;

use anyhow::Context;
use camnet_core::{
    apply_configuration, fuse_scene, grid_search, simulate_quantization_error, solve, GridSpec,
    Mode, ObjectiveKind, ObjectiveSpec, ReconfigProblem,
};

use crate::raster::{compute_quality_map, to_csv, to_pgm, PlaneSpec};
use crate::report::{
    mode_name, objective_name, optimize_doc, to_json, OracleDoc, ReportDoc, SimulateErrorDoc,
};
use crate::scene_file::{load_scene, save_scene};

#[derive(Debug)]
pub struct CommandOutput {
    pub stdout: String,
    pub exit_code: i32,
}

impl CommandOutput {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            exit_code: 0,
        }
    }
}

/// Evaluates a scene as-is: per-pair factors, per-target fusion, both
/// objective values. Exit 2 flags uncovered targets for scripting.
pub fn cmd_evaluate(scene_path: &Path) -> anyhow::Result<CommandOutput> {
    let scene = load_scene(scene_path)?;
    let report = fuse_scene(&scene)?;
    let doc = ReportDoc::new(&scene, &report);
    let exit_code = if doc.feasible { 0 } else { 2 };
    Ok(CommandOutput {
        stdout: to_json(&doc),
        exit_code,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_optimize(
    scene_path: &Path,
    mode: Mode,
    kind: ObjectiveKind,
    starts: u32,
    seed: u64,
    max_evals: u32,
    out_path: &Path,
) -> anyhow::Result<CommandOutput> {
    let scene = load_scene(scene_path)?;
    let problem = ReconfigProblem::new(
        scene.clone(),
        mode,
        ObjectiveSpec::new(kind),
        starts,
        seed,
        max_evals,
    )?;
    let result = solve(&problem)?;

    let optimized = apply_configuration(&scene, mode, &result.best_config)?;
    save_scene(&optimized.scene, out_path)?;

    let doc = optimize_doc(&optimized.scene, mode, kind, starts, seed, max_evals, &result);
    let exit_code = if result.feasible { 0 } else { 3 };
    Ok(CommandOutput {
        stdout: to_json(&doc),
        exit_code,
    })
}

/// Renders the fused-quality map of a plane into CSV or PGM, chosen by the
/// output extension.
pub fn cmd_map(
    scene_path: &Path,
    grid: (usize, usize),
    plane: PlaneSpec,
    out_path: &Path,
) -> anyhow::Result<CommandOutput> {
    let scene = load_scene(scene_path)?;
    let raster = compute_quality_map(&scene, grid.0, grid.1, plane)?;
    let payload = match out_path.extension().and_then(|e| e.to_str()) {
        Some("pgm") => to_pgm(&raster),
        Some("csv") => to_csv(&raster),
        _ => anyhow::bail!(
            "output must end in .pgm or .csv, got {}",
            out_path.display()
        ),
    };
    std::fs::write(out_path, payload).with_context(|| format!("writing {}", out_path.display()))?;
    let covered = raster.cells.iter().filter(|q| q.is_finite()).count();
    Ok(CommandOutput::ok(format!(
        "wrote {} ({}x{} cells, {} covered)\n",
        out_path.display(),
        raster.width,
        raster.height,
        covered
    )))
}

pub fn cmd_oracle(
    scene_path: &Path,
    grid_points: usize,
    mode: Mode,
    kind: ObjectiveKind,
    out_path: Option<&Path>,
) -> anyhow::Result<CommandOutput> {
    let scene = load_scene(scene_path)?;
    let problem = ReconfigProblem::new(scene.clone(), mode, ObjectiveSpec::new(kind), 1, 0, 1)?;
    let grid = GridSpec::new(grid_points)?;
    let found = grid_search(&problem, &grid)?;

    let best = apply_configuration(&scene, mode, &found.result.best_config)?;
    if let Some(path) = out_path {
        save_scene(&best.scene, path)?;
    }

    let doc = OracleDoc {
        mode: mode_name(mode).to_string(),
        objective: objective_name(kind).to_string(),
        grid_points,
        cells: found.cells,
        lipschitz_slack: found.lipschitz_slack,
        best_value: found.result.best_value,
        feasible: found.result.feasible,
        best_config: found.result.best_config.0.clone(),
        report: ReportDoc::new(&best.scene, &found.result.report),
    };
    let exit_code = if found.result.feasible { 0 } else { 3 };
    Ok(CommandOutput {
        stdout: to_json(&doc),
        exit_code,
    })
}

pub fn cmd_simulate_error(
    scene_path: &Path,
    camera_id: &str,
    target_id: &str,
    segment_length: f64,
    trials: u32,
    seed: u64,
) -> anyhow::Result<CommandOutput> {
    let scene = load_scene(scene_path)?;
    let camera = scene
        .cameras
        .iter()
        .find(|c| c.id == camera_id)
        .with_context(|| format!("camera \"{camera_id}\" not found"))?;
    let target = scene
        .targets
        .iter()
        .find(|t| t.id == target_id)
        .with_context(|| format!("target \"{target_id}\" not found"))?;

    let stats = simulate_quantization_error(
        &camera.intrinsics,
        &camera.pose,
        &target.position,
        segment_length,
        trials,
        seed,
    )?;
    let doc = SimulateErrorDoc::new(camera_id, target_id, segment_length, seed, &stats);
    Ok(CommandOutput::ok(to_json(&doc)))
}
