//! Reconfiguration problems and the multi-start derivative-free solver.
//!
//! Two decision-variable layouts exist. Axis mode ("PTZ") keeps mount
//! positions fixed and optimizes `(pan_1, tilt_1, ..., pan_n, tilt_n)`.
//! Position mode ("drone") keeps every axis pointing straight down and
//! optimizes `(x_1, y_1, z_1, ...)` inside per-camera boxes with a hard
//! 1 m height floor.
//!
//! The objective contains binary visibility cliffs and (for the worst-case
//! kind) a max, so the solver is a multi-start Nelder-Mead on bound-normalized
//! coordinates rather than a gradient method. Runs are deterministic for a
//! fixed `(problem, seed)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fusion::{fuse_scene, QualityReport};
use crate::nelder_mead::{minimize, SimplexOptions};
use crate::objective::{is_feasible, objective_value, ObjectiveKind, ObjectiveSpec};
use crate::scene::{Scene, MIN_DRONE_HEIGHT_MM};

/// Which variables the solver may move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Fixed mounts, flexible optical axes.
    Ptz,
    /// Flexible positions, axes fixed straight down.
    Drone,
}

impl Mode {
    pub fn variables_per_camera(self) -> usize {
        match self {
            Mode::Ptz => 2,
            Mode::Drone => 3,
        }
    }
}

/// Flat decision vector; layout depends on the mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration(pub Vec<f64>);

/// A reconfiguration instance: the scene, what may move, what to minimize,
/// and the search budget.
#[derive(Debug, Clone)]
pub struct ReconfigProblem {
    pub scene: Scene,
    pub mode: Mode,
    pub objective: ObjectiveSpec,
    /// Independent local searches; start 0 is the current configuration.
    pub starts: u32,
    pub seed: u64,
    /// Total objective-evaluation budget, shared equally across starts.
    pub max_evals: u32,
}

pub const DEFAULT_STARTS: u32 = 16;
pub const DEFAULT_MAX_EVALS: u32 = 50_000;

impl ReconfigProblem {
    pub fn new(
        scene: Scene,
        mode: Mode,
        objective: ObjectiveSpec,
        starts: u32,
        seed: u64,
        max_evals: u32,
    ) -> Result<Self> {
        if starts < 1 {
            return Err(Error::InvalidProblem("starts must be >= 1".into()));
        }
        if max_evals < 1 {
            return Err(Error::InvalidProblem("max_evals must be >= 1".into()));
        }
        let problem = Self {
            scene,
            mode,
            objective,
            starts,
            seed,
            max_evals,
        };
        // Surface unusable bounds immediately.
        variable_bounds(&problem.scene, problem.mode)?;
        Ok(problem)
    }

    pub fn dimension(&self) -> usize {
        self.scene.cameras.len() * self.mode.variables_per_camera()
    }

    /// The scene's current poses as a decision vector.
    pub fn current_configuration(&self) -> Configuration {
        let mut values = Vec::with_capacity(self.dimension());
        for camera in &self.scene.cameras {
            match self.mode {
                Mode::Ptz => {
                    values.push(camera.pose.pan);
                    values.push(camera.pose.tilt);
                }
                Mode::Drone => {
                    values.push(camera.pose.position.x);
                    values.push(camera.pose.position.y);
                    values.push(camera.pose.position.z);
                }
            }
        }
        Configuration(values)
    }
}

/// Flat per-component bounds for a scene/mode pair. Drone z intervals are
/// raised to the 1 m flying floor.
pub fn variable_bounds(scene: &Scene, mode: Mode) -> Result<Vec<(f64, f64)>> {
    let mut bounds = Vec::with_capacity(scene.cameras.len() * mode.variables_per_camera());
    for camera in &scene.cameras {
        let b = &camera.bounds;
        match mode {
            Mode::Ptz => {
                bounds.push(b.pan);
                bounds.push(b.tilt);
            }
            Mode::Drone => {
                let floor = b.position_min.z.max(MIN_DRONE_HEIGHT_MM);
                if floor > b.position_max.z {
                    return Err(Error::InvalidProblem(format!(
                        "camera \"{}\": flying floor {floor} mm exceeds its position box",
                        camera.id
                    )));
                }
                bounds.push((b.position_min.x, b.position_max.x));
                bounds.push((b.position_min.y, b.position_max.y));
                bounds.push((floor, b.position_max.z));
            }
        }
    }
    Ok(bounds)
}

/// A scene with a configuration applied, plus which components had to be
/// clamped into their bounds.
#[derive(Debug, Clone)]
pub struct AppliedConfiguration {
    pub scene: Scene,
    pub clamped: Vec<usize>,
}

/// Writes a configuration into a copy of the scene. Out-of-bounds components
/// are clamped, not rejected; their indices are reported.
pub fn apply_configuration(
    scene: &Scene,
    mode: Mode,
    config: &Configuration,
) -> Result<AppliedConfiguration> {
    let expected = scene.cameras.len() * mode.variables_per_camera();
    if config.0.len() != expected {
        return Err(Error::ConfigurationLength {
            got: config.0.len(),
            expected,
        });
    }
    let bounds = variable_bounds(scene, mode)?;
    let mut clamped = Vec::new();
    let mut values = config.0.clone();
    for (i, v) in values.iter_mut().enumerate() {
        let (lo, hi) = bounds[i];
        let pinned = v.clamp(lo, hi);
        if pinned != *v {
            clamped.push(i);
            *v = pinned;
        }
    }

    let mut updated = scene.clone();
    let stride = mode.variables_per_camera();
    for (ci, camera) in updated.cameras.iter_mut().enumerate() {
        let chunk = &values[ci * stride..(ci + 1) * stride];
        match mode {
            Mode::Ptz => {
                camera.pose.pan = chunk[0];
                camera.pose.tilt = chunk[1];
            }
            Mode::Drone => {
                camera.pose.position.x = chunk[0];
                camera.pose.position.y = chunk[1];
                camera.pose.position.z = chunk[2];
                camera.pose.pan = 0.0;
                camera.pose.tilt = 0.0;
            }
        }
    }
    Ok(AppliedConfiguration {
        scene: updated,
        clamped,
    })
}

/// Solver output: the best configuration found, its report, and per-start
/// diagnostics.
#[derive(Debug, Clone)]
pub struct OptResult {
    pub best_config: Configuration,
    pub best_value: f64,
    pub feasible: bool,
    pub report: QualityReport,
    pub evals_used: usize,
    pub per_start_values: Vec<f64>,
}

fn normalize(values: &[f64], bounds: &[(f64, f64)]) -> Vec<f64> {
    values
        .iter()
        .zip(bounds)
        .map(|(v, (lo, hi))| {
            if hi - lo <= 0.0 {
                0.5
            } else {
                ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
            }
        })
        .collect()
}

fn denormalize(unit: &[f64], bounds: &[(f64, f64)]) -> Vec<f64> {
    unit.iter()
        .zip(bounds)
        .map(|(t, (lo, hi))| lo + t.clamp(0.0, 1.0) * (hi - lo))
        .collect()
}

/// Multi-start solve of a reconfiguration problem.
///
/// Start 0 begins at the scene's current configuration; every other start
/// begins at a bound-uniform sample drawn from a stream derived from
/// `(seed, start index)`. The best value across starts wins, ties broken by
/// the lowest start index. The result is deterministic for a fixed problem.
pub fn solve(problem: &ReconfigProblem) -> Result<OptResult> {
    let bounds = variable_bounds(&problem.scene, problem.mode)?;
    let dim = bounds.len();
    let spec = problem.objective;

    let evaluate = |unit: &[f64]| -> f64 {
        let config = Configuration(denormalize(unit, &bounds));
        let applied = match apply_configuration(&problem.scene, problem.mode, &config) {
            Ok(applied) => applied,
            Err(_) => return f64::INFINITY,
        };
        match fuse_scene(&applied.scene) {
            Ok(report) => objective_value(&report, &spec),
            Err(_) => f64::INFINITY,
        }
    };

    let budget_per_start = ((problem.max_evals as usize) / problem.starts as usize).max(dim + 2);
    let options = SimplexOptions::default();

    let mut evals_used = 0;
    let mut per_start_values = Vec::with_capacity(problem.starts as usize);
    let mut best: Option<(f64, Vec<f64>)> = None;

    for start_index in 0..problem.starts {
        let start_unit = if start_index == 0 {
            normalize(&problem.current_configuration().0, &bounds)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(problem.seed);
            rng.set_stream(start_index as u64);
            (0..dim).map(|_| rng.random::<f64>()).collect()
        };

        let mut objective = evaluate;
        let local = minimize(&mut objective, &start_unit, budget_per_start, &options);
        evals_used += local.evals;
        per_start_values.push(local.value);
        let improves = match &best {
            None => true,
            Some((value, _)) => local.value < *value,
        };
        if improves {
            best = Some((local.value, local.point));
        }
    }

    let (_, best_unit) = best.expect("at least one start");
    let best_config = Configuration(denormalize(&best_unit, &bounds));
    let applied = apply_configuration(&problem.scene, problem.mode, &best_config)?;
    let report = fuse_scene(&applied.scene)?;
    let best_value = objective_value(&report, &spec);
    let feasible = is_feasible(&report);

    Ok(OptResult {
        best_config,
        best_value,
        feasible,
        report,
        evals_used,
        per_start_values,
    })
}

/// [`solve`] with the worst-case objective, regardless of what the problem
/// carries.
pub fn solve_minimax(problem: &ReconfigProblem) -> Result<OptResult> {
    let mut minimax = problem.clone();
    minimax.objective.kind = ObjectiveKind::Minimax;
    solve(&minimax)
}
