//! Ground-truth machinery: exhaustive grid search over configuration space
//! and a pixel-quantization simulator that stress-tests the error bound.
//!
//! Both are deliberately simple and independent of the multi-start solver so
//! they can serve as oracles for it.

use nalgebra::{Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fusion::fuse_scene;
use crate::objective::{is_feasible, objective_value};
use crate::optimizer::{
    apply_configuration, variable_bounds, Configuration, OptResult, ReconfigProblem,
};
use crate::quality::{distort, pair_quality};
use crate::scene::{view_geometry, visibility, CameraIntrinsics, CameraPose};

/// Exhaustive-search resolution: vertices per decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub points_per_dimension: usize,
    /// Refuse grids with more vertices than this.
    pub cell_cap: u64,
}

pub const DEFAULT_GRID_CELL_CAP: u64 = 10_000_000;

impl GridSpec {
    pub fn new(points_per_dimension: usize) -> Result<Self> {
        if points_per_dimension < 2 {
            return Err(Error::GridTooCoarse);
        }
        Ok(Self {
            points_per_dimension,
            cell_cap: DEFAULT_GRID_CELL_CAP,
        })
    }
}

/// Grid-search outcome: the best vertex plus a cell-resolution slack
/// estimate (the largest objective jump between adjacent vertices).
#[derive(Debug, Clone)]
pub struct GridSearchResult {
    pub result: OptResult,
    pub lipschitz_slack: f64,
    pub cells: u64,
}

/// Evaluates the scalarized objective at every grid vertex and returns the
/// best one. Deterministic; ties keep the lexicographically first vertex.
pub fn grid_search(problem: &ReconfigProblem, grid: &GridSpec) -> Result<GridSearchResult> {
    if grid.points_per_dimension < 2 {
        return Err(Error::GridTooCoarse);
    }
    let bounds = variable_bounds(&problem.scene, problem.mode)?;
    let dim = bounds.len();
    let k = grid.points_per_dimension;

    let cells = (k as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if cells > grid.cell_cap as u128 {
        return Err(Error::GridTooLarge {
            cells,
            cap: grid.cell_cap,
        });
    }
    let cells = cells as u64;

    let spec = problem.objective;
    let evaluate = |indices: &[usize]| -> f64 {
        let values: Vec<f64> = indices
            .iter()
            .zip(&bounds)
            .map(|(&i, (lo, hi))| lo + (hi - lo) * i as f64 / (k - 1) as f64)
            .collect();
        let applied = match apply_configuration(&problem.scene, problem.mode, &Configuration(values))
        {
            Ok(applied) => applied,
            Err(_) => return f64::INFINITY,
        };
        match fuse_scene(&applied.scene) {
            Ok(report) => objective_value(&report, &spec),
            Err(_) => f64::INFINITY,
        }
    };

    // Row-major sweep, last dimension fastest; keep every value so the slack
    // pass can compare axis neighbors.
    let mut values = vec![0.0f64; cells as usize];
    let mut indices = vec![0usize; dim];
    let mut best_value = f64::INFINITY;
    let mut best_indices = indices.clone();
    for slot in values.iter_mut() {
        let value = evaluate(&indices);
        *slot = value;
        if value < best_value {
            best_value = value;
            best_indices = indices.clone();
        }
        for d in (0..dim).rev() {
            indices[d] += 1;
            if indices[d] < k {
                break;
            }
            indices[d] = 0;
        }
    }

    // Strides of the row-major layout, for neighbor lookups.
    let mut strides = vec![1usize; dim];
    for d in (0..dim.saturating_sub(1)).rev() {
        strides[d] = strides[d + 1] * k;
    }
    let mut slack = 0.0f64;
    let mut indices = vec![0usize; dim];
    for flat in 0..cells as usize {
        for d in 0..dim {
            if indices[d] > 0 {
                let neighbor = flat - strides[d];
                let diff = (values[flat] - values[neighbor]).abs();
                if diff > slack {
                    slack = diff;
                }
            }
        }
        for d in (0..dim).rev() {
            indices[d] += 1;
            if indices[d] < k {
                break;
            }
            indices[d] = 0;
        }
    }

    let best_values: Vec<f64> = best_indices
        .iter()
        .zip(&bounds)
        .map(|(&i, (lo, hi))| lo + (hi - lo) * i as f64 / (k - 1) as f64)
        .collect();
    let best_config = Configuration(best_values);
    let applied = apply_configuration(&problem.scene, problem.mode, &best_config)?;
    let report = fuse_scene(&applied.scene)?;
    let best_value = objective_value(&report, &spec);
    let feasible = is_feasible(&report);

    Ok(GridSearchResult {
        result: OptResult {
            best_config,
            best_value,
            feasible,
            report,
            evals_used: cells as usize,
            per_start_values: Vec::new(),
        },
        lipschitz_slack: slack,
        cells,
    })
}

/// Outcome of the quantization-error trials.
///
/// `violations` counts trials whose worst endpoint error reached the quality
/// bound; `length_violations` counts trials whose length error reached twice
/// the bound. `ratio_q99` is the 0.99 quantile of endpoint error over bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTrialStats {
    pub trials: u32,
    pub violations: u32,
    pub length_violations: u32,
    pub max_ratio: f64,
    pub ratio_q99: f64,
    pub mean_length_error: f64,
    /// The per-pair quality bound the trials are measured against.
    pub quality_bound: f64,
}

/// One segment measurement through the quantizing camera.
#[derive(Debug, Clone, Copy)]
pub struct SegmentTrial {
    pub measured_length: f64,
    pub endpoint_errors: [f64; 2],
}

fn image_frame(pose: &CameraPose) -> (Vector3<f64>, Vector3<f64>, Vector3<f64>) {
    pose.image_basis()
}

/// Projects a world point to continuous pixel coordinates. The pixel scale
/// puts the cone edge at radius w/2, matching the radial-resolution model.
fn project_to_pixels(
    intrinsics: &CameraIntrinsics,
    pose: &CameraPose,
    point: &Vector3<f64>,
) -> Result<Vector2<f64>> {
    let (x_cam, y_cam, axis) = image_frame(pose);
    let ray = point - pose.position;
    let depth = ray.dot(&axis);
    if depth <= 0.0 {
        return Err(Error::BehindCameraPlane {
            beta: std::f64::consts::FRAC_PI_2,
        });
    }
    let tan_alpha = intrinsics.half_angle.tan();
    let normalized = Vector2::new(
        ray.dot(&x_cam) / depth / tan_alpha,
        ray.dot(&y_cam) / depth / tan_alpha,
    );
    let distorted = distort(normalized, &intrinsics.distortion)?;
    Ok(distorted * (intrinsics.resolution as f64 / 2.0))
}

/// Inverts the forward distortion by Newton iteration with a finite-difference
/// Jacobian. Identity coefficients return immediately.
fn undistort(distorted: Vector2<f64>, intrinsics: &CameraIntrinsics) -> Result<Vector2<f64>> {
    let coeffs = &intrinsics.distortion;
    if coeffs.is_zero() {
        return Ok(distorted);
    }
    let mut point = distorted;
    const STEP: f64 = 1e-7;
    for _ in 0..100 {
        let image = distort(point, coeffs)?;
        let residual = image - distorted;
        if residual.x.abs() < 1e-12 && residual.y.abs() < 1e-12 {
            return Ok(point);
        }
        let px = distort(Vector2::new(point.x + STEP, point.y), coeffs)?;
        let mx = distort(Vector2::new(point.x - STEP, point.y), coeffs)?;
        let py = distort(Vector2::new(point.x, point.y + STEP), coeffs)?;
        let my = distort(Vector2::new(point.x, point.y - STEP), coeffs)?;
        let j00 = (px.x - mx.x) / (2.0 * STEP);
        let j10 = (px.y - mx.y) / (2.0 * STEP);
        let j01 = (py.x - my.x) / (2.0 * STEP);
        let j11 = (py.y - my.y) / (2.0 * STEP);
        let det = j00 * j11 - j01 * j10;
        if det.abs() < 1e-15 {
            return Err(Error::UndistortDiverged);
        }
        point.x -= (j11 * residual.x - j01 * residual.y) / det;
        point.y -= (-j10 * residual.x + j00 * residual.y) / det;
    }
    Err(Error::UndistortDiverged)
}

/// Back-projects a pixel onto the horizontal plane `z = plane_z`.
fn unproject_to_plane(
    intrinsics: &CameraIntrinsics,
    pose: &CameraPose,
    pixel: Vector2<f64>,
    plane_z: f64,
) -> Result<Vector3<f64>> {
    let (x_cam, y_cam, axis) = image_frame(pose);
    let distorted = pixel * (2.0 / intrinsics.resolution as f64);
    let normalized = undistort(distorted, intrinsics)?;
    let tan_alpha = intrinsics.half_angle.tan();
    let direction = x_cam * (normalized.x * tan_alpha) + y_cam * (normalized.y * tan_alpha) + axis;
    if direction.z.abs() < 1e-15 {
        return Err(Error::NoPlaneIntersection);
    }
    let t = (plane_z - pose.position.z) / direction.z;
    if t <= 0.0 {
        return Err(Error::NoPlaneIntersection);
    }
    Ok(pose.position + direction * t)
}

/// Measures one segment: project both endpoints, round to the pixel grid,
/// back-project onto the horizontal plane through the target, and compare.
///
/// The segment of `length` lies in that plane, centered `offset` millimeters
/// from the target, rotated by `angle`.
pub fn quantize_segment(
    intrinsics: &CameraIntrinsics,
    pose: &CameraPose,
    target_position: &Vector3<f64>,
    offset: Vector2<f64>,
    angle: f64,
    length: f64,
) -> Result<SegmentTrial> {
    let plane_z = target_position.z;
    let center = target_position + Vector3::new(offset.x, offset.y, 0.0);
    let half = Vector3::new(angle.cos(), angle.sin(), 0.0) * (length / 2.0);
    let ends = [center - half, center + half];

    let mut recovered = [Vector3::zeros(); 2];
    let mut endpoint_errors = [0.0f64; 2];
    for (i, end) in ends.iter().enumerate() {
        let pixel = project_to_pixels(intrinsics, pose, end)?;
        let rounded = Vector2::new(pixel.x.round(), pixel.y.round());
        let back = unproject_to_plane(intrinsics, pose, rounded, plane_z)?;
        endpoint_errors[i] = (back - end).norm();
        recovered[i] = back;
    }
    Ok(SegmentTrial {
        measured_length: (recovered[1] - recovered[0]).norm(),
        endpoint_errors,
    })
}

/// Runs seeded randomized segment trials against one camera-target pair and
/// tallies how often the quantization error breaks the quality bound.
///
/// Each trial draws a uniform orientation and a sub-pixel placement offset.
/// Deterministic for a fixed seed.
pub fn simulate_quantization_error(
    intrinsics: &CameraIntrinsics,
    pose: &CameraPose,
    target_position: &Vector3<f64>,
    segment_length: f64,
    trials: u32,
    seed: u64,
) -> Result<ErrorTrialStats> {
    let geom = view_geometry(pose, target_position)?;
    if !visibility(&geom, intrinsics) {
        return Err(Error::TargetNotVisible);
    }
    let bound = pair_quality(&geom, intrinsics)?.q_total;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios = Vec::with_capacity(trials as usize);
    let mut violations = 0u32;
    let mut length_violations = 0u32;
    let mut max_ratio = 0.0f64;
    let mut length_error_sum = 0.0f64;

    for _ in 0..trials {
        let angle = rng.random::<f64>() * std::f64::consts::TAU;
        // Sub-pixel placement: shift by up to half the pixel footprint.
        let offset = Vector2::new(
            (rng.random::<f64>() - 0.5) * bound,
            (rng.random::<f64>() - 0.5) * bound,
        );
        let trial = quantize_segment(intrinsics, pose, target_position, offset, angle, segment_length)?;

        let endpoint = trial.endpoint_errors[0].max(trial.endpoint_errors[1]);
        let ratio = endpoint / bound;
        ratios.push(ratio);
        if ratio > max_ratio {
            max_ratio = ratio;
        }
        if endpoint >= bound {
            violations += 1;
        }
        let length_error = (trial.measured_length - segment_length).abs();
        length_error_sum += length_error;
        if length_error >= 2.0 * bound {
            length_violations += 1;
        }
    }

    ratios.sort_by(f64::total_cmp);
    let ratio_q99 = if ratios.is_empty() {
        0.0
    } else {
        let rank = ((0.99 * ratios.len() as f64).ceil() as usize).clamp(1, ratios.len());
        ratios[rank - 1]
    };

    Ok(ErrorTrialStats {
        trials,
        violations,
        length_violations,
        max_ratio,
        ratio_q99,
        mean_length_error: if trials == 0 {
            0.0
        } else {
            length_error_sum / trials as f64
        },
        quality_bound: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{ObjectiveKind, ObjectiveSpec};
    use crate::optimizer::Mode;
    use crate::scene::{
        Camera, CameraBounds, CameraIntrinsics, CameraPose, DistortionCoefficients, Scene, Target,
        Workspace,
    };
    use approx::assert_relative_eq;

    fn downward_camera(k1: f64) -> (CameraIntrinsics, CameraPose) {
        let mut distortion = DistortionCoefficients::zero();
        distortion.k1 = k1;
        let intrinsics =
            CameraIntrinsics::new(std::f64::consts::FRAC_PI_4, 1000, distortion).unwrap();
        let pose = CameraPose::new(Vector3::new(0.0, 0.0, 3000.0), 0.0, 0.0);
        (intrinsics, pose)
    }

    #[test]
    fn exact_pixel_segment_quantizes_losslessly() {
        let (intrinsics, pose) = downward_camera(0.0);
        let target = Vector3::new(0.0, 0.0, 0.0);
        // On-axis pixel footprint is 6 mm; a 4-pixel segment lands its ends
        // exactly on the grid.
        let trial = quantize_segment(
            &intrinsics,
            &pose,
            &target,
            Vector2::new(0.0, 0.0),
            0.0,
            24.0,
        )
        .unwrap();
        assert_relative_eq!(trial.measured_length, 24.0, epsilon = 1e-9);
        assert!(trial.endpoint_errors[0] < 1e-9);
        assert!(trial.endpoint_errors[1] < 1e-9);
    }

    #[test]
    fn zero_distortion_trials_never_break_the_length_bound() {
        let (intrinsics, pose) = downward_camera(0.0);
        let stats = simulate_quantization_error(
            &intrinsics,
            &pose,
            &Vector3::new(0.0, 0.0, 0.0),
            100.0,
            2000,
            42,
        )
        .unwrap();
        assert_eq!(stats.length_violations, 0);
        assert_eq!(stats.violations, 0);
        assert!(stats.max_ratio < 1.0);
    }

    #[test]
    fn simulator_is_deterministic() {
        let (intrinsics, pose) = downward_camera(0.1);
        let run = || {
            simulate_quantization_error(
                &intrinsics,
                &pose,
                &Vector3::new(200.0, -100.0, 0.0),
                80.0,
                500,
                7,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn invisible_target_is_rejected() {
        let (intrinsics, pose) = downward_camera(0.0);
        let err = simulate_quantization_error(
            &intrinsics,
            &pose,
            &Vector3::new(4000.0, 0.0, 0.0),
            100.0,
            10,
            0,
        );
        assert_eq!(err, Err(Error::TargetNotVisible));
    }

    #[test]
    fn doubling_resolution_shrinks_the_mean_length_error() {
        let coarse = CameraIntrinsics::new(
            std::f64::consts::FRAC_PI_4,
            1000,
            DistortionCoefficients::zero(),
        )
        .unwrap();
        let fine = CameraIntrinsics::new(
            std::f64::consts::FRAC_PI_4,
            2000,
            DistortionCoefficients::zero(),
        )
        .unwrap();
        let pose = CameraPose::new(Vector3::new(0.0, 0.0, 3000.0), 0.0, 0.0);
        let target = Vector3::new(150.0, 80.0, 0.0);
        let run = |intr: &CameraIntrinsics| {
            simulate_quantization_error(intr, &pose, &target, 120.0, 10_000, 99)
                .unwrap()
                .mean_length_error
        };
        assert!(run(&fine) < run(&coarse));
    }

    #[test]
    fn undistort_inverts_the_forward_map() {
        let mut distortion = DistortionCoefficients::zero();
        distortion.k1 = 0.15;
        distortion.s1 = 0.01;
        let intrinsics =
            CameraIntrinsics::new(std::f64::consts::FRAC_PI_4, 1000, distortion).unwrap();
        for &(x, y) in &[(0.0, 0.0), (0.4, -0.3), (0.8, 0.1)] {
            let point = Vector2::new(x, y);
            let forward = distort(point, &intrinsics.distortion).unwrap();
            let back = undistort(forward, &intrinsics).unwrap();
            assert_relative_eq!(back.x, point.x, epsilon = 1e-10);
            assert_relative_eq!(back.y, point.y, epsilon = 1e-10);
        }
    }

    fn tiny_problem() -> ReconfigProblem {
        let workspace = Workspace::new(
            Vector3::new(-4000.0, -4000.0, 0.0),
            Vector3::new(4000.0, 4000.0, 4000.0),
        )
        .unwrap();
        let camera = Camera {
            id: "cam0".into(),
            intrinsics: CameraIntrinsics::new(0.35, 1000, DistortionCoefficients::zero()).unwrap(),
            pose: CameraPose::new(Vector3::new(0.0, 0.0, 3000.0), 0.0, 0.0),
            bounds: CameraBounds {
                pan: (0.0, 1.2),
                tilt: (0.0, 0.5),
                position_min: Vector3::new(-4000.0, -4000.0, 1000.0),
                position_max: Vector3::new(4000.0, 4000.0, 4000.0),
            },
        };
        let scene = Scene::new(
            workspace,
            vec![camera],
            vec![Target::new("t0", Vector3::new(2000.0, 0.0, 0.0))],
        )
        .unwrap();
        ReconfigProblem::new(
            scene,
            Mode::Ptz,
            ObjectiveSpec::new(ObjectiveKind::Mean),
            1,
            0,
            100,
        )
        .unwrap()
    }

    #[test]
    fn two_point_grid_finds_the_only_covering_corner() {
        // Of the four bound-box corners only (pan 0, tilt 0.5) sees the
        // target; every other corner pays the coverage penalty.
        let problem = tiny_problem();
        let grid = GridSpec::new(2).unwrap();
        let found = grid_search(&problem, &grid).unwrap();
        assert_eq!(found.cells, 4);
        assert!(found.result.feasible);
        assert_eq!(found.result.best_config.0, vec![0.0, 0.5]);
    }

    #[test]
    fn grid_rejects_single_point_and_oversized_requests() {
        assert_eq!(GridSpec::new(1), Err(Error::GridTooCoarse));
        let problem = tiny_problem();
        let mut grid = GridSpec::new(100).unwrap();
        grid.cell_cap = 1000;
        assert!(matches!(
            grid_search(&problem, &grid),
            Err(Error::GridTooLarge { .. })
        ));
    }

    #[test]
    fn grid_slack_bounds_the_grid_resolution_error() {
        let problem = tiny_problem();
        let coarse = grid_search(&problem, &GridSpec::new(3).unwrap()).unwrap();
        let fine = grid_search(&problem, &GridSpec::new(9).unwrap()).unwrap();
        // Refining the grid can only improve the best vertex, and the coarse
        // slack has to cover the gap on this smooth instance.
        assert!(fine.result.best_value <= coarse.result.best_value + 1e-12);
        assert!(coarse.result.best_value - fine.result.best_value <= coarse.lipschitz_slack);
    }
}
