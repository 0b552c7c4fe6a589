//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (run with `--nocapture` to see them alongside cargo's own
//! per-test verdicts).

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use nalgebra::{Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use camnet_cli::raster::{compute_quality_map, PlaneAxis, PlaneSpec};
use camnet_core::{
    distortion_jacobian, distortion_quality, fuse_target, grid_search, perspective_quality,
    simulate_quantization_error, solve, view_geometry, visibility, Camera, CameraBounds,
    CameraIntrinsics, CameraPose, DistortionCoefficients, GridSpec, Mode, ObjectiveKind,
    ObjectiveSpec, ReconfigProblem, Scene, Target, ViewGeometry, Workspace,
};

fn intrinsics(alpha: f64, w: u32, k1: f64) -> CameraIntrinsics {
    let mut d = DistortionCoefficients::zero();
    d.k1 = k1;
    CameraIntrinsics::new(alpha, w, d).unwrap()
}

fn camera(id: &str, position: Vector3<f64>, pan: f64, tilt: f64, intr: CameraIntrinsics, ws: &Workspace) -> Camera {
    Camera {
        id: id.into(),
        intrinsics: intr,
        pose: CameraPose::new(position, pan, tilt),
        bounds: CameraBounds::default_for(ws),
    }
}

#[test]
fn criterion_01_finite_difference_jacobian_matches_closed_form() {
    let clock = Instant::now();
    let mut d = DistortionCoefficients::zero();
    d.k1 = 0.1;
    let mut checked = 0;
    for i in 0..10 {
        for j in 0..10 {
            let x = -0.9 + 0.2 * i as f64;
            let y = -0.9 + 0.2 * j as f64;
            if x.hypot(y) > 1.0 {
                continue;
            }
            let (dx, dy) = distortion_jacobian(Vector2::new(x, y), &d).unwrap();
            let exact_x = 1.0 + d.k1 * (3.0 * x * x + y * y);
            let exact_y = 1.0 + d.k1 * (x * x + 3.0 * y * y);
            assert!(
                ((dx - exact_x) / exact_x).abs() < 1e-6,
                "dx'/dx at ({x}, {y}): {dx} vs {exact_x}"
            );
            assert!(
                ((dy - exact_y) / exact_y).abs() < 1e-6,
                "dy'/dy at ({x}, {y}): {dy} vs {exact_y}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 60, "grid barely intersects the unit disk");
    let elapsed = clock.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("PASS criterion 1: Jacobian matches k1 closed form on {checked} disk points in {elapsed:?}");
}

#[test]
fn criterion_02_zero_distortion_collapses_to_perspective_only() {
    let alpha = 0.8;
    let intr = intrinsics(alpha, 1200, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let geom = ViewGeometry {
            beta: rng.random::<f64>() * alpha,
            gamma: (rng.random::<f64>() - 0.5) * std::f64::consts::TAU,
            distance: 500.0 + rng.random::<f64>() * 4500.0,
        };
        let q_d = distortion_quality(&geom, &intr).unwrap();
        assert!((q_d - 1.0).abs() <= 1e-9, "q_d = {q_d} at beta {}", geom.beta);
    }

    // Full map equals the perspective-only map pointwise.
    let ws = Workspace::new(
        Vector3::new(-4000.0, -3000.0, 0.0),
        Vector3::new(4000.0, 3000.0, 3200.0),
    )
    .unwrap();
    let scene = Scene::new(
        ws,
        vec![
            camera("a", Vector3::new(-1000.0, 0.0, 3000.0), 0.2, 0.3, intrinsics(0.7, 1000, 0.0), &ws),
            camera("b", Vector3::new(1500.0, 500.0, 2600.0), -1.8, 0.5, intrinsics(0.9, 1600, 0.0), &ws),
        ],
        vec![Target::new("t", Vector3::new(0.0, 0.0, 0.0))],
    )
    .unwrap();
    let plane = PlaneSpec {
        axis: PlaneAxis::Z,
        value: 0.0,
    };
    let full = compute_quality_map(&scene, 24, 18, plane).unwrap();

    for row in 0..18 {
        for col in 0..24 {
            let x = -4000.0 + (col as f64 + 0.5) * 8000.0 / 24.0;
            let y = -3000.0 + (row as f64 + 0.5) * 6000.0 / 18.0;
            let point = Vector3::new(x, y, 0.0);
            let contributions: Vec<(f64, bool)> = scene
                .cameras
                .iter()
                .filter_map(|c| {
                    let geom = view_geometry(&c.pose, &point).ok()?;
                    if !visibility(&geom, &c.intrinsics) {
                        return None;
                    }
                    Some((perspective_quality(&geom, &c.intrinsics).unwrap(), true))
                })
                .collect();
            let (_, expected) = fuse_target(&contributions).unwrap();
            let got = full.cell(row, col);
            if expected.is_finite() {
                assert!(
                    (got - expected).abs() <= 1e-9 * expected,
                    "cell ({row},{col}): {got} vs {expected}"
                );
            } else {
                assert!(!got.is_finite());
            }
        }
    }
    println!("PASS criterion 2: q_d == 1 at 1000 geometries and the quality map collapses to q_p");
}

#[test]
fn criterion_03_fusion_algebra_over_random_lists() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let n = rng.random_range(1..10usize);
        let list: Vec<(f64, bool)> = (0..n)
            .map(|_| (0.01 + rng.random::<f64>() * 999.99, rng.random::<bool>()))
            .collect();
        let (covered, fused) = fuse_target(&list).unwrap();
        let visible: Vec<f64> = list.iter().filter(|(_, v)| *v).map(|(q, _)| *q).collect();
        assert_eq!(covered, !visible.is_empty());

        if covered {
            let min = visible.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(fused <= min * (1.0 + 1e-12), "harmonic bound");

            let mut reversed = list.clone();
            reversed.reverse();
            let (_, fused_reversed) = fuse_target(&reversed).unwrap();
            assert!((fused - fused_reversed).abs() <= 1e-12 * fused, "permutation");
        }

        let extra = 0.01 + rng.random::<f64>() * 999.99;
        let mut extended = list.clone();
        extended.push((extra, true));
        let (_, fused_more) = fuse_target(&extended).unwrap();
        assert!(
            fused_more <= fused.min(extra) * (1.0 + 1e-12),
            "monotone under adding a contributor"
        );

        // Equal contributors: n cameras of quality q fuse to q / n.
        let q = 0.01 + rng.random::<f64>() * 999.99;
        let m = rng.random_range(1..16usize);
        let (_, fused_equal) = fuse_target(&vec![(q, true); m]).unwrap();
        let expected = q / m as f64;
        assert!(
            (fused_equal - expected).abs() <= 1e-13 * expected,
            "equal-share identity: {fused_equal} vs {expected}"
        );
    }
    println!("PASS criterion 3: fusion algebra holds over 10^4 random quality lists");
}

#[test]
fn criterion_04_floor_depth_invariance() {
    let height = 2800.0;
    let alpha = 0.7;
    let w = 1400;
    let ws = Workspace::new(
        Vector3::new(-4000.0, -3000.0, 0.0),
        Vector3::new(4000.0, 3000.0, 3000.0),
    )
    .unwrap();
    let scene = Scene::new(
        ws,
        vec![camera("down", Vector3::new(250.0, -150.0, height), 0.0, 0.0, intrinsics(alpha, w, 0.0), &ws)],
        vec![Target::new("t", Vector3::new(0.0, 0.0, 0.0))],
    )
    .unwrap();
    let raster = compute_quality_map(
        &scene,
        32,
        24,
        PlaneSpec {
            axis: PlaneAxis::Z,
            value: 0.0,
        },
    )
    .unwrap();
    let expected = 2.0 * height * alpha.tan() / w as f64;
    let mut covered = 0;
    for &q in &raster.cells {
        if q.is_finite() {
            assert!((q - expected).abs() <= 1e-9, "{q} vs {expected}");
            covered += 1;
        }
    }
    assert!(covered > 100, "cone footprint unexpectedly small: {covered}");
    println!("PASS criterion 4: {covered} covered floor cells all equal 2h*tan(alpha)/w");
}

/// Deterministic small scene for the oracle-dominance and trend criteria.
fn random_scene(seed: u64, n_cameras: usize, n_targets: usize) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ws = Workspace::new(
        Vector3::new(-3000.0, -2000.0, 0.0),
        Vector3::new(3000.0, 2000.0, 3500.0),
    )
    .unwrap();
    let cameras = (0..n_cameras)
        .map(|i| {
            let position = Vector3::new(
                rng.random_range(-2500.0..2500.0),
                rng.random_range(-1500.0..1500.0),
                rng.random_range(2400.0..3200.0),
            );
            let intr = intrinsics(
                rng.random_range(0.7..1.0),
                rng.random_range(800..2000),
                rng.random_range(0.15..0.3),
            );
            let pan = rng.random_range(-3.0..3.0);
            let tilt = rng.random_range(0.0..1.2);
            camera(&format!("cam{i}"), position, pan, tilt, intr, &ws)
        })
        .collect();
    let targets = (0..n_targets)
        .map(|i| {
            Target::new(
                format!("t{i}"),
                Vector3::new(
                    rng.random_range(-1200.0..1200.0),
                    rng.random_range(-900.0..900.0),
                    0.0,
                ),
            )
        })
        .collect();
    Scene::new(ws, cameras, targets).unwrap()
}

#[test]
fn criterion_05_solver_dominates_the_grid_oracle() {
    let clock = Instant::now();
    for i in 0..10u64 {
        let n_cameras = 1 + (i as usize % 2);
        let n_targets = 1 + (i as usize % 3);
        let scene = random_scene(500 + i, n_cameras, n_targets);
        for mode in [Mode::Ptz, Mode::Drone] {
            for kind in [ObjectiveKind::Mean, ObjectiveKind::Minimax] {
                let problem = ReconfigProblem::new(
                    scene.clone(),
                    mode,
                    ObjectiveSpec::new(kind),
                    8,
                    1000 + i,
                    4000,
                )
                .unwrap();
                let solved = solve(&problem).unwrap();
                let points = match (mode, n_cameras) {
                    (Mode::Ptz, 1) => 15,
                    (Mode::Ptz, _) => 7,
                    (Mode::Drone, 1) => 9,
                    (Mode::Drone, _) => 5,
                };
                let oracle = grid_search(&problem, &GridSpec::new(points).unwrap()).unwrap();
                assert!(
                    solved.best_value <= oracle.result.best_value + oracle.lipschitz_slack + 1e-9,
                    "scene {i} {mode:?} {kind:?}: solve {} vs grid {} + slack {}",
                    solved.best_value,
                    oracle.result.best_value,
                    oracle.lipschitz_slack
                );
            }
        }
    }
    let elapsed = clock.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!("PASS criterion 5: solver dominates the grid oracle on 10 scenes x 2 modes x 2 objectives in {elapsed:?}");
}

#[test]
fn criterion_06_drone_reaches_the_analytic_floor_optimum() {
    let alpha = std::f64::consts::FRAC_PI_4;
    let w = 1000;
    let ws = Workspace::new(
        Vector3::new(-4000.0, -4000.0, 0.0),
        Vector3::new(4000.0, 4000.0, 4000.0),
    )
    .unwrap();
    let scene = Scene::new(
        ws,
        vec![camera("drone", Vector3::new(-1500.0, 800.0, 2800.0), 0.0, 0.0, intrinsics(alpha, w, 0.0), &ws)],
        vec![Target::new("t", Vector3::new(500.0, 300.0, 0.0))],
    )
    .unwrap();
    let problem = ReconfigProblem::new(
        scene,
        Mode::Drone,
        ObjectiveSpec::new(ObjectiveKind::Mean),
        8,
        1,
        8000,
    )
    .unwrap();
    let solved = solve(&problem).unwrap();
    let expected = 2.0 * 1000.0 * alpha.tan() / w as f64;
    assert!(solved.feasible);
    assert!(
        (solved.best_value - expected).abs() <= 1e-6,
        "value {} vs analytic {}",
        solved.best_value,
        expected
    );
    let z = solved.best_config.0[2];
    assert!((z - 1000.0).abs() <= 1e-6, "z = {z}");
    println!("PASS criterion 6: drone solve hits 2*z_min*tan(alpha)/w = {expected} at the 1 m floor");
}

#[test]
fn criterion_07_quantization_error_stays_inside_the_bound() {
    // Ideal pinhole: the length error can never reach two pixels.
    let clean = intrinsics(std::f64::consts::FRAC_PI_4, 1000, 0.0);
    let pose = CameraPose::new(Vector3::new(0.0, 0.0, 3000.0), 0.0, 0.0);
    let stats = simulate_quantization_error(
        &clean,
        &pose,
        &Vector3::new(0.0, 0.0, 0.0),
        120.0,
        10_000,
        7,
    )
    .unwrap();
    assert_eq!(stats.length_violations, 0, "|l - l'| < 2k failed {} times", stats.length_violations);
    assert_eq!(stats.violations, 0);

    // Distorted model: the bound is heuristic off-axis, so the criterion is
    // the 0.99 quantile of endpoint error over the bound.
    let distorted = intrinsics(std::f64::consts::FRAC_PI_4, 1000, 0.15);
    let stats = simulate_quantization_error(
        &distorted,
        &pose,
        &Vector3::new(800.0, 500.0, 0.0),
        120.0,
        10_000,
        8,
    )
    .unwrap();
    assert!(stats.ratio_q99 <= 1.0, "q99 = {}", stats.ratio_q99);
    println!(
        "PASS criterion 7: zero-distortion violations 0/10000, distorted epsilon/Q q99 = {:.3}",
        stats.ratio_q99
    );
}

#[test]
fn criterion_08_drone_mode_beats_ptz_on_most_scenes() {
    let mut drone_wins = 0;
    for i in 0..20u64 {
        let scene = random_scene(9000 + i, 3, 3);
        let mut values = Vec::new();
        for mode in [Mode::Ptz, Mode::Drone] {
            let problem = ReconfigProblem::new(
                scene.clone(),
                mode,
                ObjectiveSpec::new(ObjectiveKind::Mean),
                8,
                77 + i,
                4000,
            )
            .unwrap();
            values.push(solve(&problem).unwrap().best_value);
        }
        if values[1] < values[0] {
            drone_wins += 1;
        }
    }
    assert!(
        drone_wins >= 14,
        "drone won only {drone_wins}/20 scenes"
    );
    println!("PASS criterion 8: drone mean quality beat PTZ on {drone_wins}/20 scenes");
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run_camnet(args: &[&str]) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_camnet"))
        .args(args)
        .output()
        .expect("spawn camnet");
    (out.stdout, out.status.code())
}

#[test]
fn criterion_09_seeded_commands_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let scene = fixture("three_ptz.json");
    let scene = scene.to_str().unwrap();

    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    let optimize = |out: &Path| {
        run_camnet(&[
            "optimize", scene, "--mode", "ptz", "--objective", "minimax", "--starts", "5",
            "--seed", "11", "--max-evals", "3000", "--out", out.to_str().unwrap(),
        ])
    };
    let (stdout_a, code_a) = optimize(&out_a);
    let (stdout_b, code_b) = optimize(&out_b);
    assert_eq!(code_a, code_b);
    assert_eq!(stdout_a, stdout_b, "optimize stdout differs between runs");
    assert_eq!(
        std::fs::read(&out_a).unwrap(),
        std::fs::read(&out_b).unwrap(),
        "optimized scene files differ"
    );

    // Keep the oracle grid tiny; determinism is the point here.
    let oracle = || run_camnet(&["oracle", scene, "--grid-points", "4", "--mode", "ptz"]);
    let (oracle_a, _) = oracle();
    let (oracle_b, _) = oracle();
    assert_eq!(oracle_a, oracle_b, "oracle stdout differs between runs");

    let simulate = || {
        run_camnet(&[
            "simulate-error",
            fixture("single_overhead.json").to_str().unwrap(),
            "--camera", "cam0", "--target", "t0", "--trials", "2000", "--seed", "3",
        ])
    };
    let (sim_a, sim_code) = simulate();
    let (sim_b, _) = simulate();
    assert_eq!(sim_code, Some(0));
    assert_eq!(sim_a, sim_b, "simulate-error stdout differs between runs");

    println!("PASS criterion 9: optimize, oracle, and simulate-error are byte-identical across reruns");
}

#[test]
fn criterion_10_largest_table_shape_solves_quickly() {
    let ws = Workspace::new(
        Vector3::new(-2500.0, -1500.0, 0.0),
        Vector3::new(2500.0, 1500.0, 3000.0),
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let camera_spots = [
        (-2200.0, -1300.0),
        (2200.0, -1300.0),
        (-2200.0, 1300.0),
        (2200.0, 1300.0),
        (0.0, -1400.0),
        (0.0, 1400.0),
        (0.0, 0.0),
    ];
    let cameras: Vec<Camera> = camera_spots
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            camera(
                &format!("cam{i}"),
                Vector3::new(x, y, 2800.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(0.2..1.2),
                intrinsics(
                    rng.random_range(0.6..0.9),
                    rng.random_range(900..1900),
                    rng.random_range(0.1..0.25),
                ),
                &ws,
            )
        })
        .collect();
    let targets: Vec<Target> = (0..20)
        .map(|i| {
            Target::new(
                format!("t{i}"),
                Vector3::new(
                    rng.random_range(-2200.0..2200.0),
                    rng.random_range(-1300.0..1300.0),
                    0.0,
                ),
            )
        })
        .collect();
    let scene = Scene::new(ws, cameras, targets).unwrap();

    let clock = Instant::now();
    let problem = ReconfigProblem::new(
        scene,
        Mode::Ptz,
        ObjectiveSpec::new(ObjectiveKind::Mean),
        16,
        5,
        camnet_core::DEFAULT_MAX_EVALS,
    )
    .unwrap();
    let solved = solve(&problem).unwrap();
    let elapsed = clock.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    assert!(solved.feasible, "7-camera solve left targets uncovered");
    println!(
        "PASS criterion 10: 7 cameras / 20 targets, 16 starts in {elapsed:?} (value {:.3})",
        solved.best_value
    );
}
