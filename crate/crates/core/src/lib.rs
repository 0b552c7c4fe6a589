//! Sensing-quality modeling and reconfiguration for camera networks.
//!
//! The model scores how well a heterogeneous camera network observes point
//! targets in 3D: each camera-target pair gets a pixel-footprint quality in
//! millimeters per pixel (perspective times lens-distortion factor), visible
//! contributions fuse harmonically into a per-target error bound, and two
//! scalar objectives (mean and worst-case) drive constrained reconfiguration
//! of either the camera axes or the camera positions.
//!
//! Lengths are millimeters, angles radians, everywhere.

pub mod error;
pub mod fusion;
pub mod nelder_mead;
pub mod objective;
pub mod optimizer;
pub mod oracle;
pub mod quality;
pub mod scene;

pub use error::{Error, Result};
pub use fusion::{fuse_point, fuse_scene, fuse_target, PairRecord, QualityReport, TargetFusion};
pub use objective::{is_feasible, objective_value, ObjectiveKind, ObjectiveSpec};
pub use optimizer::{
    apply_configuration, solve, solve_minimax, variable_bounds, AppliedConfiguration,
    Configuration, Mode, OptResult, ReconfigProblem, DEFAULT_MAX_EVALS, DEFAULT_STARTS,
};
pub use oracle::{
    grid_search, quantize_segment, simulate_quantization_error, ErrorTrialStats, GridSearchResult,
    GridSpec, SegmentTrial, DEFAULT_GRID_CELL_CAP,
};
pub use quality::{
    distort, distortion_jacobian, distortion_quality, pair_quality, perspective_quality,
    QualityBreakdown,
};
pub use scene::{
    view_geometry, visibility, Camera, CameraBounds, CameraIntrinsics, CameraPose,
    DistortionCoefficients, Scene, Target, ViewGeometry, Workspace, MIN_DRONE_HEIGHT_MM,
};
