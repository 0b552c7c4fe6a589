//! Harmonic fusion of per-camera qualities into per-target error bounds.
//!
//! Every visible camera contributes the reciprocal of its quality; the fused
//! bound is the reciprocal of the sum, so it never exceeds the best single
//! contributor and improves monotonically as cameras are added. Targets seen
//! by no camera carry an explicit `+inf` sentinel instead of an error so the
//! optimizer's penalty logic can see them.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::quality::{pair_quality, QualityBreakdown};
use crate::scene::{view_geometry, visibility, Camera, Scene, ViewGeometry};

/// One camera's contribution to a target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contributor {
    pub camera_index: usize,
    /// Combined quality `Q`; `None` when the pair sits behind the camera
    /// plane, where the cone test already excludes it.
    pub quality: Option<f64>,
    pub visible: bool,
}

/// Fused result for one target.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetFusion {
    pub target_id: String,
    pub covered: bool,
    /// Harmonic fusion of visible contributors, `+inf` when uncovered.
    pub fused_q: f64,
    pub contributors: Vec<Contributor>,
}

/// Everything computed for one camera-target pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRecord {
    pub camera_index: usize,
    pub target_index: usize,
    pub geometry: Option<ViewGeometry>,
    /// Omitted for pairs behind the camera plane.
    pub quality: Option<QualityBreakdown>,
    pub visible: bool,
    /// Per-pair failure, recorded instead of aborting the sweep.
    pub error: Option<String>,
}

/// Full sweep over a scene: every pair plus every per-target fusion, in
/// scene order.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub pairs: Vec<PairRecord>,
    pub targets: Vec<TargetFusion>,
}

/// Harmonically fuses `(quality, visible)` contributions for one target.
///
/// Returns `(covered, fused_q)`; uncovered targets get `+inf`.
pub fn fuse_target(qualities: &[(f64, bool)]) -> Result<(bool, f64)> {
    let mut reciprocal_sum = 0.0;
    let mut seen = false;
    for &(quality, visible) in qualities {
        if !visible {
            continue;
        }
        if quality <= 0.0 {
            return Err(Error::NonpositiveQuality { quality });
        }
        reciprocal_sum += 1.0 / quality;
        seen = true;
    }
    if seen {
        Ok((true, 1.0 / reciprocal_sum))
    } else {
        Ok((false, f64::INFINITY))
    }
}

/// Fused quality of a free-standing point, e.g. one quality-map cell.
pub fn fuse_point(cameras: &[Camera], point: &Vector3<f64>) -> Result<f64> {
    let mut contributions = Vec::with_capacity(cameras.len());
    for camera in cameras {
        let Ok(geom) = view_geometry(&camera.pose, point) else {
            continue;
        };
        if !visibility(&geom, &camera.intrinsics) {
            continue;
        }
        let quality = pair_quality(&geom, &camera.intrinsics)?;
        contributions.push((quality.q_total, true));
    }
    fuse_target(&contributions).map(|(_, fused)| fused)
}

/// Sweeps every camera-target pair of a scene and fuses per target.
///
/// Per-pair geometry and quality failures are recorded on the pair record;
/// the sweep itself only fails on nonpositive visible quality.
pub fn fuse_scene(scene: &Scene) -> Result<QualityReport> {
    let mut pairs = Vec::with_capacity(scene.cameras.len() * scene.targets.len());
    let mut per_target: Vec<Vec<Contributor>> =
        vec![Vec::with_capacity(scene.cameras.len()); scene.targets.len()];

    for (camera_index, camera) in scene.cameras.iter().enumerate() {
        for (target_index, target) in scene.targets.iter().enumerate() {
            let mut record = PairRecord {
                camera_index,
                target_index,
                geometry: None,
                quality: None,
                visible: false,
                error: None,
            };
            match view_geometry(&camera.pose, &target.position) {
                Err(err) => record.error = Some(err.to_string()),
                Ok(geom) => {
                    record.geometry = Some(geom);
                    record.visible = visibility(&geom, &camera.intrinsics);
                    if geom.beta < std::f64::consts::FRAC_PI_2 {
                        match pair_quality(&geom, &camera.intrinsics) {
                            Ok(quality) => record.quality = Some(quality),
                            Err(err) => record.error = Some(err.to_string()),
                        }
                    }
                }
            }
            per_target[target_index].push(Contributor {
                camera_index,
                quality: record.quality.map(|q| q.q_total),
                visible: record.visible,
            });
            pairs.push(record);
        }
    }

    let mut targets = Vec::with_capacity(scene.targets.len());
    for (target_index, target) in scene.targets.iter().enumerate() {
        let contributors = std::mem::take(&mut per_target[target_index]);
        let inputs: Vec<(f64, bool)> = contributors
            .iter()
            .filter_map(|c| c.quality.map(|q| (q, c.visible)))
            .collect();
        let (covered, fused_q) = fuse_target(&inputs)?;
        targets.push(TargetFusion {
            target_id: target.id.clone(),
            covered,
            fused_q,
            contributors,
        });
    }

    Ok(QualityReport { pairs, targets })
}
