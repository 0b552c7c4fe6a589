//! Scene file format: JSON in, canonical JSON out.
//!
//! Units are millimeters and radians, no auto-detection. Distortion
//! coefficients are expressed in unit-edge normalized coordinates (cone edge
//! at radius 1). Unknown fields are rejected with the offending path.
//! Missing per-camera bounds default to the full pan circle, tilt from
//! straight down to horizontal, and a position box equal to the workspace
//! with the flying floor applied; serialization always writes the
//! materialized bounds, so parse -> serialize -> parse is stable.

use anyhow::{anyhow, bail, Context};
use camnet_core::{
    Camera, CameraBounds, CameraIntrinsics, CameraPose, DistortionCoefficients, Scene, Target,
    Workspace,
};
use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneDoc {
    workspace: WorkspaceDoc,
    cameras: Vec<CameraDoc>,
    targets: Vec<TargetDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkspaceDoc {
    min: [f64; 3],
    max: [f64; 3],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CameraDoc {
    id: String,
    position_mm: [f64; 3],
    pan_rad: f64,
    tilt_rad: f64,
    alpha_rad: f64,
    resolution_w: u32,
    #[serde(default)]
    distortion: DistortionDoc,
    #[serde(default)]
    bounds: Option<BoundsDoc>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistortionDoc {
    #[serde(default)]
    k1: f64,
    #[serde(default)]
    k2: f64,
    #[serde(default)]
    k3: f64,
    #[serde(default)]
    k4: f64,
    #[serde(default)]
    k5: f64,
    #[serde(default)]
    k6: f64,
    #[serde(default)]
    s1: f64,
    #[serde(default)]
    s2: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsDoc {
    #[serde(default)]
    pan: Option<[f64; 2]>,
    #[serde(default)]
    tilt: Option<[f64; 2]>,
    #[serde(default)]
    position_min: Option<[f64; 3]>,
    #[serde(default)]
    position_max: Option<[f64; 3]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetDoc {
    id: String,
    position_mm: [f64; 3],
}

fn vec3(a: [f64; 3]) -> Vector3<f64> {
    Vector3::new(a[0], a[1], a[2])
}

fn arr3(v: &Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// Parses scene JSON, materializing bounds defaults and validating the scene.
pub fn parse_scene(json: &str) -> anyhow::Result<Scene> {
    let mut deserializer = serde_json::Deserializer::from_str(json);
    let doc: SceneDoc = serde_path_to_error::deserialize(&mut deserializer)
        .map_err(|e| anyhow!("at {}: {}", e.path(), e.inner()))?;

    let workspace = Workspace::new(vec3(doc.workspace.min), vec3(doc.workspace.max))?;

    let mut cameras = Vec::with_capacity(doc.cameras.len());
    for c in &doc.cameras {
        let d = &c.distortion;
        let distortion =
            DistortionCoefficients::new(d.k1, d.k2, d.k3, d.k4, d.k5, d.k6, d.s1, d.s2)
                .with_context(|| format!("camera \"{}\"", c.id))?;
        let intrinsics = CameraIntrinsics::new(c.alpha_rad, c.resolution_w, distortion)
            .with_context(|| format!("camera \"{}\"", c.id))?;

        let defaults = CameraBounds::default_for(&workspace);
        let mut bounds = defaults;
        if let Some(b) = &c.bounds {
            if let Some(pan) = b.pan {
                bounds.pan = (pan[0], pan[1]);
            }
            if let Some(tilt) = b.tilt {
                bounds.tilt = (tilt[0], tilt[1]);
            }
            if let Some(lo) = b.position_min {
                bounds.position_min = vec3(lo);
            }
            if let Some(hi) = b.position_max {
                bounds.position_max = vec3(hi);
            }
        }
        // Keep movable positions inside the workspace no matter what the
        // file says.
        bounds.position_min = bounds.position_min.sup(&workspace.min);
        bounds.position_max = bounds.position_max.inf(&workspace.max);
        bounds
            .validate()
            .with_context(|| format!("camera \"{}\" bounds", c.id))?;

        cameras.push(Camera {
            id: c.id.clone(),
            intrinsics,
            pose: CameraPose::new(vec3(c.position_mm), c.pan_rad, c.tilt_rad),
            bounds,
        });
    }

    let targets = doc
        .targets
        .iter()
        .map(|t| Target::new(t.id.clone(), vec3(t.position_mm)))
        .collect();

    Ok(Scene::new(workspace, cameras, targets)?)
}

/// Reads and parses a scene file, tagging errors with the path.
pub fn load_scene(path: &Path) -> anyhow::Result<Scene> {
    let json = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    parse_scene(&json).with_context(|| format!("parsing {}", path.display()))
}

/// Canonical JSON for a scene: every field present, bounds materialized.
pub fn serialize_scene(scene: &Scene) -> String {
    let doc = SceneDoc {
        workspace: WorkspaceDoc {
            min: arr3(&scene.workspace.min),
            max: arr3(&scene.workspace.max),
        },
        cameras: scene
            .cameras
            .iter()
            .map(|c| {
                let d = &c.intrinsics.distortion;
                CameraDoc {
                    id: c.id.clone(),
                    position_mm: arr3(&c.pose.position),
                    pan_rad: c.pose.pan,
                    tilt_rad: c.pose.tilt,
                    alpha_rad: c.intrinsics.half_angle,
                    resolution_w: c.intrinsics.resolution,
                    distortion: DistortionDoc {
                        k1: d.k1,
                        k2: d.k2,
                        k3: d.k3,
                        k4: d.k4,
                        k5: d.k5,
                        k6: d.k6,
                        s1: d.s1,
                        s2: d.s2,
                    },
                    bounds: Some(BoundsDoc {
                        pan: Some([c.bounds.pan.0, c.bounds.pan.1]),
                        tilt: Some([c.bounds.tilt.0, c.bounds.tilt.1]),
                        position_min: Some(arr3(&c.bounds.position_min)),
                        position_max: Some(arr3(&c.bounds.position_max)),
                    }),
                }
            })
            .collect(),
        targets: scene
            .targets
            .iter()
            .map(|t| TargetDoc {
                id: t.id.clone(),
                position_mm: arr3(&t.position),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("scene serialization");
    out.push('\n');
    out
}

/// Writes the canonical form to disk.
pub fn save_scene(scene: &Scene, path: &Path) -> anyhow::Result<()> {
    std::fs::write(path, serialize_scene(scene))
        .with_context(|| format!("writing {}", path.display()))
}

/// Splits a WxH grid argument like "64x48".
pub fn parse_grid_size(s: &str) -> anyhow::Result<(usize, usize)> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| anyhow!("grid must look like WxH, got \"{s}\""))?;
    let w: usize = w.trim().parse().context("grid width")?;
    let h: usize = h.trim().parse().context("grid height")?;
    if w < 2 || h < 2 {
        bail!("grid must be at least 2x2, got {w}x{h}");
    }
    Ok((w, h))
}
