//! Domain types and view geometry.
//!
//! All lengths are millimeters, all angles radians. A camera pose is a mount
//! position plus pan/tilt; roll is fixed to zero. The optical axis for
//! `pan = 0, tilt = 0` points straight down (0, 0, -1); tilt rotates the axis
//! toward horizontal and pan rotates it about the world z axis.

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// Axis direction epsilon below which the optical axis counts as vertical.
const VERTICAL_EPS: f64 = 1e-12;

/// Brown-Conrady distortion coefficients in unit-edge normalized coordinates
/// (the cone edge maps to radius 1).
///
/// `k1..k6` are the rational radial coefficients, `s1`/`s2` the tangential
/// ones. Calibrated values must be expressed in the same unit-edge
/// normalization.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DistortionCoefficients {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub k5: f64,
    pub k6: f64,
    pub s1: f64,
    pub s2: f64,
}

impl DistortionCoefficients {
    /// Validating constructor. Requires all coefficients finite and the
    /// rational denominator strictly positive over the reachable radius
    /// range r in [0, 1], checked by sampling.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        k1: f64,
        k2: f64,
        k3: f64,
        k4: f64,
        k5: f64,
        k6: f64,
        s1: f64,
        s2: f64,
    ) -> Result<Self> {
        let coeffs = Self {
            k1,
            k2,
            k3,
            k4,
            k5,
            k6,
            s1,
            s2,
        };
        coeffs.validate()?;
        Ok(coeffs)
    }

    /// All radial and tangential coefficients zero (ideal pinhole).
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.k1, self.k2, self.k3, self.k4, self.k5, self.k6, self.s1, self.s2,
        ];
        if all.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidIntrinsics(
                "distortion coefficients must be finite".into(),
            ));
        }
        // Sample the normalized radius range covered by the field of view.
        const SAMPLES: usize = 1000;
        for i in 0..=SAMPLES {
            let r = i as f64 / SAMPLES as f64;
            let r2 = r * r;
            if self.radial_denominator(r2) <= 0.0 {
                return Err(Error::InvalidIntrinsics(format!(
                    "radial denominator not positive at r = {r}"
                )));
            }
        }
        Ok(())
    }

    /// Denominator of the rational radial factor at squared radius `r2`.
    pub fn radial_denominator(&self, r2: f64) -> f64 {
        1.0 + r2 * (self.k4 + r2 * (self.k5 + r2 * self.k6))
    }

    /// Numerator of the rational radial factor at squared radius `r2`.
    pub fn radial_numerator(&self, r2: f64) -> f64 {
        1.0 + r2 * (self.k1 + r2 * (self.k2 + r2 * self.k3))
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::default()
    }
}

/// Conic field-of-view camera intrinsics: half angle of view, maximum radial
/// resolution in pixels, and the lens distortion model.
#[derive(Debug, Clone, PartialEq)]
pub struct CameraIntrinsics {
    /// Half angle of view, strictly inside (0, pi/2).
    pub half_angle: f64,
    /// Maximum radial resolution in pixels (diameter of the cone image).
    pub resolution: u32,
    pub distortion: DistortionCoefficients,
}

impl CameraIntrinsics {
    pub fn new(half_angle: f64, resolution: u32, distortion: DistortionCoefficients) -> Result<Self> {
        if !half_angle.is_finite() || half_angle <= 0.0 || half_angle >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::InvalidIntrinsics(format!(
                "half angle {half_angle} outside (0, pi/2)"
            )));
        }
        if resolution < 1 {
            return Err(Error::InvalidIntrinsics("resolution must be >= 1".into()));
        }
        distortion.validate()?;
        Ok(Self {
            half_angle,
            resolution,
            distortion,
        })
    }
}

/// Mount position plus pan/tilt orientation, zero roll.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraPose {
    /// Mount position, millimeters.
    pub position: Vector3<f64>,
    /// Rotation about the world z axis, radians.
    pub pan: f64,
    /// Rotation from straight down toward horizontal, radians.
    pub tilt: f64,
}

impl CameraPose {
    pub fn new(position: Vector3<f64>, pan: f64, tilt: f64) -> Self {
        Self { position, pan, tilt }
    }

    /// Unit optical-axis direction for this pan/tilt.
    ///
    /// `pan = 0, tilt = 0` gives (0, 0, -1); `tilt = pi/2, pan = 0` gives
    /// (1, 0, 0); pan then rotates about world z.
    pub fn optical_axis(&self) -> Vector3<f64> {
        let (sp, cp) = self.pan.sin_cos();
        let (st, ct) = self.tilt.sin_cos();
        Vector3::new(st * cp, st * sp, -ct)
    }

    /// Right-handed image basis (x right, y down, z along the axis) under the
    /// zero-roll convention: the image x axis is horizontal in the world
    /// frame. For a vertical axis that constraint is vacuous; there the image
    /// x axis is the world x axis rotated by pan, so panning a straight-down
    /// camera re-labels azimuth as a physical mount would.
    pub fn image_basis(&self) -> (Vector3<f64>, Vector3<f64>, Vector3<f64>) {
        let axis = self.optical_axis();
        let horizontal = axis.x.hypot(axis.y);
        let x_cam = if horizontal < VERTICAL_EPS {
            let (sp, cp) = self.pan.sin_cos();
            Vector3::new(cp, sp, 0.0)
        } else {
            Vector3::new(axis.y / horizontal, -axis.x / horizontal, 0.0)
        };
        let y_cam = axis.cross(&x_cam);
        (x_cam, y_cam, axis)
    }
}

/// A point target to observe.
#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub id: String,
    /// Position, millimeters.
    pub position: Vector3<f64>,
}

impl Target {
    pub fn new(id: impl Into<String>, position: Vector3<f64>) -> Self {
        Self {
            id: id.into(),
            position,
        }
    }
}

/// Axis-aligned workspace box, millimeters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Workspace {
    pub min: Vector3<f64>,
    pub max: Vector3<f64>,
}

impl Workspace {
    pub fn new(min: Vector3<f64>, max: Vector3<f64>) -> Result<Self> {
        if !(min.x <= max.x && min.y <= max.y && min.z <= max.z) {
            return Err(Error::InvalidScene("workspace min exceeds max".into()));
        }
        Ok(Self { min, max })
    }

    /// Inside-or-on-boundary test.
    pub fn contains(&self, p: &Vector3<f64>) -> bool {
        (self.min.x..=self.max.x).contains(&p.x)
            && (self.min.y..=self.max.y).contains(&p.y)
            && (self.min.z..=self.max.z).contains(&p.z)
    }
}

/// Per-camera decision-variable bounds: pan/tilt intervals for axis
/// reconfiguration, a position box for free-flying mounts.
#[derive(Debug, Clone, PartialEq)]
pub struct CameraBounds {
    pub pan: (f64, f64),
    pub tilt: (f64, f64),
    pub position_min: Vector3<f64>,
    pub position_max: Vector3<f64>,
}

/// Minimum flying height, millimeters.
pub const MIN_DRONE_HEIGHT_MM: f64 = 1000.0;

impl CameraBounds {
    /// Default bounds: full pan circle, tilt from straight down to
    /// horizontal, positions anywhere in the workspace above the flying
    /// floor (when the workspace reaches that high).
    pub fn default_for(workspace: &Workspace) -> Self {
        let mut position_min = workspace.min;
        if workspace.max.z >= MIN_DRONE_HEIGHT_MM {
            position_min.z = position_min.z.max(MIN_DRONE_HEIGHT_MM);
        }
        Self {
            pan: (-std::f64::consts::PI, std::f64::consts::PI),
            tilt: (0.0, std::f64::consts::FRAC_PI_2),
            position_min,
            position_max: workspace.max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pan.0 > self.pan.1 || self.tilt.0 > self.tilt.1 {
            return Err(Error::InvalidScene("empty pan or tilt interval".into()));
        }
        let (lo, hi) = (self.position_min, self.position_max);
        if !(lo.x <= hi.x && lo.y <= hi.y && lo.z <= hi.z) {
            return Err(Error::InvalidScene("empty position box".into()));
        }
        Ok(())
    }
}

/// One camera of the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Camera {
    pub id: String,
    pub intrinsics: CameraIntrinsics,
    pub pose: CameraPose,
    pub bounds: CameraBounds,
}

/// Cameras, targets, and the workspace box; the unit of file I/O.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub workspace: Workspace,
    pub cameras: Vec<Camera>,
    pub targets: Vec<Target>,
}

impl Scene {
    pub fn new(workspace: Workspace, cameras: Vec<Camera>, targets: Vec<Target>) -> Result<Self> {
        let scene = Self {
            workspace,
            cameras,
            targets,
        };
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cameras.is_empty() {
            return Err(Error::InvalidScene("scene has no cameras".into()));
        }
        if self.targets.is_empty() {
            return Err(Error::InvalidScene("scene has no targets".into()));
        }
        for (i, camera) in self.cameras.iter().enumerate() {
            if self.cameras[..i].iter().any(|c| c.id == camera.id) {
                return Err(Error::InvalidScene(format!(
                    "duplicate camera id \"{}\"",
                    camera.id
                )));
            }
            if !self.workspace.contains(&camera.pose.position) {
                return Err(Error::InvalidScene(format!(
                    "camera \"{}\" outside the workspace",
                    camera.id
                )));
            }
            camera.bounds.validate()?;
        }
        for (i, target) in self.targets.iter().enumerate() {
            if !target.position.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidScene(format!(
                    "target \"{}\" position not finite",
                    target.id
                )));
            }
            if self.targets[..i].iter().any(|t| t.id == target.id) {
                return Err(Error::InvalidScene(format!(
                    "duplicate target id \"{}\"",
                    target.id
                )));
            }
            if !self.workspace.contains(&target.position) {
                return Err(Error::InvalidScene(format!(
                    "target \"{}\" outside the workspace",
                    target.id
                )));
            }
        }
        Ok(())
    }
}

/// Angles and range of one camera-target pairing.
///
/// `beta` is the angle between the viewing ray and the optical axis, in
/// [0, pi]. `gamma` is the azimuth of the target around the axis, measured
/// in the image plane from the image x axis, in (-pi, pi]. `distance` is the
/// camera-target range in millimeters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewGeometry {
    pub beta: f64,
    pub gamma: f64,
    pub distance: f64,
}

/// Computes the view angles and range for one camera-target pairing.
pub fn view_geometry(pose: &CameraPose, target_position: &Vector3<f64>) -> Result<ViewGeometry> {
    let ray = target_position - pose.position;
    let distance = ray.norm();
    if distance == 0.0 || !distance.is_finite() {
        return Err(Error::DegenerateGeometry);
    }
    let (x_cam, y_cam, axis) = pose.image_basis();
    let cos_beta = (ray.dot(&axis) / distance).clamp(-1.0, 1.0);
    let beta = cos_beta.acos();

    let in_plane_x = ray.dot(&x_cam);
    let in_plane_y = ray.dot(&y_cam);
    let in_plane = in_plane_x.hypot(in_plane_y);
    // On-axis targets have no azimuth; pin it to zero.
    let mut gamma = if in_plane < VERTICAL_EPS * distance {
        0.0
    } else {
        in_plane_y.atan2(in_plane_x)
    };
    if gamma <= -std::f64::consts::PI {
        gamma = std::f64::consts::PI;
    }
    Ok(ViewGeometry {
        beta,
        gamma,
        distance,
    })
}

/// Binary cone test: the target is visible iff beta <= the half angle.
pub fn visibility(geom: &ViewGeometry, intrinsics: &CameraIntrinsics) -> bool {
    geom.beta <= intrinsics.half_angle
}
