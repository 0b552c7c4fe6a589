//! Single-camera sensing quality.
//!
//! Quality is the actual length on the target plane represented by one pixel
//! at the target's image location, in millimeters per pixel; lower is better.
//! It is the product of two factors:
//!
//! * the perspective factor `q_p = 2 * distance * cos(beta) * tan(alpha) / w`,
//!   the pixel footprint of an ideal pinhole at the target's axial depth;
//! * the distortion factor `q_d`, the product of the diagonal Jacobian
//!   entries of the Brown-Conrady map evaluated at the target's normalized
//!   image position.
//!
//! Normalized coordinates are unit-edge: the cone edge (beta = alpha) maps to
//! radius 1, so `x = tan(beta) cos(gamma) / tan(alpha)` and likewise for `y`.
//! The geometric projection is treated as the undistorted input point and the
//! forward Brown-Conrady map is applied to it.

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::scene::{CameraIntrinsics, DistortionCoefficients, ViewGeometry};

/// Central finite-difference step for the distortion Jacobian, chosen as the
/// geometric mean of truncation and rounding error on O(1) coordinates.
pub const JACOBIAN_STEP: f64 = 1e-6;

/// Denominator magnitude below which the rational radial factor is treated
/// as singular.
const SINGULAR_EPS: f64 = 1e-12;

/// Per-pair quality factors. `q_p` and `q_total` are millimeters per pixel,
/// `q_d` is dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityBreakdown {
    pub q_p: f64,
    pub q_d: f64,
    pub q_total: f64,
}

/// Pixel footprint of an ideal pinhole: `2 * distance * cos(beta) * tan(alpha) / w`.
///
/// Fails when the target sits on or behind the camera plane (beta >= pi/2).
pub fn perspective_quality(geom: &ViewGeometry, intrinsics: &CameraIntrinsics) -> Result<f64> {
    if geom.beta >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::BehindCameraPlane { beta: geom.beta });
    }
    Ok(2.0 * geom.distance * geom.beta.cos() * intrinsics.half_angle.tan()
        / intrinsics.resolution as f64)
}

/// Forward Brown-Conrady map on normalized coordinates:
///
/// ```text
/// x' = x K_r + 2 s1 x y + s2 (r^2 + 2 x^2)
/// y' = y K_r + s1 (r^2 + 2 y^2) + 2 s2 x y
/// K_r = (1 + k1 r^2 + k2 r^4 + k3 r^6) / (1 + k4 r^2 + k5 r^4 + k6 r^6)
/// ```
pub fn distort(point: Vector2<f64>, coeffs: &DistortionCoefficients) -> Result<Vector2<f64>> {
    let (x, y) = (point.x, point.y);
    let r2 = x * x + y * y;
    let denominator = coeffs.radial_denominator(r2);
    if denominator.abs() < SINGULAR_EPS {
        return Err(Error::SingularDistortion { r_squared: r2 });
    }
    let k_r = coeffs.radial_numerator(r2) / denominator;
    let xy = x * y;
    Ok(Vector2::new(
        x * k_r + 2.0 * coeffs.s1 * xy + coeffs.s2 * (r2 + 2.0 * x * x),
        y * k_r + coeffs.s1 * (r2 + 2.0 * y * y) + 2.0 * coeffs.s2 * xy,
    ))
}

/// Diagonal entries (dx'/dx, dy'/dy) of the Jacobian of [`distort`],
/// by central finite differences with step [`JACOBIAN_STEP`].
pub fn distortion_jacobian(
    point: Vector2<f64>,
    coeffs: &DistortionCoefficients,
) -> Result<(f64, f64)> {
    let h = JACOBIAN_STEP;
    let x_plus = distort(Vector2::new(point.x + h, point.y), coeffs)?;
    let x_minus = distort(Vector2::new(point.x - h, point.y), coeffs)?;
    let y_plus = distort(Vector2::new(point.x, point.y + h), coeffs)?;
    let y_minus = distort(Vector2::new(point.x, point.y - h), coeffs)?;
    Ok((
        (x_plus.x - x_minus.x) / (2.0 * h),
        (y_plus.y - y_minus.y) / (2.0 * h),
    ))
}

/// Normalized image position of a view: the cone edge maps to unit radius.
pub fn normalized_projection(geom: &ViewGeometry, intrinsics: &CameraIntrinsics) -> Result<Vector2<f64>> {
    if geom.beta >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::BehindCameraPlane { beta: geom.beta });
    }
    let radius = geom.beta.tan() / intrinsics.half_angle.tan();
    Ok(Vector2::new(
        radius * geom.gamma.cos(),
        radius * geom.gamma.sin(),
    ))
}

/// Distortion factor `q_d`: product of the diagonal Jacobian entries of the
/// forward map at the view's normalized image position.
///
/// Views outside the cone (beta > alpha) still get a value; visibility
/// gating happens in fusion.
pub fn distortion_quality(geom: &ViewGeometry, intrinsics: &CameraIntrinsics) -> Result<f64> {
    let point = normalized_projection(geom, intrinsics)?;
    let (dx, dy) = distortion_jacobian(point, &intrinsics.distortion)?;
    Ok(dx * dy)
}

/// Combined per-pair quality `Q = q_p * q_d`.
pub fn pair_quality(geom: &ViewGeometry, intrinsics: &CameraIntrinsics) -> Result<QualityBreakdown> {
    let q_p = perspective_quality(geom, intrinsics)?;
    let q_d = distortion_quality(geom, intrinsics)?;
    Ok(QualityBreakdown {
        q_p,
        q_d,
        q_total: q_p * q_d,
    })
}
