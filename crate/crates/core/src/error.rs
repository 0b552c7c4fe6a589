//! Crate-wide error type.

/// Errors produced by geometry, quality, fusion, and solver operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Target coincides with the camera position; view angles are undefined.
    #[error("degenerate geometry: target coincides with the camera position")]
    DegenerateGeometry,

    /// The target sits on or behind the camera plane (beta >= pi/2).
    #[error("behind camera plane: beta = {beta} rad")]
    BehindCameraPlane { beta: f64 },

    /// The rational radial denominator vanishes at this radius.
    #[error("distortion model singular at r^2 = {r_squared}")]
    SingularDistortion { r_squared: f64 },

    /// A visible camera reported a quality that cannot enter a harmonic sum.
    #[error("nonpositive quality {quality} from a visible camera")]
    NonpositiveQuality { quality: f64 },

    #[error("invalid intrinsics: {0}")]
    InvalidIntrinsics(String),

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    /// Configuration vector length does not match the mode and camera count.
    #[error("configuration has {got} components, expected {expected}")]
    ConfigurationLength { got: usize, expected: usize },

    #[error("grid needs at least 2 points per dimension")]
    GridTooCoarse,

    /// Exhaustive grid would exceed the configured cell cap.
    #[error("grid of {cells} cells exceeds the cap of {cap}")]
    GridTooLarge { cells: u128, cap: u64 },

    #[error("target not visible")]
    TargetNotVisible,

    /// Back-projected ray misses the target plane.
    #[error("ray does not intersect the target plane")]
    NoPlaneIntersection,

    /// Newton undistortion did not converge for a pixel sample.
    #[error("undistortion failed to converge")]
    UndistortDiverged,
}

pub type Result<T> = std::result::Result<T, Error>;
