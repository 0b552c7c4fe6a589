//! Fused-quality rasters over an axis-aligned workspace plane, exported as
//! CSV or ASCII PGM heat maps (lighter pixels mean better quality).

use anyhow::{anyhow, bail};
use camnet_core::{fuse_point, Scene};
use nalgebra::Vector3;
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneAxis {
    X,
    Y,
    Z,
}

/// An axis-aligned sampling plane such as `z=0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneSpec {
    pub axis: PlaneAxis,
    pub value: f64,
}

impl FromStr for PlaneSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (axis, value) = s
            .split_once('=')
            .ok_or_else(|| anyhow!("plane must look like z=0, got \"{s}\""))?;
        let axis = match axis.trim() {
            "x" | "X" => PlaneAxis::X,
            "y" | "Y" => PlaneAxis::Y,
            "z" | "Z" => PlaneAxis::Z,
            other => bail!("unknown plane axis \"{other}\""),
        };
        let value: f64 = value.trim().parse()?;
        Ok(PlaneSpec { axis, value })
    }
}

/// Row-major fused-quality samples; `+inf` marks uncovered cells. Row 0,
/// column 0 sits at the workspace minimum corner, and cells are sampled at
/// their centers.
#[derive(Debug, Clone)]
pub struct QualityMapRaster {
    pub width: usize,
    pub height: usize,
    pub plane: PlaneSpec,
    pub cells: Vec<f64>,
}

impl QualityMapRaster {
    pub fn cell(&self, row: usize, col: usize) -> f64 {
        self.cells[row * self.width + col]
    }
}

/// Samples the fused quality of every cell center on the requested plane.
pub fn compute_quality_map(
    scene: &Scene,
    width: usize,
    height: usize,
    plane: PlaneSpec,
) -> anyhow::Result<QualityMapRaster> {
    if width < 2 || height < 2 {
        bail!("raster must be at least 2x2, got {width}x{height}");
    }
    let ws = &scene.workspace;
    let (axis_range, u_range, v_range) = match plane.axis {
        PlaneAxis::X => ((ws.min.x, ws.max.x), (ws.min.y, ws.max.y), (ws.min.z, ws.max.z)),
        PlaneAxis::Y => ((ws.min.y, ws.max.y), (ws.min.x, ws.max.x), (ws.min.z, ws.max.z)),
        PlaneAxis::Z => ((ws.min.z, ws.max.z), (ws.min.x, ws.max.x), (ws.min.y, ws.max.y)),
    };
    if plane.value < axis_range.0 || plane.value > axis_range.1 {
        bail!(
            "plane at {} lies outside the workspace range [{}, {}]",
            plane.value,
            axis_range.0,
            axis_range.1
        );
    }

    let du = (u_range.1 - u_range.0) / width as f64;
    let dv = (v_range.1 - v_range.0) / height as f64;
    let mut cells = Vec::with_capacity(width * height);
    for row in 0..height {
        let v = v_range.0 + (row as f64 + 0.5) * dv;
        for col in 0..width {
            let u = u_range.0 + (col as f64 + 0.5) * du;
            let point = match plane.axis {
                PlaneAxis::X => Vector3::new(plane.value, u, v),
                PlaneAxis::Y => Vector3::new(u, plane.value, v),
                PlaneAxis::Z => Vector3::new(u, v, plane.value),
            };
            cells.push(fuse_point(&scene.cameras, &point)?);
        }
    }
    Ok(QualityMapRaster {
        width,
        height,
        plane,
        cells,
    })
}

/// CSV rows of numeric fused quality, `inf` for uncovered cells.
pub fn to_csv(raster: &QualityMapRaster) -> String {
    let mut out = String::new();
    for row in 0..raster.height {
        for col in 0..raster.width {
            if col > 0 {
                out.push(',');
            }
            let q = raster.cell(row, col);
            if q.is_finite() {
                let _ = write!(out, "{q}");
            } else {
                out.push_str("inf");
            }
        }
        out.push('\n');
    }
    out
}

/// ASCII PGM (P2, maxval 255). Covered cells are the linear normalization of
/// negated quality over the finite cells, so lighter means better; uncovered
/// cells are black.
pub fn to_pgm(raster: &QualityMapRaster) -> String {
    let finite: Vec<f64> = raster.cells.iter().copied().filter(|q| q.is_finite()).collect();
    let (lo, hi) = finite.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &q| {
        (lo.min(-q), hi.max(-q))
    });

    let mut out = format!("P2\n{} {}\n255\n", raster.width, raster.height);
    for row in 0..raster.height {
        for col in 0..raster.width {
            if col > 0 {
                out.push(' ');
            }
            let q = raster.cell(row, col);
            let gray = if !q.is_finite() {
                0
            } else if hi <= lo {
                255
            } else {
                (255.0 * (-q - lo) / (hi - lo)).round() as u32
            };
            let _ = write!(out, "{gray}");
        }
        out.push('\n');
    }
    out
}
