//! Scene file I/O, quality-map raster export, and the command layer behind
//! the `camnet` binary.

pub mod commands;
pub mod raster;
pub mod report;
pub mod scene_file;
