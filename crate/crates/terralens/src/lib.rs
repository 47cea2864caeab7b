//! Renderer, stimulus generator and study analyzer built on `terralens_core`.

pub mod analyze;
pub mod cli;
pub mod coastline;
pub mod draw;
pub mod error;
pub mod formats;
pub mod logs;
pub mod raster;
pub mod svg;
