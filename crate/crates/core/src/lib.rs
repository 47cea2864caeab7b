//! Geometry and analysis core for comparing geographic visualisations in
//! immersive environments.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`sphere`]: exact spherical geometry on the unit sphere (distances,
//!   bearings, areas, three-angle rotations, uniform sampling).
//! * [`projection`]: the Hammer equal-area projection, Tissot indicatrices,
//!   antimeridian cutting / resampling of rotated paths and the curved-map
//!   remapping.
//! * [`scene`]: world-space embeddings of the four visualisations (exocentric
//!   globe, flat map, egocentric globe, curved map), drag-to-recenter and the
//!   flat map to globe morph.
//! * [`stimuli`]: generators for the distance, area and direction tasks,
//!   their ground truth, scoring and session layout.
//! * [`analytics`]: interaction-log aggregation, per-condition summaries and
//!   the Friedman rank test.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytics;
pub mod projection;
pub mod rng;
pub mod scene;
pub mod sphere;
pub mod stimuli;

mod vec3;

pub use projection::{GeoPath, MapPoint, ProjectionError, TissotEllipse};
pub use scene::{SceneEmbedding, SceneError, SceneKind, WorldPoint};
pub use sphere::{GeoCoord, GeometryError, SphericalPolygon, SphericalRotation, UnitVec3};
