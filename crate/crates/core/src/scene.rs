//! World-space embeddings of the four visualisations.
//!
//! World frame: metres, right-handed, `+y` up, the viewer's head at the
//! origin looking along `-z`. Every embedding applies its
//! [`SphericalRotation`] to the geography first; with the identity rotation
//! the point (0°, 0°) sits straight ahead of the viewer and north is up.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::projection::{
    curved_remap, curved_unmap, hammer_forward, hammer_inverse, GeoPath, MapPoint, ProjectionError, CURVED_SPAN_H,
    CURVED_SPAN_V, HAMMER_HALF_HEIGHT, HAMMER_HALF_WIDTH,
};
use crate::sphere::{wrap_degrees, GeoCoord, SphericalRotation, UnitVec3};
use crate::vec3::Vec3;

/// Distance from a scene surface within which a world point counts as lying
/// on it, metres.
pub const SURFACE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SceneError {
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error("world point is {0} m away from the scene surface")]
    OffSurface(f64),
    #[error("target cannot be reached by the grabbed location")]
    Unreachable,
    #[error("morph fraction {0} is outside [0, 1]")]
    InvalidFraction(f64),
    #[error("graticule spacing {0} does not divide 360")]
    InvalidSpacing(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WorldPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl WorldPoint {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance(&self, o: &WorldPoint) -> f64 {
        let (dx, dy, dz) = (self.x - o.x, self.y - o.y, self.z - o.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    fn vec(self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    fn from_vec(v: Vec3) -> Self {
        Self::new(v.x, v.y, v.z)
    }

    /// Componentwise `(1 - t)·self + t·other`, returning the endpoints
    /// exactly at `t = 0` and `t = 1`.
    pub fn lerp(&self, other: &WorldPoint, t: f64) -> WorldPoint {
        if t == 0.0 {
            return *self;
        }
        if t == 1.0 {
            return *other;
        }
        let s = 1.0 - t;
        WorldPoint::new(s * self.x + t * other.x, s * self.y + t * other.y, s * self.z + t * other.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SceneKind {
    Exocentric,
    FlatMap,
    Egocentric,
    CurvedMap,
}

impl SceneKind {
    pub const ALL: [SceneKind; 4] =
        [SceneKind::Exocentric, SceneKind::FlatMap, SceneKind::Egocentric, SceneKind::CurvedMap];

    pub fn name(&self) -> &'static str {
        match self {
            SceneKind::Exocentric => "exocentric",
            SceneKind::FlatMap => "flat",
            SceneKind::Egocentric => "egocentric",
            SceneKind::CurvedMap => "curved",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "exocentric" | "exocentric-globe" => Some(SceneKind::Exocentric),
            "flat" | "flat-map" => Some(SceneKind::FlatMap),
            "egocentric" | "egocentric-globe" => Some(SceneKind::Egocentric),
            "curved" | "curved-map" => Some(SceneKind::CurvedMap),
            _ => None,
        }
    }
}

/// Per-visualisation dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum SceneParams {
    /// Globe seen from outside; `distance` is from the head to its centre.
    Exocentric { radius: f64, distance: f64 },
    /// Hammer map on a quad facing the viewer.
    FlatMap { width: f64, height: f64, distance: f64 },
    /// Globe seen from inside; the head stands `viewer_offset` × radius from
    /// the centre, which lies straight ahead.
    Egocentric { radius: f64, viewer_offset: f64 },
    /// Hammer map remapped onto a sphere section centred on the head.
    CurvedMap { radius: f64, span_h: f64, span_v: f64 },
}

impl SceneParams {
    pub fn default_for(kind: SceneKind) -> Self {
        match kind {
            SceneKind::Exocentric => SceneParams::Exocentric { radius: 0.4, distance: 1.0 },
            SceneKind::FlatMap => SceneParams::FlatMap { width: 1.0, height: 0.5, distance: 1.0 },
            SceneKind::Egocentric => SceneParams::Egocentric { radius: 8.0, viewer_offset: 0.8 },
            SceneKind::CurvedMap => {
                SceneParams::CurvedMap { radius: 1.0, span_h: CURVED_SPAN_H, span_v: CURVED_SPAN_V }
            }
        }
    }

    pub fn kind(&self) -> SceneKind {
        match self {
            SceneParams::Exocentric { .. } => SceneKind::Exocentric,
            SceneParams::FlatMap { .. } => SceneKind::FlatMap,
            SceneParams::Egocentric { .. } => SceneKind::Egocentric,
            SceneParams::CurvedMap { .. } => SceneKind::CurvedMap,
        }
    }
}

/// Sphere-to-world axis maps. Geographic frame: `+x` at (0°,0°), `+y` at
/// (90°E,0°), `+z` north.
fn outside_axes(v: Vec3) -> Vec3 {
    // (0,0) faces the viewer (+z from the centre), east to the right.
    Vec3::new(v.y, v.z, v.x)
}

fn outside_axes_inv(w: Vec3) -> Vec3 {
    Vec3::new(w.z, w.x, w.y)
}

fn inside_axes(v: Vec3) -> Vec3 {
    // (0,0) on the far wall (-z from the centre), east still to the right,
    // which mirrors the globe as seen from outside.
    Vec3::new(v.y, v.z, -v.x)
}

fn inside_axes_inv(w: Vec3) -> Vec3 {
    Vec3::new(-w.z, w.x, w.y)
}

/// A visualisation placed in the world with its current geographic rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SceneEmbedding {
    pub rotation: SphericalRotation,
    pub params: SceneParams,
}

impl SceneEmbedding {
    pub fn new(kind: SceneKind) -> Self {
        Self { rotation: SphericalRotation::IDENTITY, params: SceneParams::default_for(kind) }
    }

    pub fn with_rotation(mut self, rotation: SphericalRotation) -> Self {
        self.rotation = rotation;
        self
    }

    pub fn kind(&self) -> SceneKind {
        self.params.kind()
    }

    /// Centre of the globe for the globe kinds.
    pub fn sphere_centre(&self) -> Option<WorldPoint> {
        match self.params {
            SceneParams::Exocentric { distance, .. } => Some(WorldPoint::new(0.0, 0.0, -distance)),
            SceneParams::Egocentric { radius, viewer_offset } => {
                Some(WorldPoint::new(0.0, 0.0, -viewer_offset * radius))
            }
            _ => None,
        }
    }

    /// Metres per Hammer plane unit on a `width` × `height` quad. The
    /// ellipse's bounding box is inscribed in the quad.
    pub fn flat_scale(width: f64, height: f64) -> f64 {
        (width / (2.0 * HAMMER_HALF_WIDTH)).min(height / (2.0 * HAMMER_HALF_HEIGHT))
    }

    /// World position of a point already expressed in the rotated frame.
    pub fn embed_view(&self, view: GeoCoord) -> Result<WorldPoint, SceneError> {
        match self.params {
            SceneParams::Exocentric { radius, distance } => {
                let c = Vec3::new(0.0, 0.0, -distance);
                Ok(WorldPoint::from_vec(c + outside_axes(view.to_unit().0) * radius))
            }
            SceneParams::Egocentric { radius, viewer_offset } => {
                let c = Vec3::new(0.0, 0.0, -viewer_offset * radius);
                Ok(WorldPoint::from_vec(c + inside_axes(view.to_unit().0) * radius))
            }
            SceneParams::FlatMap { width, height, distance } => {
                let m = hammer_forward(view);
                let s = Self::flat_scale(width, height);
                Ok(WorldPoint::new(m.x * s, m.y * s, -distance))
            }
            SceneParams::CurvedMap { radius, span_h, span_v } => {
                let (h, v) = curved_remap(hammer_forward(view))?;
                let h = (h * span_h / CURVED_SPAN_H).to_radians();
                let v = (v * span_v / CURVED_SPAN_V).to_radians();
                let (sh, ch) = h.sin_cos();
                let (sv, cv) = v.sin_cos();
                Ok(WorldPoint::new(radius * sh * cv, radius * sv, -radius * ch * cv))
            }
        }
    }

    pub fn embed(&self, g: GeoCoord) -> Result<WorldPoint, SceneError> {
        self.embed_view(self.rotation.rotate(g))
    }

    /// Rotated-frame coordinate of a world point on the surface.
    pub fn locate_view(&self, w: WorldPoint) -> Result<GeoCoord, SceneError> {
        let wv = w.vec();
        match self.params {
            SceneParams::Exocentric { radius, .. } | SceneParams::Egocentric { radius, .. } => {
                let c = self.sphere_centre().map(WorldPoint::vec).unwrap_or(Vec3::new(0.0, 0.0, 0.0));
                let d = wv - c;
                let off = (d.norm() - radius).abs();
                if off > SURFACE_TOLERANCE {
                    return Err(SceneError::OffSurface(off));
                }
                let u = d.normalized();
                let g = if self.kind() == SceneKind::Exocentric { outside_axes_inv(u) } else { inside_axes_inv(u) };
                Ok(GeoCoord::from_unit(UnitVec3(g)))
            }
            SceneParams::FlatMap { width, height, distance } => {
                let off = (w.z + distance).abs();
                if off > SURFACE_TOLERANCE {
                    return Err(SceneError::OffSurface(off));
                }
                let s = Self::flat_scale(width, height);
                hammer_inverse(MapPoint::new(w.x / s, w.y / s)).map_err(|_| SceneError::Unreachable)
            }
            SceneParams::CurvedMap { radius, span_h, span_v } => {
                let n = wv.norm();
                let off = (n - radius).abs();
                if off > SURFACE_TOLERANCE {
                    return Err(SceneError::OffSurface(off));
                }
                let h = w.x.atan2(-w.z).to_degrees() * CURVED_SPAN_H / span_h;
                let v = (w.y / n).clamp(-1.0, 1.0).asin().to_degrees() * CURVED_SPAN_V / span_v;
                let m = curved_unmap(h, v).map_err(|_| SceneError::Unreachable)?;
                hammer_inverse(m).map_err(|_| SceneError::Unreachable)
            }
        }
    }

    /// Geographic coordinate shown at a world point on the surface.
    pub fn locate(&self, w: WorldPoint) -> Result<GeoCoord, SceneError> {
        Ok(self.rotation.inverse_rotate(self.locate_view(w)?))
    }

    /// Rotation under which `grabbed` is shown at `target`, keeping the
    /// current roll. Of the two solutions the one closest to the current
    /// rotation is returned.
    pub fn solve_recenter(&self, grabbed: GeoCoord, target: WorldPoint) -> Result<SphericalRotation, SceneError> {
        let t = self.locate_view(target)?.to_unit().0;
        let gamma = self.rotation.gamma;
        let (sg, cg) = gamma.to_radians().sin_cos();
        // Undo the roll: u = Rx(-γ) t.
        let u = Vec3::new(t.x, t.y * cg + t.z * sg, -t.y * sg + t.z * cg);
        let lon_g = grabbed.lon().to_radians();
        let (slat, clat) = grabbed.lat().to_radians().sin_cos();

        let current = self.rotation;
        let lambdas: Vec<f64> = if clat < 1e-12 {
            if u.y.abs() > 1e-9 {
                return Err(SceneError::Unreachable);
            }
            alloc::vec![current.lambda.to_radians()]
        } else {
            let s = u.y / clat;
            if s.abs() > 1.0 + 1e-12 {
                return Err(SceneError::Unreachable);
            }
            let alpha = s.clamp(-1.0, 1.0).asin();
            alloc::vec![alpha - lon_g, PI - alpha - lon_g]
        };

        let target_xz = u.z.atan2(u.x);
        let solution = lambdas
            .into_iter()
            .map(|lambda| {
                let vx = clat * (lon_g + lambda).cos();
                let phi = target_xz - slat.atan2(vx);
                SphericalRotation::new(wrap_degrees(lambda.to_degrees()), wrap_degrees(phi.to_degrees()), gamma)
            })
            .min_by(|a, b| {
                rotation_gap(a, &current).partial_cmp(&rotation_gap(b, &current)).unwrap_or(core::cmp::Ordering::Equal)
            })
            .ok_or(SceneError::Unreachable)?;
        Ok(solution)
    }

    pub fn horizon_rings(&self) -> Option<HorizonRings> {
        match self.params {
            SceneParams::Egocentric { .. } => {
                Some(HorizonRings::new(self.sphere_centre()?, self.radius(), HorizonRings::DEFAULT_ELEVATIONS))
            }
            _ => None,
        }
    }

    fn radius(&self) -> f64 {
        match self.params {
            SceneParams::Exocentric { radius, .. }
            | SceneParams::Egocentric { radius, .. }
            | SceneParams::CurvedMap { radius, .. } => radius,
            SceneParams::FlatMap { width, .. } => width,
        }
    }
}

fn rotation_gap(a: &SphericalRotation, b: &SphericalRotation) -> f64 {
    wrap_degrees(a.lambda - b.lambda).abs() + wrap_degrees(a.phi - b.phi).abs()
}

pub fn embed(s: &SceneEmbedding, g: GeoCoord) -> Result<WorldPoint, SceneError> {
    s.embed(g)
}

pub fn solve_recenter(
    s: &SceneEmbedding,
    grabbed: GeoCoord,
    target: WorldPoint,
) -> Result<SphericalRotation, SceneError> {
    s.solve_recenter(grabbed, target)
}

/// Two world-fixed circles of constant elevation on the egocentric sphere.
///
/// They depend only on the sphere's placement, never on its rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HorizonRings {
    pub centre: WorldPoint,
    pub sphere_radius: f64,
    /// Elevations above the sphere's equatorial plane, degrees.
    pub elevations: [f64; 2],
}

impl HorizonRings {
    pub const DEFAULT_ELEVATIONS: [f64; 2] = [-30.0, 30.0];

    pub fn new(centre: WorldPoint, sphere_radius: f64, elevations: [f64; 2]) -> Self {
        Self { centre, sphere_radius, elevations }
    }

    /// `(height, radius)` of ring `i` relative to the sphere centre.
    pub fn ring(&self, i: usize) -> (f64, f64) {
        let (s, c) = self.elevations[i].to_radians().sin_cos();
        (self.sphere_radius * s, self.sphere_radius * c)
    }

    pub fn points(&self, i: usize, n: usize) -> Vec<WorldPoint> {
        let (h, r) = self.ring(i);
        (0..n)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / n as f64;
                WorldPoint::new(self.centre.x + r * a.sin(), self.centre.y + h, self.centre.z - r * a.cos())
            })
            .collect()
    }
}

/// Linear blend between a flat map and an exocentric globe sharing one
/// rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Morph {
    pub flat: SceneEmbedding,
    pub globe: SceneEmbedding,
}

impl Morph {
    pub fn new(rotation: SphericalRotation) -> Self {
        Self {
            flat: SceneEmbedding::new(SceneKind::FlatMap).with_rotation(rotation),
            globe: SceneEmbedding::new(SceneKind::Exocentric).with_rotation(rotation),
        }
    }

    pub fn at(&self, t: f64, g: GeoCoord) -> Result<WorldPoint, SceneError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(SceneError::InvalidFraction(t));
        }
        let a = self.flat.embed(g)?;
        let b = self.globe.embed(g)?;
        Ok(a.lerp(&b, t))
    }
}

pub fn morph(t: f64, g: GeoCoord, rotation: SphericalRotation) -> Result<WorldPoint, SceneError> {
    Morph::new(rotation).at(t, g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum GraticuleLineKind {
    Meridian,
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GraticuleLine {
    pub kind: GraticuleLineKind,
    /// Longitude of a meridian or latitude of a parallel, degrees.
    pub value: f64,
    /// Set on the equator, which is drawn heavier.
    pub emphasized: bool,
    pub path: GeoPath,
}

/// Vertex spacing along graticule lines, degrees.
pub const GRATICULE_PRECISION: f64 = 1.0;

/// Meridians and parallels every `spacing` degrees. Meridians run pole to
/// pole; parallels are loops from -180 back to 180 at every multiple of
/// `spacing` strictly between the poles.
pub fn graticule(spacing: f64) -> Result<Vec<GraticuleLine>, SceneError> {
    let count = 360.0 / spacing;
    if spacing.is_nan() || spacing <= 0.0 || (count - count.round()).abs() > 1e-9 {
        return Err(SceneError::InvalidSpacing(spacing));
    }
    let meridians = count.round() as usize;
    let steps = (180.0 / GRATICULE_PRECISION).round() as i32;
    let mut out = Vec::new();
    for i in 0..meridians {
        let lon = -180.0 + spacing * i as f64;
        let verts = (0..=steps)
            .map(|k| GeoCoord::wrapped(lon, -90.0 + f64::from(k) * GRATICULE_PRECISION))
            .map(|g| if lon == -180.0 && g.lat().abs() < 90.0 { fix_west(g) } else { g })
            .collect();
        out.push(GraticuleLine {
            kind: GraticuleLineKind::Meridian,
            value: lon,
            emphasized: false,
            path: GeoPath::line(verts),
        });
    }
    let max_k = (90.0 / spacing).ceil() as i32 - 1;
    let lon_steps = (360.0 / GRATICULE_PRECISION).round() as i32;
    for k in -max_k..=max_k {
        let lat = f64::from(k) * spacing;
        let verts = (0..=lon_steps)
            .map(|j| -180.0 + f64::from(j) * GRATICULE_PRECISION)
            .map(|lon| GeoCoord::new(lon, lat).unwrap_or(GeoCoord::wrapped(lon, lat)))
            .collect();
        out.push(GraticuleLine {
            kind: GraticuleLineKind::Parallel,
            value: lat,
            emphasized: k == 0,
            path: GeoPath::line(verts),
        });
    }
    Ok(out)
}

fn fix_west(g: GeoCoord) -> GeoCoord {
    GeoCoord::new(-180.0, g.lat()).unwrap_or(g)
}

/// Boundary of the projected world (the ±180° meridians of the rotated
/// frame), as a closed loop of rotated-frame coordinates.
pub fn map_outline(step: f64) -> Vec<GeoCoord> {
    let n = (180.0 / step).ceil() as usize;
    let mut out = Vec::with_capacity(2 * n + 2);
    for k in 0..=n {
        let lat = -90.0 + 180.0 * k as f64 / n as f64;
        out.push(GeoCoord::new(180.0, lat).unwrap_or(GeoCoord::wrapped(0.0, lat)));
    }
    for k in 1..n {
        let lat = 90.0 - 180.0 * k as f64 / n as f64;
        out.push(GeoCoord::new(-180.0, lat).unwrap_or(GeoCoord::wrapped(0.0, lat)));
    }
    out
}

/// Unit direction from the head to a world point; `None` at the origin.
pub fn view_direction(w: WorldPoint) -> Option<(f64, f64)> {
    let n = w.vec().norm();
    (n > 0.0).then(|| (w.x.atan2(-w.z).to_degrees(), (w.y / n).clamp(-1.0, 1.0).asin().to_degrees()))
}

/// Angle subtended at the head, degrees, by a horizontal span.
pub fn subtended_angle(a: WorldPoint, b: WorldPoint) -> f64 {
    let (va, vb) = (a.vec(), b.vec());
    va.cross(vb).norm().atan2(va.dot(vb)).to_degrees()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::sphere::uniform_sphere_sample;
    use rand::Rng;

    fn g(lon: f64, lat: f64) -> GeoCoord {
        GeoCoord::new(lon, lat).unwrap()
    }

    fn close(a: WorldPoint, b: WorldPoint, tol: f64) -> bool {
        a.distance(&b) <= tol
    }

    #[test]
    fn embed_examples() {
        let o = g(0.0, 0.0);
        let exo = SceneEmbedding::new(SceneKind::Exocentric).embed(o).unwrap();
        assert!(close(exo, WorldPoint::new(0.0, 0.0, -0.6), 1e-12));
        let flat = SceneEmbedding::new(SceneKind::FlatMap).embed(o).unwrap();
        assert_eq!(flat, WorldPoint::new(0.0, 0.0, -1.0));
        let curved = SceneEmbedding::new(SceneKind::CurvedMap).embed(o).unwrap();
        assert!(close(curved, WorldPoint::new(0.0, 0.0, -1.0), 1e-12));
        let ego = SceneEmbedding::new(SceneKind::Egocentric).embed(o).unwrap();
        assert!(close(ego, WorldPoint::new(0.0, 0.0, -14.4), 1e-12));
    }

    #[test]
    fn orientation_is_readable() {
        for kind in SceneKind::ALL {
            let s = SceneEmbedding::new(kind);
            let east = s.embed(g(20.0, 0.0)).unwrap();
            let north = s.embed(g(0.0, 20.0)).unwrap();
            assert!(east.x > 0.0, "{kind:?} east should be to the right");
            assert!(north.y > 0.0, "{kind:?} north should be up");
        }
    }

    #[test]
    fn flat_quad_is_inscribed() {
        let s = SceneEmbedding::new(SceneKind::FlatMap);
        let e = s.embed(g(180.0, 0.0)).unwrap();
        let n = s.embed(g(0.0, 90.0)).unwrap();
        assert!((e.x - 0.5).abs() < 1e-12);
        assert!((n.y - 0.25).abs() < 1e-12);
    }

    #[test]
    fn curved_span_matches_angles() {
        let s = SceneEmbedding::new(SceneKind::CurvedMap);
        let e = s.embed(g(180.0, 0.0)).unwrap();
        let w = s.embed(g(-180.0, 0.0)).unwrap();
        assert!((subtended_angle(e, w) - 108.0).abs() < 1e-9);
        let n = s.embed(g(0.0, 90.0)).unwrap();
        let so = s.embed(g(0.0, -90.0)).unwrap();
        assert!((subtended_angle(n, so) - 54.0).abs() < 1e-9);
    }

    #[test]
    fn locate_inverts_embed() {
        let mut rng = rng::seeded(5);
        for kind in SceneKind::ALL {
            for _ in 0..200 {
                let r = SphericalRotation::new(
                    rng.random_range(-180.0..180.0),
                    rng.random_range(-90.0..90.0),
                    rng.random_range(-180.0..180.0),
                );
                let s = SceneEmbedding::new(kind).with_rotation(r);
                let p = uniform_sphere_sample(&mut rng);
                let w = s.embed(p).unwrap();
                let back = s.embed(s.locate(w).unwrap()).unwrap();
                assert!(close(w, back, 1e-9), "{kind:?}");
            }
        }
    }

    #[test]
    fn off_surface_points_are_rejected() {
        let s = SceneEmbedding::new(SceneKind::FlatMap);
        assert!(matches!(s.locate(WorldPoint::new(0.0, 0.0, -1.1)), Err(SceneError::OffSurface(_))));
        assert_eq!(s.locate(WorldPoint::new(0.49, 0.24, -1.0)), Err(SceneError::Unreachable));
    }

    #[test]
    fn recenter_fixed_point() {
        let r = SphericalRotation::new(30.0, -20.0, 10.0);
        for kind in SceneKind::ALL {
            let s = SceneEmbedding::new(kind).with_rotation(r);
            let p = g(25.0, 15.0);
            let w = s.embed(p).unwrap();
            let r2 = s.solve_recenter(p, w).unwrap();
            assert!((r2.lambda - r.lambda).abs() < 1e-9, "{kind:?} {r2:?}");
            assert!((r2.phi - r.phi).abs() < 1e-9);
            assert_eq!(r2.gamma, r.gamma);
        }
    }

    #[test]
    fn recenter_flat_drag_to_east() {
        let s = SceneEmbedding::new(SceneKind::FlatMap);
        let target = s.embed(g(90.0, 0.0)).unwrap();
        let r = s.solve_recenter(g(0.0, 0.0), target).unwrap();
        assert!((r.lambda - 90.0).abs() < 1e-9 && r.phi.abs() < 1e-9);
        let moved = s.with_rotation(r).embed(g(0.0, 0.0)).unwrap();
        assert!(close(moved, target, 1e-6));
    }

    #[test]
    fn recenter_exocentric_to_front() {
        let mut rng = rng::seeded(8);
        let s = SceneEmbedding::new(SceneKind::Exocentric);
        let front = WorldPoint::new(0.0, 0.0, -0.6);
        for _ in 0..100 {
            let p = uniform_sphere_sample(&mut rng);
            let r = s.solve_recenter(p, front).unwrap();
            assert!(close(s.with_rotation(r).embed(p).unwrap(), front, 1e-6));
        }
    }

    #[test]
    fn recenter_unreachable_with_fixed_roll() {
        // A pole can only travel along the central meridian when roll is 0.
        let s = SceneEmbedding::new(SceneKind::Exocentric);
        let target = s.embed(g(40.0, 10.0)).unwrap();
        assert_eq!(s.solve_recenter(g(0.0, 90.0), target), Err(SceneError::Unreachable));
    }

    #[test]
    fn morph_endpoints_and_midpoint() {
        let r = SphericalRotation::new(15.0, 5.0, 0.0);
        let p = g(-40.0, 22.0);
        let m = Morph::new(r);
        assert_eq!(m.at(0.0, p).unwrap(), m.flat.embed(p).unwrap());
        assert_eq!(m.at(1.0, p).unwrap(), m.globe.embed(p).unwrap());
        let (a, b, mid) = (m.flat.embed(p).unwrap(), m.globe.embed(p).unwrap(), m.at(0.5, p).unwrap());
        assert_eq!(mid.x, (a.x + b.x) / 2.0);
        assert_eq!(mid.y, (a.y + b.y) / 2.0);
        assert_eq!(mid.z, (a.z + b.z) / 2.0);
        assert_eq!(morph(1.5, p, r), Err(SceneError::InvalidFraction(1.5)));
    }

    #[test]
    fn graticule_counts() {
        let count = |lines: &[GraticuleLine], k| lines.iter().filter(|l| l.kind == k).count();
        let g10 = graticule(10.0).unwrap();
        assert_eq!(count(&g10, GraticuleLineKind::Meridian), 36);
        assert_eq!(count(&g10, GraticuleLineKind::Parallel), 17);
        let eq: Vec<_> = g10.iter().filter(|l| l.emphasized).collect();
        assert_eq!(eq.len(), 1);
        assert_eq!(eq[0].value, 0.0);
        let g30 = graticule(30.0).unwrap();
        assert_eq!(count(&g30, GraticuleLineKind::Meridian), 12);
        assert_eq!(count(&g30, GraticuleLineKind::Parallel), 5);
        assert_eq!(graticule(7.0), Err(SceneError::InvalidSpacing(7.0)));
    }

    #[test]
    fn horizon_rings_only_on_egocentric() {
        assert!(SceneEmbedding::new(SceneKind::Exocentric).horizon_rings().is_none());
        let rings = SceneEmbedding::new(SceneKind::Egocentric).horizon_rings().unwrap();
        let (h, r) = rings.ring(1);
        assert!((h - 4.0).abs() < 1e-12);
        assert!((r - 8.0 * 30f64.to_radians().cos()).abs() < 1e-12);
        for p in rings.points(0, 16) {
            let c = rings.centre;
            assert!((p.distance(&c) - 8.0).abs() < 1e-12);
        }
    }
}
