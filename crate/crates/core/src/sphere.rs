//! Spherical geometry on the unit sphere.
//!
//! Positions are stored as unit 3-vectors internally; degrees appear only at
//! the API boundary. The Cartesian frame is Earth-centred: `+x` points at
//! (0°, 0°), `+y` at (90°E, 0°) and `+z` at the north pole.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use rand::Rng;

use crate::vec3::{Mat3, Vec3};

/// Tolerance below which `|a × b|` is treated as zero.
const PARALLEL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid coordinate (lon {lon}, lat {lat})")]
    InvalidCoord { lon: f64, lat: f64 },
    #[error("bearing is undefined between coincident or antipodal points")]
    AntipodalOrCoincident,
    #[error("path direction is undefined")]
    DegeneratePath,
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(&'static str),
}

/// A longitude/latitude position in degrees.
///
/// Longitude lies in `[-180, 180]`, latitude in `[-90, 90]`. The longitude
/// of either pole is stored as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "RawGeoCoord", into = "RawGeoCoord")
)]
pub struct GeoCoord {
    lon: f64,
    lat: f64,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct RawGeoCoord {
    lon: f64,
    lat: f64,
}

#[cfg(feature = "serde")]
impl TryFrom<RawGeoCoord> for GeoCoord {
    type Error = GeometryError;
    fn try_from(r: RawGeoCoord) -> Result<Self, Self::Error> {
        GeoCoord::new(r.lon, r.lat)
    }
}

#[cfg(feature = "serde")]
impl From<GeoCoord> for RawGeoCoord {
    fn from(g: GeoCoord) -> Self {
        RawGeoCoord { lon: g.lon, lat: g.lat }
    }
}

impl GeoCoord {
    pub fn new(lon: f64, lat: f64) -> Result<Self, GeometryError> {
        if !lon.is_finite() || !lat.is_finite() || lon.abs() > 180.0 || lat.abs() > 90.0 {
            return Err(GeometryError::InvalidCoord { lon, lat });
        }
        let lon = if lat.abs() == 90.0 { 0.0 } else { lon };
        Ok(Self { lon, lat })
    }

    /// Builds a coordinate, wrapping an out-of-range longitude into
    /// `(-180, 180]` and clamping latitude.
    pub fn wrapped(lon: f64, lat: f64) -> Self {
        let lat = lat.clamp(-90.0, 90.0);
        let lon = if lat.abs() == 90.0 {
            0.0
        } else if (-180.0..=180.0).contains(&lon) {
            lon
        } else {
            wrap_degrees(lon)
        };
        Self { lon, lat }
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn to_unit(self) -> UnitVec3 {
        let (sl, cl) = self.lon.to_radians().sin_cos();
        let (sp, cp) = self.lat.to_radians().sin_cos();
        UnitVec3(Vec3::new(cp * cl, cp * sl, sp))
    }

    pub fn from_unit(v: UnitVec3) -> Self {
        let v = v.0;
        let lat = v.z.atan2((v.x * v.x + v.y * v.y).sqrt()).to_degrees();
        let lon = if lat.abs() == 90.0 { 0.0 } else { v.y.atan2(v.x).to_degrees() };
        Self { lon, lat }
    }
}

pub(crate) fn rem_euclid(a: f64, b: f64) -> f64 {
    let r = a % b;
    if r < 0.0 {
        r + b
    } else {
        r
    }
}

/// Wraps an angle in degrees into `(-180, 180]`.
pub fn wrap_degrees(a: f64) -> f64 {
    let mut w = a % 360.0;
    if w > 180.0 {
        w -= 360.0;
    } else if w <= -180.0 {
        w += 360.0;
    }
    w
}

/// A point on the unit sphere in Earth-centred Cartesian form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVec3(pub(crate) Vec3);

impl UnitVec3 {
    /// Normalizes `(x, y, z)`; `None` for a zero or non-finite vector.
    pub fn new(x: f64, y: f64, z: f64) -> Option<Self> {
        let v = Vec3::new(x, y, z);
        let n = v.norm();
        (n.is_finite() && n > 0.0).then(|| Self(v * (1.0 / n)))
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }
    pub fn y(&self) -> f64 {
        self.0.y
    }
    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn dot(&self, o: &UnitVec3) -> f64 {
        self.0.dot(o.0)
    }

    /// Angle to `o` in radians, stable near 0 and π.
    pub fn angle_to(&self, o: &UnitVec3) -> f64 {
        self.0.cross(o.0).norm().atan2(self.0.dot(o.0))
    }
}

pub fn great_circle_distance(a: GeoCoord, b: GeoCoord) -> f64 {
    a.to_unit().angle_to(&b.to_unit()).to_degrees()
}

/// Local north and east unit vectors at `g`.
pub(crate) fn local_frame(g: GeoCoord) -> (Vec3, Vec3) {
    let (sl, cl) = g.lon.to_radians().sin_cos();
    let (sp, cp) = g.lat.to_radians().sin_cos();
    (Vec3::new(-sp * cl, -sp * sl, cp), Vec3::new(-sl, cl, 0.0))
}

/// Azimuth of the minor arc from `a` to `b`, clockwise from north in `[0, 360)`.
pub fn initial_bearing(a: GeoCoord, b: GeoCoord) -> Result<f64, GeometryError> {
    let (ua, ub) = (a.to_unit().0, b.to_unit().0);
    if ua.cross(ub).norm() < PARALLEL_EPS {
        return Err(GeometryError::AntipodalOrCoincident);
    }
    let (north, east) = local_frame(a);
    let az = ub.dot(east).atan2(ub.dot(north)).to_degrees();
    Ok(normalize_bearing(az))
}

fn normalize_bearing(az: f64) -> f64 {
    let b = rem_euclid(az, 360.0);
    if b >= 360.0 {
        0.0
    } else {
        b
    }
}

/// Unit tangent at `start` pointing along `bearing` degrees.
pub(crate) fn heading(start: GeoCoord, bearing: f64) -> Vec3 {
    let (north, east) = local_frame(start);
    let (sb, cb) = bearing.to_radians().sin_cos();
    north * cb + east * sb
}

pub fn destination(start: GeoCoord, bearing: f64, dist: f64) -> GeoCoord {
    let (sd, cd) = dist.to_radians().sin_cos();
    let p = start.to_unit().0 * cd + heading(start, bearing) * sd;
    GeoCoord::from_unit(UnitVec3(p.normalized()))
}

/// Signed angular distance of `target` from the great circle leaving
/// `path_start` along `path_bearing`; positive to the left of travel.
pub fn cross_track_distance(path_start: GeoCoord, path_bearing: f64, target: GeoCoord) -> Result<f64, GeometryError> {
    if !path_bearing.is_finite() {
        return Err(GeometryError::DegeneratePath);
    }
    let normal = path_start.to_unit().0.cross(heading(path_start, path_bearing));
    let n = normal.norm();
    if n < PARALLEL_EPS {
        return Err(GeometryError::DegeneratePath);
    }
    let normal = normal * (1.0 / n);
    let t = target.to_unit().0;
    let off = t.dot(normal);
    let in_plane = (t - normal * off).norm();
    Ok(off.atan2(in_plane).to_degrees())
}

/// Along-track angular distance from `path_start` to the foot of `target` on
/// the path, in `(-180, 180]`.
pub fn along_track_distance(path_start: GeoCoord, path_bearing: f64, target: GeoCoord) -> Result<f64, GeometryError> {
    if !path_bearing.is_finite() {
        return Err(GeometryError::DegeneratePath);
    }
    let a = path_start.to_unit().0;
    let h = heading(path_start, path_bearing);
    let t = target.to_unit().0;
    Ok(t.dot(h).atan2(t.dot(a)).to_degrees())
}

/// Great-circle midpoint of the minor arc between `a` and `b`.
pub fn midpoint(a: GeoCoord, b: GeoCoord) -> Result<GeoCoord, GeometryError> {
    let s = a.to_unit().0 + b.to_unit().0;
    if s.norm() < PARALLEL_EPS {
        return Err(GeometryError::AntipodalOrCoincident);
    }
    Ok(GeoCoord::from_unit(UnitVec3(s.normalized())))
}

/// Three-angle rotation of the geographic frame, angles in degrees.
///
/// Applied in the order λ (about the polar axis, added to longitude), then φ
/// (about the rotated y-axis, moving points along the central meridian),
/// then γ (roll about the view axis through (0°, 0°)). Under this convention
/// `(λ, φ, γ)` reproduces the common web-mapping rotation: a positive φ
/// brings the south pole towards the map centre, so `(0, -90, 0)` centres
/// the north pole.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SphericalRotation {
    pub lambda: f64,
    pub phi: f64,
    pub gamma: f64,
}

impl SphericalRotation {
    pub const IDENTITY: Self = Self { lambda: 0.0, phi: 0.0, gamma: 0.0 };

    pub const fn new(lambda: f64, phi: f64, gamma: f64) -> Self {
        Self { lambda, phi, gamma }
    }

    pub(crate) fn matrix(&self) -> Mat3 {
        let (sl, cl) = self.lambda.to_radians().sin_cos();
        let (sp, cp) = self.phi.to_radians().sin_cos();
        let (sg, cg) = self.gamma.to_radians().sin_cos();
        let about_pole = Mat3([[cl, -sl, 0.0], [sl, cl, 0.0], [0.0, 0.0, 1.0]]);
        let tilt = Mat3([[cp, 0.0, -sp], [0.0, 1.0, 0.0], [sp, 0.0, cp]]);
        let roll = Mat3([[1.0, 0.0, 0.0], [0.0, cg, -sg], [0.0, sg, cg]]);
        roll.mul(&tilt).mul(&about_pole)
    }

    fn is_longitude_shift(&self) -> bool {
        self.phi == 0.0 && self.gamma == 0.0
    }

    pub fn rotate_unit(&self, v: UnitVec3) -> UnitVec3 {
        UnitVec3(self.matrix().mul_vec(v.0))
    }

    pub fn inverse_rotate_unit(&self, v: UnitVec3) -> UnitVec3 {
        UnitVec3(self.matrix().transpose().mul_vec(v.0))
    }

    pub fn rotate(&self, g: GeoCoord) -> GeoCoord {
        if self.is_longitude_shift() {
            return GeoCoord::wrapped(g.lon + self.lambda, g.lat);
        }
        GeoCoord::from_unit(self.rotate_unit(g.to_unit()))
    }

    pub fn inverse_rotate(&self, g: GeoCoord) -> GeoCoord {
        if self.is_longitude_shift() {
            return GeoCoord::wrapped(g.lon - self.lambda, g.lat);
        }
        GeoCoord::from_unit(self.inverse_rotate_unit(g.to_unit()))
    }

    /// The same rotation with every angle wrapped into `(-180, 180]`.
    pub fn normalized(&self) -> Self {
        Self::new(wrap_degrees(self.lambda), wrap_degrees(self.phi), wrap_degrees(self.gamma))
    }
}

pub fn rotate(r: &SphericalRotation, g: GeoCoord) -> GeoCoord {
    r.rotate(g)
}

pub fn inverse_rotate(r: &SphericalRotation, g: GeoCoord) -> GeoCoord {
    r.inverse_rotate(g)
}

/// Signed spherical excess of the triangle `a, b, c` (positive when
/// counter-clockwise seen from outside).
fn signed_triangle_excess(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    // (b - a) × (c - a) · a equals a · (b × c) but loses less precision for
    // small triangles.
    let triple = (b - a).cross(c - a).dot(a);
    let denom = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * triple.atan2(denom)
}

/// A simple spherical polygon with minor-arc edges.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "Vec<GeoCoord>", into = "Vec<GeoCoord>")
)]
pub struct SphericalPolygon {
    vertices: Vec<GeoCoord>,
}

impl TryFrom<Vec<GeoCoord>> for SphericalPolygon {
    type Error = GeometryError;
    fn try_from(v: Vec<GeoCoord>) -> Result<Self, Self::Error> {
        SphericalPolygon::new(v)
    }
}

impl From<SphericalPolygon> for Vec<GeoCoord> {
    fn from(p: SphericalPolygon) -> Self {
        p.vertices
    }
}

impl SphericalPolygon {
    /// Validates vertex count, non-coincident / non-antipodal neighbours and
    /// simplicity. The closing vertex must not be repeated.
    pub fn new(vertices: Vec<GeoCoord>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::DegeneratePolygon("fewer than three vertices"));
        }
        let units: Vec<Vec3> = vertices.iter().map(|g| g.to_unit().0).collect();
        let n = units.len();
        for i in 0..n {
            let (a, b) = (units[i], units[(i + 1) % n]);
            if a.cross(b).norm() < PARALLEL_EPS {
                return Err(GeometryError::DegeneratePolygon("coincident or antipodal consecutive vertices"));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if arcs_intersect(units[i], units[(i + 1) % n], units[j], units[(j + 1) % n]) {
                    return Err(GeometryError::DegeneratePolygon("self-intersecting"));
                }
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[GeoCoord] {
        &self.vertices
    }

    /// Area of the region to the left of the boundary, in `[0, 4π)`.
    pub fn enclosed_area(&self) -> Result<f64, GeometryError> {
        let units: Vec<Vec3> = self.vertices.iter().map(|g| g.to_unit().0).collect();
        let v0 = units[0];
        let mut sum = 0.0;
        for w in units[1..].windows(2) {
            if v0.cross(w[0]).norm() < PARALLEL_EPS && v0.dot(w[0]) < 0.0 {
                return Err(GeometryError::DegeneratePolygon("fan vertex antipodal to another vertex"));
            }
            sum += signed_triangle_excess(v0, w[0], w[1]);
        }
        let area = rem_euclid(sum, 4.0 * PI);
        if area < 1e-15 || 4.0 * PI - area < 1e-15 {
            return Err(GeometryError::DegeneratePolygon("zero area"));
        }
        Ok(area)
    }

    /// Orientation-normalized area in steradians: the smaller of the two
    /// regions bounded by the polygon.
    pub fn area(&self) -> Result<f64, GeometryError> {
        let a = self.enclosed_area()?;
        Ok(a.min(4.0 * PI - a))
    }
}

pub fn polygon_area(p: &SphericalPolygon) -> Result<f64, GeometryError> {
    p.area()
}

/// Whether `p` lies on the minor arc `a`–`b` with great-circle normal `n`.
fn on_arc(p: Vec3, a: Vec3, b: Vec3, n: Vec3) -> bool {
    a.cross(p).dot(n) >= 0.0 && p.cross(b).dot(n) >= 0.0
}

fn arcs_intersect(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> bool {
    let n1 = a.cross(b);
    let n2 = c.cross(d);
    let line = n1.cross(n2);
    if line.norm() < PARALLEL_EPS {
        // Same great circle: overlap if any endpoint lies on the other arc.
        return on_arc(c, a, b, n1) || on_arc(d, a, b, n1) || on_arc(a, c, d, n2);
    }
    let p = line.normalized();
    [p, -p].into_iter().any(|q| on_arc(q, a, b, n1) && on_arc(q, c, d, n2))
}

/// Area-uniform random point: longitude uniform, sin(latitude) uniform.
pub fn uniform_sphere_sample<R: Rng + ?Sized>(rng: &mut R) -> GeoCoord {
    let lon = rng.random_range(-180.0..180.0);
    let z: f64 = rng.random_range(-1.0..=1.0);
    GeoCoord::wrapped(lon, z.asin().to_degrees())
}
