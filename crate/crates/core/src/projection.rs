//! Hammer equal-area projection, Tissot indicatrices and preparation of
//! rotated geometry (resampling and antimeridian cutting).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};
#[allow(unused_imports)]
use num_traits::Float;

use crate::sphere::{local_frame, rem_euclid, GeoCoord, SphericalRotation, UnitVec3};
use crate::vec3::Vec3;

/// Half-width of the Hammer ellipse, `2√2`.
pub const HAMMER_HALF_WIDTH: f64 = 2.0 * SQRT_2;
/// Half-height of the Hammer ellipse, `√2`.
pub const HAMMER_HALF_HEIGHT: f64 = SQRT_2;
/// Allowed spill outside the Hammer ellipse, in plane units.
pub const ELLIPSE_TOLERANCE: f64 = 1e-9;

/// Horizontal angle covered by the curved map, degrees.
pub const CURVED_SPAN_H: f64 = 108.0;
/// Vertical angle covered by the curved map, degrees.
pub const CURVED_SPAN_V: f64 = 54.0;

/// Default finite-difference step for [`tissot`], degrees.
pub const TISSOT_STEP: f64 = 1e-4;

/// Points within this many radians of the rotated antimeridian plane count
/// as lying on it.
const SEAM_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum ProjectionError {
    #[error("point ({x}, {y}) lies outside the Hammer ellipse")]
    OutsideProjection { x: f64, y: f64 },
    #[error("Tissot indicatrix is not evaluated within 1 degree of a pole (lat {0})")]
    NearPole(f64),
}

/// A point in the Hammer plane.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MapPoint {
    pub x: f64,
    pub y: f64,
}

impl MapPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// `(x/2√2)² + (y/√2)²`; 1 on the boundary.
    pub fn ellipse_radius_sq(&self) -> f64 {
        self.x * self.x / 8.0 + self.y * self.y / 2.0
    }

    pub fn is_inside(&self) -> bool {
        self.ellipse_radius_sq() <= 1.0 + ELLIPSE_TOLERANCE
    }

    fn check(self) -> Result<Self, ProjectionError> {
        if self.x.is_finite() && self.y.is_finite() && self.is_inside() {
            Ok(self)
        } else {
            Err(ProjectionError::OutsideProjection { x: self.x, y: self.y })
        }
    }
}

/// Hammer formula on raw radians; continuous for |λ| slightly beyond π.
fn hammer_raw(lambda: f64, phi: f64) -> MapPoint {
    let (sh, ch) = (lambda / 2.0).sin_cos();
    let (sp, cp) = phi.sin_cos();
    let d = (1.0 + cp * ch).sqrt();
    MapPoint::new(2.0 * SQRT_2 * cp * sh / d, SQRT_2 * sp / d)
}

pub fn hammer_forward(g: GeoCoord) -> MapPoint {
    hammer_raw(g.lon().to_radians(), g.lat().to_radians())
}

pub fn hammer_inverse(m: MapPoint) -> Result<GeoCoord, ProjectionError> {
    let m = m.check()?;
    // z² ≥ 1/2 inside the ellipse; clamp the permitted numerical spill.
    let z = (1.0 - m.x * m.x / 16.0 - m.y * m.y / 4.0).max(0.5).sqrt();
    let lon = 2.0 * (z * m.x).atan2(2.0 * (2.0 * z * z - 1.0));
    let lat = (z * m.y).clamp(-1.0, 1.0).asin();
    Ok(GeoCoord::wrapped(lon.to_degrees().clamp(-180.0, 180.0), lat.to_degrees()))
}

/// Pulls a point that spilled numerically outside the Hammer ellipse back
/// onto its boundary.
pub fn clip_to_ellipse(m: MapPoint) -> MapPoint {
    let r = m.ellipse_radius_sq();
    if r <= 1.0 {
        m
    } else {
        let s = (1.0 - f64::EPSILON) / r.sqrt();
        MapPoint::new(m.x * s, m.y * s)
    }
}

/// Linear remap of the Hammer plane onto horizontal/vertical view angles of
/// the curved map, degrees.
pub fn curved_remap(m: MapPoint) -> Result<(f64, f64), ProjectionError> {
    let m = m.check()?;
    Ok((m.x / HAMMER_HALF_WIDTH * (CURVED_SPAN_H / 2.0), m.y / HAMMER_HALF_HEIGHT * (CURVED_SPAN_V / 2.0)))
}

/// Inverse of [`curved_remap`].
pub fn curved_unmap(azimuth_h: f64, azimuth_v: f64) -> Result<MapPoint, ProjectionError> {
    MapPoint::new(
        azimuth_h / (CURVED_SPAN_H / 2.0) * HAMMER_HALF_WIDTH,
        azimuth_v / (CURVED_SPAN_V / 2.0) * HAMMER_HALF_HEIGHT,
    )
    .check()
}

/// Local distortion ellipse of the Hammer projection.
///
/// `semi_major` and `semi_minor` are the local scale factors; `orientation`
/// is the angle of the major axis in the map plane, degrees counter-clockwise
/// from `+x`, in `(-90, 90]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TissotEllipse {
    pub center: GeoCoord,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub orientation: f64,
}

impl TissotEllipse {
    pub fn area_scale(&self) -> f64 {
        self.semi_major * self.semi_minor
    }

    /// Maximum angular deformation, degrees.
    pub fn angular_distortion(&self) -> f64 {
        2.0 * ((self.semi_major - self.semi_minor) / (self.semi_major + self.semi_minor)).asin().to_degrees()
    }
}

/// Singular values and major-axis angle of the 2x2 Jacobian whose columns are
/// the image derivatives along two orthonormal tangent directions.
fn indicatrix(center: GeoCoord, d1: MapPoint, d2: MapPoint) -> TissotEllipse {
    let (a, b, c, d) = (d1.x, d2.x, d1.y, d2.y);
    let e = (a + d) / 2.0;
    let f = (a - d) / 2.0;
    let g = (c + b) / 2.0;
    let h = (c - b) / 2.0;
    let q = (e * e + h * h).sqrt();
    let r = (f * f + g * g).sqrt();
    // Major axis of J Jᵀ.
    let p = a * a + b * b;
    let s = c * c + d * d;
    let off = a * c + b * d;
    let mut orientation = (0.5 * (2.0 * off).atan2(p - s)).to_degrees();
    if orientation <= -90.0 {
        orientation += 180.0;
    }
    TissotEllipse { center, semi_major: q + r, semi_minor: (q - r).abs(), orientation }
}

/// Tissot indicatrix of the Hammer projection at `g`, from a central
/// finite-difference Jacobian with step `step` degrees.
pub fn tissot(g: GeoCoord, step: f64) -> Result<TissotEllipse, ProjectionError> {
    if g.lat().abs() >= 89.0 {
        return Err(ProjectionError::NearPole(g.lat()));
    }
    let lam = g.lon().to_radians();
    let phi = g.lat().to_radians();
    let h = step.to_radians();
    let dl = {
        let p = hammer_raw(lam + h, phi);
        let m = hammer_raw(lam - h, phi);
        let k = 2.0 * h * phi.cos();
        MapPoint::new((p.x - m.x) / k, (p.y - m.y) / k)
    };
    let dp = {
        let p = hammer_raw(lam, phi + h);
        let m = hammer_raw(lam, phi - h);
        MapPoint::new((p.x - m.x) / (2.0 * h), (p.y - m.y) / (2.0 * h))
    };
    Ok(indicatrix(g, dl, dp))
}

/// Tissot indicatrix of the rotated Hammer map `g ↦ hammer(rotate(r, g))`.
///
/// Derivatives are taken along the local east/north directions at `g` in
/// the rotated frame (any orthonormal tangent pair at the poles), so the
/// geographic poles are handled. Returns `None` when `g` maps within `margin`
/// degrees of the rotated poles or of the cut meridian, where the map is not
/// differentiable.
pub fn tissot_rotated(r: &SphericalRotation, g: GeoCoord, step: f64, margin: f64) -> Option<TissotEllipse> {
    let p = r.rotate_unit(g.to_unit());
    let view = GeoCoord::from_unit(p);
    if view.lat().abs() > 90.0 - margin || view.lon().abs() > 180.0 - margin {
        return None;
    }
    let (north, east) = local_frame(view);
    let center_lon = view.lon().to_radians();
    let h = step.to_radians();
    let eval = |dir: Vec3, s: f64| -> MapPoint {
        let q = (p.0 * s.cos() + dir * s.sin()).normalized();
        let lat = q.z.atan2((q.x * q.x + q.y * q.y).sqrt());
        let mut lon = q.y.atan2(q.x);
        if lon - center_lon > PI {
            lon -= 2.0 * PI;
        } else if lon - center_lon < -PI {
            lon += 2.0 * PI;
        }
        hammer_raw(lon, lat)
    };
    let diff = |dir: Vec3| {
        let (a, b) = (eval(dir, h), eval(dir, -h));
        MapPoint::new((a.x - b.x) / (2.0 * h), (a.y - b.y) / (2.0 * h))
    };
    let mut ellipse = indicatrix(g, diff(east), diff(north));
    ellipse.center = g;
    Some(ellipse)
}

/// One or more polylines on the sphere. When `closed` is set every segment
/// is a ring whose last vertex connects back to its first (the first vertex
/// is not repeated).
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeoPath {
    pub segments: Vec<Vec<GeoCoord>>,
    pub closed: bool,
}

impl GeoPath {
    pub fn line(vertices: Vec<GeoCoord>) -> Self {
        Self { segments: vec![vertices], closed: false }
    }

    pub fn ring(vertices: Vec<GeoCoord>) -> Self {
        Self { segments: vec![vertices], closed: true }
    }

    pub fn vertex_count(&self) -> usize {
        self.segments.iter().map(Vec::len).sum()
    }

    /// Consecutive vertex pairs, including ring closures.
    pub fn edges(&self) -> impl Iterator<Item = (GeoCoord, GeoCoord)> + '_ {
        self.segments.iter().flat_map(move |s| {
            let n = s.len();
            let m = if self.closed && n > 1 { n } else { n.saturating_sub(1) };
            (0..m).map(move |i| (s[i], s[(i + 1) % n]))
        })
    }
}

/// Which side of the rotated antimeridian a vertex lies on: +1 east
/// (y > 0), -1 west, 0 on the seam itself.
fn seam_side(v: Vec3) -> i8 {
    if v.y.abs() <= SEAM_EPS && v.x < 0.0 {
        0
    } else if v.y < 0.0 {
        -1
    } else {
        1
    }
}

fn subdivide(a: Vec3, b: Vec3, max_rad: f64, out: &mut Vec<Vec3>) {
    let angle = a.cross(b).norm().atan2(a.dot(b));
    if angle <= max_rad {
        return;
    }
    let s = a + b;
    let mid = if s.norm() < 1e-12 {
        // Antipodal: any perpendicular gives a valid great circle.
        let helper = if a.x.abs() < 0.9 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
        a.cross(helper).normalized()
    } else {
        s.normalized()
    };
    subdivide(a, mid, max_rad, out);
    out.push(mid);
    subdivide(mid, b, max_rad, out);
}

/// Inserts great-circle midpoints until no edge exceeds `max_rad`.
fn resample(vertices: &[Vec3], closed: bool, max_rad: f64) -> Vec<Vec3> {
    let mut out = Vec::with_capacity(vertices.len());
    for (i, &v) in vertices.iter().enumerate() {
        if i > 0 {
            subdivide(vertices[i - 1], v, max_rad, &mut out);
        }
        out.push(v);
    }
    if closed && vertices.len() > 1 {
        subdivide(vertices[vertices.len() - 1], vertices[0], max_rad, &mut out);
    }
    out
}

/// A run of vertices lying on one side of the seam.
#[derive(Debug, Clone, Default)]
struct Piece {
    points: Vec<Vec3>,
    side: i8,
    starts_on_seam: bool,
    ends_on_seam: bool,
}

impl Piece {
    /// Seam vertices take the side of their nearest off-seam neighbour,
    /// looking backwards first.
    fn to_geo(&self) -> Vec<GeoCoord> {
        let sides: Vec<i8> = self.points.iter().map(|&v| seam_side(v)).collect();
        let fallback = if self.side == 0 { -1 } else { self.side };
        self.points
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if sides[i] != 0 {
                    return GeoCoord::from_unit(UnitVec3(v));
                }
                let side =
                    sides[..i].iter().rev().chain(sides[i + 1..].iter()).copied().find(|&s| s != 0).unwrap_or(fallback);
                let lat = v.z.atan2((v.x * v.x + v.y * v.y).sqrt()).to_degrees();
                GeoCoord::new(180.0 * f64::from(side), lat).unwrap_or(GeoCoord::wrapped(0.0, lat))
            })
            .collect()
    }
}

/// Point where the minor arc `a`–`b` crosses the plane `y = 0`, when that
/// crossing lies on the seam half (`x < 0`).
fn seam_crossing(a: Vec3, b: Vec3) -> Option<Vec3> {
    let p = (a * b.y - b * a.y).normalized();
    let p = if p.dot(a + b) < 0.0 { -p } else { p };
    (p.x < 0.0).then_some(Vec3::new(p.x, 0.0, p.z).normalized())
}

/// Splits a resampled vertex sequence (closing edge included for rings) at
/// the seam.
fn cut(vertices: &[Vec3], closed: bool) -> (Vec<Piece>, bool) {
    let mut pieces: Vec<Piece> = Vec::new();
    let mut cur = Piece::default();
    let mut did_cut = false;
    let n = vertices.len();
    let total = if closed { n + 1 } else { n };
    let mut prev: Option<Vec3> = None;
    for idx in 0..total {
        let v = vertices[idx % n];
        let sv = seam_side(v);
        if let Some(p) = prev {
            let sp = seam_side(p);
            if sp != 0 && sv != 0 && sp != sv {
                if let Some(x) = seam_crossing(p, v) {
                    cur.points.push(x);
                    cur.ends_on_seam = true;
                    pieces.push(core::mem::take(&mut cur));
                    cur.points.push(x);
                    cur.starts_on_seam = true;
                    did_cut = true;
                }
            } else if sp == 0 && sv != 0 && cur.side != 0 && cur.side != sv {
                // Touched the seam and left on the other side: split at the
                // seam vertex.
                cur.ends_on_seam = true;
                pieces.push(core::mem::take(&mut cur));
                cur.points.push(p);
                cur.starts_on_seam = true;
                did_cut = true;
            }
        } else if sv == 0 {
            cur.starts_on_seam = true;
        }
        if sv != 0 && cur.side == 0 {
            cur.side = sv;
        }
        if !(closed && idx == n) {
            cur.points.push(v);
        }
        prev = Some(v);
    }
    if !cur.points.is_empty() {
        pieces.push(cur);
    }
    (pieces, did_cut)
}

/// Vertices along the seam meridian from latitude `from` to `to` (both
/// excluded), no further apart than `max_deg`.
fn seam_run(side: i8, from: f64, to: f64, max_deg: f64, out: &mut Vec<GeoCoord>) {
    let steps = ((to - from).abs() / max_deg).ceil().max(1.0) as usize;
    let lon = 180.0 * f64::from(side);
    for k in 1..steps {
        let lat = from + (to - from) * (k as f64 / steps as f64);
        out.push(GeoCoord::new(lon, lat).unwrap_or(GeoCoord::wrapped(lon, lat)));
    }
}

/// Rotates `path` by `r`, resamples every edge to at most `resample_max`
/// degrees and cuts segments where they cross the antimeridian of the
/// rotated frame. Cut rings are closed again along the antimeridian (or over
/// the enclosed pole when a ring winds around one).
pub fn prepare_path(path: &GeoPath, r: &SphericalRotation, resample_max: f64) -> GeoPath {
    let max_rad = resample_max.to_radians();
    let mut segments = Vec::new();
    let mut any_closed_output = false;
    for seg in &path.segments {
        if seg.is_empty() {
            continue;
        }
        let rotated: Vec<Vec3> = seg.iter().map(|g| r.rotate_unit(g.to_unit()).0).collect();
        let closed = path.closed && rotated.len() > 2;
        let dense = resample(&rotated, closed, max_rad);
        let (mut pieces, did_cut) = cut(&dense, closed);
        if !closed {
            segments.extend(pieces.iter().map(Piece::to_geo));
            continue;
        }
        any_closed_output = true;
        if !did_cut {
            segments.push(pieces[0].to_geo());
            continue;
        }
        // The ring's start is not a real break: join the tail onto the head.
        if pieces.len() > 1 {
            let last = pieces.pop().unwrap_or_default();
            let first = &mut pieces[0];
            if !first.starts_on_seam || last.side == first.side {
                let mut joined = last.points;
                joined.extend(first.points.iter().copied());
                first.points = joined;
                first.starts_on_seam = last.starts_on_seam;
                if first.side == 0 {
                    first.side = last.side;
                }
            } else {
                pieces.push(last);
            }
        }
        let interior_left = ring_interior_is_left(&rotated);
        for piece in &pieces {
            let mut ring = piece.to_geo();
            close_along_seam(&mut ring, piece, interior_left, resample_max);
            segments.push(ring);
        }
    }
    GeoPath { segments, closed: path.closed && any_closed_output }
}

/// Whether the smaller region bounded by the ring lies to the left of its
/// direction of travel.
fn ring_interior_is_left(ring: &[Vec3]) -> bool {
    let v0 = ring[0];
    let mut sum = 0.0;
    for w in ring[1..].windows(2) {
        let triple = (w[0] - v0).cross(w[1] - v0).dot(v0);
        let denom = 1.0 + v0.dot(w[0]) + w[0].dot(w[1]) + w[1].dot(v0);
        sum += 2.0 * triple.atan2(denom);
    }
    rem_euclid(sum, 4.0 * PI) <= 2.0 * PI
}

fn close_along_seam(ring: &mut Vec<GeoCoord>, piece: &Piece, interior_left: bool, max_deg: f64) {
    let (Some(&first), Some(&last)) = (ring.first(), ring.last()) else {
        return;
    };
    if !(piece.starts_on_seam && piece.ends_on_seam) {
        return;
    }
    let start_side: i8 = if first.lon() < 0.0 { -1 } else { 1 };
    let end_side: i8 = if last.lon() < 0.0 { -1 } else { 1 };
    let mut closure = Vec::new();
    if start_side == end_side {
        seam_run(end_side, last.lat(), first.lat(), max_deg, &mut closure);
    } else {
        // Winding once around a pole. Travelling east (ending on the +180
        // side) keeps the north pole on the left.
        let eastward = end_side > 0;
        let pole = if eastward == interior_left { 90.0 } else { -90.0 };
        seam_run(end_side, last.lat(), pole, max_deg, &mut closure);
        closure.push(GeoCoord::wrapped(0.0, pole));
        seam_run(start_side, pole, first.lat(), max_deg, &mut closure);
    }
    ring.extend(closure);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::sphere::{great_circle_distance, uniform_sphere_sample};

    fn g(lon: f64, lat: f64) -> GeoCoord {
        GeoCoord::new(lon, lat).unwrap()
    }

    #[test]
    fn hammer_forward_examples() {
        let c = hammer_forward(g(0.0, 0.0));
        assert_eq!((c.x, c.y), (0.0, 0.0));
        let e = hammer_forward(g(180.0, 0.0));
        assert!((e.x - 2.0 * SQRT_2).abs() < 1e-12 && e.y.abs() < 1e-12);
        let n = hammer_forward(g(0.0, 90.0));
        assert!(n.x.abs() < 1e-12 && (n.y - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn hammer_inverse_examples() {
        let c = hammer_inverse(MapPoint::new(0.0, 0.0)).unwrap();
        assert_eq!((c.lon(), c.lat()), (0.0, 0.0));
        let n = hammer_inverse(MapPoint::new(0.0, SQRT_2)).unwrap();
        assert!((n.lat() - 90.0).abs() < 1e-9);
        let e = hammer_inverse(MapPoint::new(2.0 * SQRT_2, 0.0)).unwrap();
        assert!((e.lon().abs() - 180.0).abs() < 1e-9);
        assert!(matches!(hammer_inverse(MapPoint::new(3.0, 0.0)), Err(ProjectionError::OutsideProjection { .. })));
    }

    #[test]
    fn hammer_round_trip_on_sphere() {
        let mut rng = rng::seeded(11);
        for _ in 0..2000 {
            let p = uniform_sphere_sample(&mut rng);
            let back = hammer_inverse(hammer_forward(p)).unwrap();
            assert!(great_circle_distance(p, back) < 1e-8, "{p:?} -> {back:?}");
        }
    }

    #[test]
    fn tissot_at_centre_is_a_unit_circle() {
        let t = tissot(g(0.0, 0.0), TISSOT_STEP).unwrap();
        assert!((t.semi_major - 1.0).abs() < 1e-5);
        assert!((t.semi_minor - 1.0).abs() < 1e-5);
        assert!(matches!(tissot(g(0.0, 89.5), TISSOT_STEP), Err(ProjectionError::NearPole(_))));
    }

    #[test]
    fn tissot_grows_toward_edge() {
        let t = tissot(g(150.0, 60.0), TISSOT_STEP).unwrap();
        assert!(t.semi_major > 1.0);
        assert!((t.area_scale() - 1.0).abs() < 1e-4);
        assert!(t.angular_distortion() > 10.0);
    }

    #[test]
    fn rotated_tissot_matches_plain_for_identity() {
        let p = g(40.0, 20.0);
        let a = tissot(p, TISSOT_STEP).unwrap();
        let b = tissot_rotated(&SphericalRotation::IDENTITY, p, TISSOT_STEP, 1.0).unwrap();
        assert!((a.semi_major - b.semi_major).abs() < 1e-7);
        assert!((a.semi_minor - b.semi_minor).abs() < 1e-7);
        assert!((a.orientation - b.orientation).abs() < 1e-5);
    }

    #[test]
    fn curved_remap_examples() {
        assert_eq!(curved_remap(MapPoint::new(0.0, 0.0)).unwrap(), (0.0, 0.0));
        let (h, v) = curved_remap(MapPoint::new(2.0 * SQRT_2, 0.0)).unwrap();
        assert!((h - 54.0).abs() < 1e-12 && v == 0.0);
        let (h, v) = curved_remap(MapPoint::new(0.0, SQRT_2)).unwrap();
        assert!(h == 0.0 && (v - 27.0).abs() < 1e-12);
        assert!(curved_remap(MapPoint::new(0.0, 2.0)).is_err());
        let m = curved_unmap(20.0, -10.0).unwrap();
        let (h, v) = curved_remap(m).unwrap();
        assert!((h - 20.0).abs() < 1e-12 && (v + 10.0).abs() < 1e-12);
    }

    #[test]
    fn clip_pulls_spill_onto_boundary() {
        let m = clip_to_ellipse(MapPoint::new(2.0 * SQRT_2 * (1.0 + 1e-10), 0.0));
        assert!(m.ellipse_radius_sq() <= 1.0);
        let inside = MapPoint::new(0.3, 0.2);
        assert_eq!(clip_to_ellipse(inside), inside);
    }

    #[test]
    fn equator_is_densified_only() {
        let path = GeoPath::line(alloc::vec![g(-30.0, 0.0), g(0.0, 0.0), g(45.0, 0.0)]);
        let out = prepare_path(&path, &SphericalRotation::IDENTITY, 1.0);
        assert_eq!(out.segments.len(), 1);
        for (a, b) in out.edges() {
            assert!(great_circle_distance(a, b) <= 1.0 + 1e-9);
            assert!(a.lat().abs() < 1e-12);
        }
        let s = &out.segments[0];
        assert!((s.first().unwrap().lon() + 30.0).abs() < 1e-12);
        assert!((s.last().unwrap().lon() - 45.0).abs() < 1e-9);
    }

    #[test]
    fn antimeridian_segment_is_cut() {
        let path = GeoPath::line(alloc::vec![g(170.0, 0.0), g(-170.0, 0.0)]);
        let out = prepare_path(&path, &SphericalRotation::IDENTITY, 1.0);
        assert_eq!(out.segments.len(), 2);
        assert_eq!(out.segments[0].last().unwrap().lon(), 180.0);
        assert_eq!(out.segments[1].first().unwrap().lon(), -180.0);
        for s in &out.segments {
            let signs: Vec<bool> = s.iter().map(|p| p.lon() > 0.0).collect();
            assert!(signs.iter().all(|&x| x == signs[0]));
        }
    }

    #[test]
    fn seam_meridian_is_not_split() {
        let verts: Vec<GeoCoord> = (-9..=9).map(|k| g(-180.0, f64::from(k) * 10.0)).collect();
        let out = prepare_path(&GeoPath::line(verts), &SphericalRotation::IDENTITY, 5.0);
        assert_eq!(out.segments.len(), 1);
    }

    #[test]
    fn ring_cut_is_reclosed_along_seam() {
        let ring = GeoPath::ring(alloc::vec![g(170.0, -10.0), g(-170.0, -10.0), g(-170.0, 10.0), g(170.0, 10.0),]);
        let out = prepare_path(&ring, &SphericalRotation::IDENTITY, 2.0);
        assert!(out.closed);
        assert_eq!(out.segments.len(), 2);
        for s in &out.segments {
            let east = s[0].lon() > 0.0;
            assert!(s.iter().all(|p| (p.lon() > 0.0) == east || p.lon().abs() == 180.0));
        }
        for (a, b) in out.edges() {
            assert!(great_circle_distance(a, b) <= 2.0 + 1e-9);
        }
    }

    #[test]
    fn polar_ring_closes_over_pole() {
        let ring: Vec<GeoCoord> = (0..36).map(|k| g(-175.0 + f64::from(k) * 10.0, 70.0)).collect();
        let out = prepare_path(&GeoPath::ring(ring), &SphericalRotation::IDENTITY, 5.0);
        assert_eq!(out.segments.len(), 1);
        assert!(out.segments[0].iter().any(|p| p.lat() == 90.0));
    }

    #[test]
    fn rotated_parallel_stays_on_its_small_circle() {
        // Graticule parallels are stroked lines: a loop with its first vertex
        // repeated, so cuts are not closed along the seam.
        let ring: Vec<GeoCoord> = (0..=360).map(|k| g(-180.0 + f64::from(k), 40.0)).collect();
        let r = SphericalRotation::new(0.0, 90.0, 0.0);
        let pole = r.rotate(g(0.0, 90.0));
        let out = prepare_path(&GeoPath::line(ring), &r, 1.0);
        assert!(out.segments.len() >= 2);
        for p in out.segments.iter().flatten() {
            // Cut vertices lie on the chord arc between 1° samples; the
            // sagitta of such an arc is below 2e-3°.
            assert!((great_circle_distance(pole, *p) - 50.0).abs() < 2e-3);
        }
    }
}
