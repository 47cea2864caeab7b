//! GeoJSON coastline input.

use std::path::Path;

use serde::Deserialize;
use terralens_core::projection::GeoPath;
use terralens_core::sphere::GeoCoord;

use crate::error::{CliError, Result};

/// Coordinates this far outside the valid range are treated as rounding
/// noise and clamped.
const RANGE_SLACK: f64 = 1e-6;

type Position = Vec<f64>;

/// The GeoJSON objects we read. Unknown members such as `properties` or
/// `bbox` are ignored.
#[derive(Debug, Deserialize)]
#[serde(tag = "type")]
enum Object {
    Point {},
    MultiPoint {},
    LineString { coordinates: Vec<Position> },
    MultiLineString { coordinates: Vec<Vec<Position>> },
    Polygon { coordinates: Vec<Vec<Position>> },
    MultiPolygon { coordinates: Vec<Vec<Vec<Position>>> },
    GeometryCollection { geometries: Vec<Object> },
    Feature { geometry: Option<Box<Object>> },
    FeatureCollection { features: Vec<Object> },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Coastlines {
    /// One entry per polygon: exterior ring then holes.
    pub polygons: Vec<GeoPath>,
    pub lines: Vec<GeoPath>,
}

impl Coastlines {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Input { path: path.into(), source })?;
        Self::parse(&text).map_err(|m| CliError::malformed(path, m))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let obj: Object = serde_json::from_str(text).map_err(|e| format!("not GeoJSON: {e}"))?;
        let mut out = Coastlines::default();
        out.add(&obj)?;
        Ok(out)
    }

    fn add(&mut self, obj: &Object) -> Result<(), String> {
        match obj {
            Object::Point {} | Object::MultiPoint {} => {}
            Object::LineString { coordinates } => self.lines.push(GeoPath::line(line(coordinates)?)),
            Object::MultiLineString { coordinates } => {
                for l in coordinates {
                    self.lines.push(GeoPath::line(line(l)?));
                }
            }
            Object::Polygon { coordinates } => self.polygons.push(polygon(coordinates)?),
            Object::MultiPolygon { coordinates } => {
                for rings in coordinates {
                    self.polygons.push(polygon(rings)?);
                }
            }
            Object::GeometryCollection { geometries: items } | Object::FeatureCollection { features: items } => {
                for g in items {
                    self.add(g)?;
                }
            }
            Object::Feature { geometry } => {
                if let Some(g) = geometry {
                    self.add(g)?;
                }
            }
        }
        Ok(())
    }
}

fn coord(p: &[f64]) -> Result<GeoCoord, String> {
    let (&lon, &lat) = match p {
        [lon, lat, ..] => (lon, lat),
        _ => return Err(format!("position needs two numbers, got {p:?}")),
    };
    let lon = clamp_slack(lon, 180.0).ok_or_else(|| format!("longitude {lon} out of range"))?;
    let lat = clamp_slack(lat, 90.0).ok_or_else(|| format!("latitude {lat} out of range"))?;
    GeoCoord::new(lon, lat).map_err(|e| e.to_string())
}

fn clamp_slack(v: f64, limit: f64) -> Option<f64> {
    (v.is_finite() && v.abs() <= limit + RANGE_SLACK).then(|| v.clamp(-limit, limit))
}

fn line(positions: &[Vec<f64>]) -> Result<Vec<GeoCoord>, String> {
    if positions.len() < 2 {
        return Err("line string needs at least two positions".into());
    }
    positions.iter().map(|p| coord(p)).collect()
}

fn polygon(rings: &[Vec<Vec<f64>>]) -> Result<GeoPath, String> {
    if rings.is_empty() {
        return Err("polygon has no rings".into());
    }
    let mut out = Vec::with_capacity(rings.len());
    for ring in rings {
        let mut verts = ring.iter().map(|p| coord(p)).collect::<Result<Vec<_>, _>>()?;
        if verts.len() >= 2 && verts.first() == verts.last() {
            verts.pop();
        }
        verts.dedup();
        if verts.len() < 3 {
            return Err("polygon ring needs at least three distinct positions".into());
        }
        out.push(verts);
    }
    Ok(GeoPath { segments: out, closed: true })
}
