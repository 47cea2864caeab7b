//! Builds vector drawings of the flat map, the curved-map preview and the
//! flat-to-globe morph. All coordinates are metres with `y` up.

use terralens_core::projection::{
    hammer_forward, hammer_inverse, prepare_path, tissot_rotated, GeoPath, MapPoint, TISSOT_STEP,
};
use terralens_core::scene::{graticule, map_outline, GraticuleLineKind, SceneEmbedding, SceneKind, WorldPoint};
use terralens_core::sphere::{GeoCoord, SphericalRotation};

use crate::coastline::Coastlines;
use crate::error::{CliError, Result};

/// Maximum edge length after resampling, degrees.
pub const RESAMPLE_DEG: f64 = 1.0;
/// Radius of the small circle each Tissot ellipse depicts, degrees.
pub const TISSOT_RADIUS_DEG: f64 = 3.0;
/// Tissot nodes closer than this to the cut meridian or the rotated poles
/// are skipped, degrees.
pub const TISSOT_MARGIN_DEG: f64 = 1.0;
const OUTLINE_STEP_DEG: f64 = 1.0;
const MARGIN: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionKind {
    Flat,
    CurvedPreview,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub projection: ProjectionKind,
    pub rotation: SphericalRotation,
    /// Graticule spacing, degrees; `None` draws no graticule.
    pub graticule: Option<f64>,
    /// Tissot node spacing, degrees; `None` draws no indicatrices.
    pub tissot: Option<f64>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            projection: ProjectionKind::Flat,
            rotation: SphericalRotation::IDENTITY,
            graticule: Some(10.0),
            tissot: Some(30.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Path {
        class: String,
        segments: Vec<Vec<[f64; 2]>>,
        closed: bool,
    },
    /// `angle` is the major-axis direction, degrees counter-clockwise from +x.
    Ellipse {
        class: String,
        cx: f64,
        cy: f64,
        rx: f64,
        ry: f64,
        angle: f64,
    },
}

impl Shape {
    pub fn class(&self) -> &str {
        match self {
            Shape::Path { class, .. } | Shape::Ellipse { class, .. } => class,
        }
    }
}

/// World-space window shown by a drawing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Bounds {
    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    fn padded(self, m: f64) -> Bounds {
        Bounds { min_x: self.min_x - m, min_y: self.min_y - m, max_x: self.max_x + m, max_y: self.max_y + m }
    }

    fn around(points: impl IntoIterator<Item = [f64; 2]>) -> Bounds {
        let mut b = Bounds { min_x: f64::MAX, min_y: f64::MAX, max_x: f64::MIN, max_y: f64::MIN };
        for [x, y] in points {
            b.min_x = b.min_x.min(x);
            b.min_y = b.min_y.min(y);
            b.max_x = b.max_x.max(x);
            b.max_y = b.max_y.max(y);
        }
        b
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Drawing {
    pub bounds: Bounds,
    pub shapes: Vec<Shape>,
}

/// Geometry in the rotated frame, grouped by drawing class.
struct Layer {
    class: &'static str,
    path: GeoPath,
}

fn layers(rotation: &SphericalRotation, spacing: Option<f64>, coast: Option<&Coastlines>) -> Result<Vec<Layer>> {
    let mut out = vec![Layer { class: "outline", path: GeoPath::ring(map_outline(OUTLINE_STEP_DEG)) }];
    if let Some(spacing) = spacing {
        let lines = graticule(spacing).map_err(|e| CliError::Argument(e.to_string()))?;
        for line in lines {
            let class = match (line.kind, line.emphasized) {
                (GraticuleLineKind::Meridian, _) => "meridian",
                (GraticuleLineKind::Parallel, false) => "parallel",
                (GraticuleLineKind::Parallel, true) => "parallel equator",
            };
            out.push(Layer { class, path: prepare_path(&line.path, rotation, RESAMPLE_DEG) });
        }
    }
    if let Some(c) = coast {
        for p in &c.polygons {
            out.push(Layer { class: "land", path: prepare_path(p, rotation, RESAMPLE_DEG) });
        }
        for l in &c.lines {
            out.push(Layer { class: "coast", path: prepare_path(l, rotation, RESAMPLE_DEG) });
        }
    }
    Ok(out)
}

fn project_layers(layers: &[Layer], f: impl Fn(GeoCoord) -> Option<[f64; 2]>) -> Vec<Shape> {
    layers
        .iter()
        .map(|l| Shape::Path {
            class: l.class.to_string(),
            segments: l
                .path
                .segments
                .iter()
                .map(|s| s.iter().filter_map(|&g| f(g)).collect::<Vec<_>>())
                .filter(|s| s.len() >= 2)
                .collect(),
            closed: l.path.closed,
        })
        .collect()
}

fn flat_point(flat: &SceneEmbedding, view: GeoCoord) -> Option<[f64; 2]> {
    flat.embed_view(view).ok().map(|w| [w.x, w.y])
}

/// Perspective image of a world point on a picture plane 1 m ahead.
fn picture_plane(w: WorldPoint) -> Option<[f64; 2]> {
    (w.z < 0.0).then(|| [w.x / -w.z, w.y / -w.z])
}

/// Tissot node grid: every `spacing` degrees, poles once.
fn tissot_nodes(spacing: f64) -> Vec<GeoCoord> {
    let n_lon = (360.0 / spacing).round() as i32;
    let n_lat = (90.0 / spacing).floor() as i32;
    let mut out = Vec::new();
    for j in -n_lat..=n_lat {
        let lat = f64::from(j) * spacing;
        if lat.abs() >= 90.0 {
            out.push(GeoCoord::wrapped(0.0, lat.signum() * 90.0));
            continue;
        }
        for i in 0..n_lon {
            out.push(GeoCoord::wrapped(-180.0 + f64::from(i) * spacing, lat));
        }
    }
    out
}

fn check_spacing(name: &str, s: Option<f64>) -> Result<()> {
    if let Some(s) = s {
        let n = 360.0 / s;
        if !(s > 0.0 && (n - n.round()).abs() < 1e-9) {
            return Err(CliError::Argument(format!("{name} spacing {s} must divide 360")));
        }
    }
    Ok(())
}

pub fn render(opts: &RenderOptions, coast: Option<&Coastlines>) -> Result<Drawing> {
    check_spacing("graticule", opts.graticule)?;
    check_spacing("tissot", opts.tissot)?;
    let layers = layers(&opts.rotation, opts.graticule, coast)?;
    match opts.projection {
        ProjectionKind::Flat => Ok(render_flat(opts, &layers)),
        ProjectionKind::CurvedPreview => Ok(render_curved(opts, &layers)),
    }
}

fn flat_bounds() -> Bounds {
    let s = flat_scene();
    match s.params {
        terralens_core::scene::SceneParams::FlatMap { width, height, .. } => {
            Bounds { min_x: -width / 2.0, min_y: -height / 2.0, max_x: width / 2.0, max_y: height / 2.0 }
        }
        _ => unreachable!("flat scene"),
    }
}

fn flat_scene() -> SceneEmbedding {
    SceneEmbedding::new(SceneKind::FlatMap)
}

fn flat_scale() -> f64 {
    let b = flat_bounds();
    SceneEmbedding::flat_scale(b.width(), b.height())
}

fn render_flat(opts: &RenderOptions, layers: &[Layer]) -> Drawing {
    let flat = flat_scene();
    let mut shapes = project_layers(layers, |g| flat_point(&flat, g));
    if let Some(spacing) = opts.tissot {
        let s = flat_scale();
        let r0 = TISSOT_RADIUS_DEG.to_radians() * s;
        for node in tissot_nodes(spacing) {
            let Some(t) = tissot_rotated(&opts.rotation, node, TISSOT_STEP, TISSOT_MARGIN_DEG) else {
                continue;
            };
            let m = hammer_forward(opts.rotation.rotate(node));
            shapes.push(Shape::Ellipse {
                class: "tissot".into(),
                cx: m.x * s,
                cy: m.y * s,
                rx: t.semi_major * r0,
                ry: t.semi_minor * r0,
                angle: t.orientation,
            });
        }
    }
    Drawing { bounds: flat_bounds().padded(MARGIN), shapes }
}

fn render_curved(opts: &RenderOptions, layers: &[Layer]) -> Drawing {
    let curved = SceneEmbedding::new(SceneKind::CurvedMap);
    let place = |view: GeoCoord| curved.embed_view(view).ok().and_then(picture_plane);
    let mut shapes = project_layers(layers, place);
    if let Some(spacing) = opts.tissot {
        // Indicatrices drawn in the Hammer plane, then carried onto the
        // curved surface, where they are no longer ellipses.
        let r0 = TISSOT_RADIUS_DEG.to_radians();
        for node in tissot_nodes(spacing) {
            let Some(t) = tissot_rotated(&opts.rotation, node, TISSOT_STEP, TISSOT_MARGIN_DEG) else {
                continue;
            };
            let c = hammer_forward(opts.rotation.rotate(node));
            let (sa, ca) = t.orientation.to_radians().sin_cos();
            let ring: Vec<[f64; 2]> = (0..48)
                .filter_map(|k| {
                    let (sk, ck) = (f64::from(k) * std::f64::consts::TAU / 48.0).sin_cos();
                    let (u, v) = (t.semi_major * r0 * ck, t.semi_minor * r0 * sk);
                    let m = MapPoint::new(c.x + u * ca - v * sa, c.y + u * sa + v * ca);
                    hammer_inverse(m).ok().and_then(place)
                })
                .collect();
            if ring.len() >= 3 {
                shapes.push(Shape::Path { class: "tissot".into(), segments: vec![ring], closed: true });
            }
        }
    }
    let outline = map_outline(OUTLINE_STEP_DEG).into_iter().filter_map(place);
    Drawing { bounds: Bounds::around(outline).padded(MARGIN), shapes }
}

/// One frame of the flat-to-globe morph at fraction `t`, seen orthographically
/// along −z. Frame `t = 0` reproduces the flat render's vertex positions.
/// Globe geometry behind the sphere's centre plane gets the extra class
/// `back`; filled polygons straddling that plane are drawn as outlines.
pub fn morph_frame(
    t: f64,
    rotation: &SphericalRotation,
    spacing: Option<f64>,
    coast: Option<&Coastlines>,
) -> Result<Drawing> {
    if !(0.0..=1.0).contains(&t) {
        return Err(CliError::Argument(format!("morph fraction {t} outside [0, 1]")));
    }
    check_spacing("graticule", spacing)?;
    let layers = layers(rotation, spacing, coast)?;
    let flat = flat_scene();
    let globe = SceneEmbedding::new(SceneKind::Exocentric);
    let centre_z = globe.sphere_centre().map_or(-1.0, |c| c.z);
    let place = |view: GeoCoord| -> Option<(WorldPoint, bool)> {
        let a = flat.embed_view(view).ok()?;
        let b = globe.embed_view(view).ok()?;
        Some((a.lerp(&b, t), t > 0.0 && b.z < centre_z))
    };
    let mut shapes = Vec::new();
    for layer in &layers {
        let mut front = Vec::new();
        let mut back = Vec::new();
        let mut open_front = Vec::new();
        let mut open_back = Vec::new();
        for seg in &layer.path.segments {
            let pts: Vec<([f64; 2], bool)> =
                seg.iter().filter_map(|&g| place(g)).map(|(w, b)| ([w.x, w.y], b)).collect();
            if pts.len() < 2 {
                continue;
            }
            let all_back = pts.iter().all(|p| p.1);
            let all_front = pts.iter().all(|p| !p.1);
            let coords = || pts.iter().map(|p| p.0).collect::<Vec<_>>();
            if all_front {
                front.push(coords());
            } else if all_back {
                back.push(coords());
            } else {
                let (f, b) =
                    if layer.path.closed { (&mut open_front, &mut open_back) } else { (&mut front, &mut back) };
                split_runs(&pts, layer.path.closed, f, b);
            }
        }
        let class = layer.class;
        let alt = if class == "land" { "coast" } else { class };
        let mut push = |class: String, segments: Vec<Vec<[f64; 2]>>, closed: bool| {
            if !segments.is_empty() {
                shapes.push(Shape::Path { class, segments, closed });
            }
        };
        push(format!("{class} back"), back, layer.path.closed);
        push(format!("{alt} back"), open_back, false);
        push(class.to_string(), front, layer.path.closed);
        push(alt.to_string(), open_front, false);
    }
    // Back shapes first so the near side is painted over them.
    shapes.sort_by_key(|s| !s.class().ends_with(" back"));
    let bounds = Bounds { min_x: -0.5, min_y: -0.4, max_x: 0.5, max_y: 0.4 }.padded(MARGIN);
    Ok(Drawing { bounds, shapes })
}

/// Splits a polyline into maximal runs of equal back/front flag. Adjacent
/// runs share their boundary vertex so the stroke stays connected.
fn split_runs(pts: &[([f64; 2], bool)], closed: bool, front: &mut Vec<Vec<[f64; 2]>>, back: &mut Vec<Vec<[f64; 2]>>) {
    let mut seq: Vec<([f64; 2], bool)> = pts.to_vec();
    if closed {
        // Start at a flag change so the wrap-around run is not split.
        if let Some(k) = (1..seq.len()).find(|&i| seq[i].1 != seq[i - 1].1) {
            seq.rotate_left(k);
        }
        seq.push(seq[0]);
    }
    let mut run = vec![seq[0].0];
    let mut flag = seq[0].1;
    for w in seq.windows(2) {
        let (p, f) = w[1];
        if f == flag {
            run.push(p);
            continue;
        }
        run.push(p);
        let done = std::mem::replace(&mut run, vec![p]);
        if flag {
            back.push(done)
        } else {
            front.push(done)
        }
        flag = f;
    }
    if run.len() >= 2 {
        if flag {
            back.push(run)
        } else {
            front.push(run)
        }
    }
}
