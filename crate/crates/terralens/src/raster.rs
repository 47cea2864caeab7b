//! PNG output: the same drawing rasterised with tiny-skia.

use tiny_skia::{Color, FillRule, Paint, PathBuilder, Pixmap, Stroke, StrokeDash, Transform};

use crate::draw::{Drawing, Shape};
use crate::error::{CliError, Result};

struct Style {
    fill: Option<Color>,
    stroke: Option<(Color, f32)>,
    dashed: bool,
}

fn rgba(r: u8, g: u8, b: u8, a: f32) -> Color {
    Color::from_rgba8(r, g, b, (a * 255.0).round() as u8)
}

fn style(class: &str) -> Style {
    let back = class.split(' ').any(|c| c == "back");
    let alpha = if back { 0.25 } else { 1.0 };
    let base = class.split(' ').next().unwrap_or("");
    let (fill, stroke) = match (base, class.contains("equator")) {
        ("outline", _) => (Some(rgba(0xee, 0xf4, 0xfa, alpha)), Some((rgba(0x20, 0x20, 0x20, alpha), 1.2))),
        ("parallel", true) => (None, Some((rgba(0x40, 0x40, 0x40, alpha), 1.6))),
        ("meridian" | "parallel", false) => (None, Some((rgba(0x8c, 0x8c, 0x8c, alpha), 0.6))),
        ("land", _) if !back => (Some(rgba(0xd9, 0xcf, 0xb4, 1.0)), Some((rgba(0x5a, 0x50, 0x40, 1.0), 0.7))),
        ("land" | "coast", _) => (None, Some((rgba(0x5a, 0x50, 0x40, alpha), 0.7))),
        ("tissot", _) => (Some(rgba(0xd0, 0x40, 0x2b, 0.45)), Some((rgba(0x8a, 0x20, 0x10, 1.0), 0.5))),
        _ => (None, Some((rgba(0, 0, 0, alpha), 0.6))),
    };
    Style { fill, stroke, dashed: back }
}

/// Rasterises at `width` pixels, matching the SVG's pixel grid.
pub fn to_png(drawing: &Drawing, width: u32) -> Result<Vec<u8>> {
    let b = drawing.bounds;
    let k = f64::from(width) / b.width();
    let height = (b.height() * k).round().max(1.0) as u32;
    let mut pixmap =
        Pixmap::new(width, height).ok_or_else(|| CliError::Argument(format!("bad image size {width}x{height}")))?;
    pixmap.fill(Color::WHITE);
    let to_px = Transform::from_row(k as f32, 0.0, 0.0, -k as f32, (-b.min_x * k) as f32, (b.max_y * k) as f32);

    for shape in &drawing.shapes {
        let st = style(shape.class());
        let mut pb = PathBuilder::new();
        match shape {
            Shape::Path { segments, closed, .. } => {
                for seg in segments {
                    for (i, p) in seg.iter().enumerate() {
                        let (x, y) = (p[0] as f32, p[1] as f32);
                        if i == 0 {
                            pb.move_to(x, y)
                        } else {
                            pb.line_to(x, y)
                        }
                    }
                    if *closed {
                        pb.close();
                    }
                }
            }
            Shape::Ellipse { cx, cy, rx, ry, angle, .. } => {
                let (s, c) = angle.to_radians().sin_cos();
                for i in 0..=64 {
                    let t = f64::from(i) * std::f64::consts::TAU / 64.0;
                    let (u, v) = (rx * t.cos(), ry * t.sin());
                    let (x, y) = ((cx + u * c - v * s) as f32, (cy + u * s + v * c) as f32);
                    if i == 0 {
                        pb.move_to(x, y)
                    } else {
                        pb.line_to(x, y)
                    }
                }
                pb.close();
            }
        }
        let Some(path) = pb.finish() else { continue };
        let mut paint = Paint { anti_alias: true, ..Paint::default() };
        if let (Some(fill), true) = (st.fill, matches!(shape, Shape::Ellipse { .. }) || is_closed(shape)) {
            paint.set_color(fill);
            pixmap.fill_path(&path, &paint, FillRule::EvenOdd, to_px, None);
        }
        if let Some((color, w)) = st.stroke {
            paint.set_color(color);
            // Widths are in pixels, so stroke in pixel space.
            let Some(px_path) = path.clone().transform(to_px) else { continue };
            let mut stroke = Stroke { width: w, ..Stroke::default() };
            if st.dashed {
                stroke.dash = StrokeDash::new(vec![2.0, 2.0], 0.0);
            }
            pixmap.stroke_path(&px_path, &paint, &stroke, Transform::identity(), None);
        }
    }
    pixmap.encode_png().map_err(|e| CliError::Other(format!("PNG encoding failed: {e}")))
}

fn is_closed(shape: &Shape) -> bool {
    matches!(shape, Shape::Path { closed: true, .. })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::draw::{render, RenderOptions};

    #[test]
    fn png_is_deterministic() {
        let d = render(&RenderOptions { graticule: Some(30.0), ..Default::default() }, None).unwrap();
        let a = to_png(&d, 300).unwrap();
        assert_eq!(&a[1..4], b"PNG");
        assert_eq!(a, to_png(&d, 300).unwrap());
    }
}
