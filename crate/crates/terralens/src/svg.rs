//! Deterministic SVG serialisation of a [`Drawing`].

use std::fmt::Write;

use crate::draw::{Drawing, Shape};

const STYLE: &str = "\
path,ellipse{vector-effect:non-scaling-stroke;fill:none;stroke-linejoin:round}
.background{fill:#ffffff}
.outline{stroke:#202020;stroke-width:1.2;fill:#eef4fa}
.meridian,.parallel{stroke:#8c8c8c;stroke-width:0.6}
.equator{stroke:#404040;stroke-width:1.6}
.land{fill:#d9cfb4;fill-rule:evenodd;stroke:#5a5040;stroke-width:0.7}
.coast{stroke:#5a5040;stroke-width:0.7}
.tissot{fill:#d0402b;fill-opacity:0.45;stroke:#8a2010;stroke-width:0.5}
.back{opacity:0.25;stroke-dasharray:2 2}
.land.back{fill:none}
";

/// Coordinates are written with six decimals, i.e. micrometres.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

pub fn path_data(segments: &[Vec<[f64; 2]>], closed: bool) -> String {
    let mut d = String::new();
    for seg in segments {
        for (i, p) in seg.iter().enumerate() {
            let _ = write!(d, "{}{},{}", if i == 0 { "M" } else { "L" }, num(p[0]), num(p[1]));
        }
        if closed {
            d.push('Z');
        }
    }
    d
}

/// Renders at `width` pixels; height follows the drawing's aspect ratio.
pub fn to_svg(drawing: &Drawing, width: u32) -> String {
    let b = drawing.bounds;
    let k = f64::from(width) / b.width();
    let height = (b.height() * k).round().max(1.0) as u32;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, "<style>\n{STYLE}</style>");
    let _ = writeln!(out, r#"<rect class="background" width="{width}" height="{height}"/>"#);
    // World metres, y up.
    let _ = writeln!(
        out,
        r#"<g transform="matrix({} 0 0 {} {} {})">"#,
        num(k),
        num(-k),
        num(-b.min_x * k),
        num(b.max_y * k)
    );
    for shape in &drawing.shapes {
        match shape {
            Shape::Path { class, segments, closed } => {
                if segments.is_empty() {
                    continue;
                }
                let _ = writeln!(out, r#"<path class="{class}" d="{}"/>"#, path_data(segments, *closed));
            }
            Shape::Ellipse { class, cx, cy, rx, ry, angle } => {
                let _ = writeln!(
                    out,
                    r#"<ellipse class="{class}" cx="{}" cy="{}" rx="{}" ry="{}" transform="rotate({} {} {})"/>"#,
                    num(*cx),
                    num(*cy),
                    num(*rx),
                    num(*ry),
                    num(*angle),
                    num(*cx),
                    num(*cy)
                );
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::draw::Bounds;

    #[test]
    fn writes_paths_and_ellipses() {
        let d = Drawing {
            bounds: Bounds { min_x: -1.0, min_y: -0.5, max_x: 1.0, max_y: 0.5 },
            shapes: vec![
                Shape::Path { class: "meridian".into(), segments: vec![vec![[0.0, -0.5], [0.0, 0.5]]], closed: false },
                Shape::Ellipse { class: "tissot".into(), cx: 0.0, cy: 0.0, rx: 0.1, ry: 0.05, angle: 30.0 },
            ],
        };
        let s = to_svg(&d, 200);
        assert!(s.contains(r#"height="100""#));
        assert!(s.contains(r#"<path class="meridian" d="M0.000000,-0.500000L0.000000,0.500000"/>"#));
        assert!(s.contains(r#"rotate(30.000000 0.000000 0.000000)"#));
        assert!(s.contains("matrix(100.000000 0 0 -100.000000 100.000000 50.000000)"));
    }
}
