//! SVG export of chains with optional construction overlays.
//!
//! Coordinates are written with the y axis flipped so that the drawing keeps
//! the mathematical orientation.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::alpha::first_tangent_length;
use crate::chain::{end_tangent, Chain};
use crate::error::Result;
use crate::geom::{Point, Vec2};
use crate::hermite::evaluate_segment;
use crate::io::sample::{sample_chain, SampleMode};
use crate::quadrature::QuadratureConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvgStyle {
    /// Chord tolerance of the polyline. `None` uses `1e-3` of the diagonal of
    /// the control point bounding box.
    pub chord_tol: Option<f64>,
    pub stroke: String,
    /// Stroke width relative to the diagonal of the drawing.
    pub stroke_width: f64,
    pub control_polygon: bool,
    pub tangents: bool,
    pub joints: bool,
    /// Margin around the drawing, relative to its diagonal.
    pub margin: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            chord_tol: None,
            stroke: "black".into(),
            stroke_width: 2e-3,
            control_polygon: false,
            tangents: false,
            joints: false,
            margin: 0.05,
        }
    }
}

impl SvgStyle {
    /// All overlays on.
    pub fn annotated() -> SvgStyle {
        SvgStyle {
            control_polygon: true,
            tangents: true,
            joints: true,
            ..SvgStyle::default()
        }
    }
}

#[derive(Clone, Copy)]
struct Bbox {
    min: Point,
    max: Point,
}

impl Bbox {
    fn of(points: impl IntoIterator<Item = Point>) -> Option<Bbox> {
        let mut it = points.into_iter();
        let first = it.next()?;
        Some(it.fold(
            Bbox {
                min: first,
                max: first,
            },
            |b, p| Bbox {
                min: Point::new(b.min.x.min(p.x), b.min.y.min(p.y)),
                max: Point::new(b.max.x.max(p.x), b.max.y.max(p.y)),
            },
        ))
    }

    fn diagonal(&self) -> f64 {
        self.min.distance(self.max)
    }
}

fn pt(p: Point) -> String {
    format!("{},{}", p.x, -p.y)
}

fn arrow(out: &mut String, from: Point, v: Vec2, color: &str, width: f64) {
    let to = from + v;
    let head = v.length() * 0.15;
    let back = -v.normalize() * head;
    let l = to + back + back.turn_left() * 0.5;
    let r = to + back + back.turn_right() * 0.5;
    let _ = writeln!(
        out,
        r#"  <path d="M{} L{} M{} L{} L{}" fill="none" stroke="{color}" stroke-width="{width}"/>"#,
        pt(from),
        pt(to),
        pt(l),
        pt(to),
        pt(r)
    );
}

/// Renders `chain` as an SVG document.
pub fn export_svg(chain: &Chain, style: &SvgStyle) -> Result<String> {
    let q = QuadratureConfig::default();
    let controls = chain.segments.iter().flat_map(|s| s.control);
    let Some(ctrl_box) = Bbox::of(controls) else {
        return Ok(concat!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1" width="1" height="1">"#,
            "\n</svg>\n"
        )
        .to_string());
    };
    let chord_tol = style.chord_tol.unwrap_or(1e-3 * ctrl_box.diagonal());
    let points = sample_chain(chain, SampleMode::ChordTol(chord_tol), &q)?;

    let mut all: Vec<Point> = points.clone();
    if style.control_polygon || style.tangents {
        all.extend(chain.segments.iter().flat_map(|s| s.control));
    }
    let mut arrows: Vec<(Point, Vec2, &str)> = Vec::new();
    if style.tangents {
        if let Some(first) = chain.segments.first() {
            // Only the first tangent carries a length the user sets.
            let len = first_tangent_length(first);
            let dir = evaluate_segment(first, 0.0, &q)?.tangent;
            let v = if len.is_finite() { dir * len } else { dir };
            arrows.push((first.control[0], v, "red"));
        }
        for seg in chain.segments.iter().skip(1) {
            let v = seg.control[1] - seg.control[0];
            arrows.push((seg.control[0], v, "green"));
        }
        if let Some(last) = chain.segments.last() {
            let v = end_tangent(last).unwrap_or_else(|_| last.control[2] - last.control[1]);
            arrows.push((last.control[2], v, "black"));
        }
        all.extend(arrows.iter().map(|(p, v, _)| *p + *v));
    }
    let bbox = Bbox::of(all.iter().copied()).expect("at least one point");
    let diag = bbox.diagonal().max(f64::MIN_POSITIVE);
    let pad = style.margin * diag;
    let (x0, y0) = (bbox.min.x - pad, -bbox.max.y - pad);
    let (w, h) = (
        bbox.max.x - bbox.min.x + 2.0 * pad,
        bbox.max.y - bbox.min.y + 2.0 * pad,
    );
    let width = style.stroke_width * diag;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {y0} {w} {h}" width="{}" height="{}">"#,
        (800.0 * w / w.max(h)).round(),
        (800.0 * h / w.max(h)).round()
    );
    if style.control_polygon {
        for seg in &chain.segments {
            let [a, b, c] = seg.control;
            let _ = writeln!(
                out,
                r#"  <polyline points="{} {} {}" fill="none" stroke="gray" stroke-width="{}" stroke-dasharray="{} {}"/>"#,
                pt(a),
                pt(b),
                pt(c),
                width * 0.5,
                width * 3.0,
                width * 2.0
            );
            let _ = writeln!(
                out,
                r#"  <circle cx="{}" cy="{}" r="{}" fill="gray"/>"#,
                b.x,
                -b.y,
                width * 1.5
            );
        }
    }
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let _ = write!(d, "{}{}", if i == 0 { "M" } else { " L" }, pt(*p));
    }
    let _ = writeln!(
        out,
        r#"  <path class="curve" d="{d}" fill="none" stroke="{}" stroke-width="{width}" stroke-linejoin="round"/>"#,
        style.stroke
    );
    for (p, v, color) in &arrows {
        arrow(&mut out, *p, *v, color, width * 0.75);
    }
    if style.joints {
        for seg in &chain.segments {
            for p in [seg.control[0], seg.control[2]] {
                let _ = writeln!(
                    out,
                    r#"  <circle cx="{}" cy="{}" r="{}" fill="green"/>"#,
                    p.x,
                    -p.y,
                    width * 2.0
                );
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::{solve_g1, HermiteProblem, LambdaConfig};

    #[test]
    fn empty_chain_is_valid() {
        let text = export_svg(&Chain::default(), &SvgStyle::default()).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert_eq!(doc.root_element().tag_name().name(), "svg");
    }

    #[test]
    fn arc_path_bbox() {
        // Quarter circle of radius 3 about the origin from (3, 0) to (0, 3).
        let p = HermiteProblem::new(
            Point::new(3.0, 0.0),
            Point::new(0.0, 3.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
        )
        .unwrap();
        let seg = solve_g1(&p, 0.5, &LambdaConfig::default()).unwrap();
        let text = export_svg(&Chain::new(seg), &SvgStyle::annotated()).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        let path = doc
            .descendants()
            .find(|n| n.attribute("class") == Some("curve"))
            .unwrap();
        let pts: Vec<(f64, f64)> = path
            .attribute("d")
            .unwrap()
            .split(['M', 'L', ' '])
            .filter(|s| !s.is_empty())
            .map(|s| {
                let (x, y) = s.split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect();
        let fold = |f: fn(f64, f64) -> f64, init: f64, pick: fn(&(f64, f64)) -> f64| {
            pts.iter().map(pick).fold(init, f)
        };
        let (min_x, max_x) = (
            fold(f64::min, f64::MAX, |p| p.0),
            fold(f64::max, f64::MIN, |p| p.0),
        );
        let (min_y, max_y) = (
            fold(f64::min, f64::MAX, |p| p.1),
            fold(f64::max, f64::MIN, |p| p.1),
        );
        let eps = 1e-12;
        assert!(min_x.abs() < eps && (max_x - 3.0).abs() < eps);
        // Flipped y.
        assert!((min_y + 3.0).abs() < eps && max_y.abs() < eps);
    }
}
