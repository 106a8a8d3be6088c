//! Plain SVG frames: domain boundary, curve, and for extinction runs an
//! inset with the rescaled curve against the unit half-circle.

use std::fmt::Write;

use fbcsf_core::flow::Snapshot;
use fbcsf_core::{ConvexDomain, Point};

const SIZE: f64 = 600.0;
const INSET: f64 = 180.0;

struct View {
    min: Point,
    scale: f64,
}

impl View {
    fn new(min: Point, max: Point) -> Self {
        let span = (max.x - min.x).max(max.y - min.y).max(1e-12);
        Self { min, scale: SIZE / span }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        ((p.x - self.min.x) * self.scale, SIZE - (p.y - self.min.y) * self.scale)
    }
}

fn polyline(out: &mut String, pts: impl Iterator<Item = (f64, f64)>, style: &str) {
    let coords: Vec<String> = pts.map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    let _ = writeln!(out, r#"<polyline fill="none" {style} points="{}"/>"#, coords.join(" "));
}

/// Bounding box used for every frame of a run.
pub fn frame_bounds(domain: &ConvexDomain, first: &Snapshot<f64>) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |p: Point| {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    };
    for &p in first.curve.vertices() {
        grow(p);
    }
    if domain.is_bounded() {
        for p in boundary_points(domain, 256) {
            grow(p);
        }
    }
    let pad = 0.1 * (hi.x - lo.x).max(hi.y - lo.y);
    (Point::new(lo.x - pad, lo.y - pad), Point::new(hi.x + pad, hi.y + pad))
}

fn boundary_points(domain: &ConvexDomain, n: usize) -> Vec<Point> {
    let len = domain.boundary_length();
    (0..=n)
        .filter_map(|k| domain.boundary_frame(len * k as f64 / n as f64).ok().map(|f| f.point))
        .collect()
}

pub fn frame(
    domain: &ConvexDomain,
    snapshot: &Snapshot<f64>,
    bounds: (Point, Point),
    rescaled: Option<(&[Point], Point)>,
) -> String {
    let view = View::new(bounds.0, bounds.1);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if domain.is_bounded() {
        polyline(&mut out, boundary_points(domain, 512).into_iter().map(|p| view.map(p)), r#"stroke="gray""#);
    } else {
        let (_, y) = view.map(Point::new(0.0, 0.0));
        let _ = writeln!(out, r#"<line x1="0" y1="{y:.3}" x2="{SIZE}" y2="{y:.3}" stroke="gray"/>"#);
    }
    polyline(&mut out, snapshot.curve.vertices().iter().map(|&p| view.map(p)), r#"stroke="black" stroke-width="1.5""#);
    let _ = writeln!(out, r#"<text x="8" y="18" font-size="14">t = {:.6}</text>"#, snapshot.t);
    if let Some((pts, normal)) = rescaled {
        let origin = SIZE - INSET - 8.0;
        let unit = INSET / 3.0;
        let map = |p: Point| {
            // inward normal points up in the inset
            let inward = -normal;
            let side = normal.rot90();
            let (u, v) = (p.dot(side), p.dot(inward));
            (origin + INSET / 2.0 + u * unit, origin + INSET - 10.0 - v * unit)
        };
        let _ = writeln!(
            out,
            r#"<rect x="{origin}" y="{origin}" width="{INSET}" height="{INSET}" fill="none" stroke="lightgray"/>"#
        );
        let circle = (0..=64).map(|k| {
            let a = std::f64::consts::PI * (k as f64 / 64.0 - 0.5);
            map(-normal * a.cos() + normal.rot90() * a.sin())
        });
        polyline(&mut out, circle, r#"stroke="red" stroke-dasharray="4 3""#);
        polyline(&mut out, pts.iter().map(|&p| map(p)), r#"stroke="blue""#);
    }
    out.push_str("</svg>\n");
    out
}
