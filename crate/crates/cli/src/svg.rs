//! Deterministic SVG 1.1 pictures. Coordinates are printed with three decimals.

use crate::commands::LimitGrid;
use std::fmt::Write;
use tropaz_core::action::ArcticCurveGeometry;
use tropaz_core::lattice::EdgeType;
use tropaz_core::newton::{PointClass, Subdivision};
use tropaz_core::rational::{to_f64, Point};
use tropaz_core::tropical_curve::TropicalCurve;
use tropaz_numeric::aztec::AztecGraph;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

/// World box to canvas, `y` pointing up.
struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
}

impl Frame {
    fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        Frame { x0, y0, scale: (SIZE - 2.0 * MARGIN) / span }
    }

    fn x(&self, x: f64) -> String {
        format!("{:.3}", MARGIN + (x - self.x0) * self.scale)
    }

    fn y(&self, y: f64) -> String {
        format!("{:.3}", SIZE - MARGIN - (y - self.y0) * self.scale)
    }

    fn line(&self, out: &mut String, class: &str, a: (f64, f64), b: (f64, f64), style: &str) {
        let _ = writeln!(
            out,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
            self.x(a.0),
            self.y(a.1),
            self.x(b.0),
            self.y(b.1)
        );
    }

    fn circle(&self, out: &mut String, class: &str, p: (f64, f64), r: f64, fill: &str) {
        let _ = writeln!(out, r#"<circle class="{class}" cx="{}" cy="{}" r="{r}" fill="{fill}"/>"#, self.x(p.0), self.y(p.1));
    }

    fn polygon(&self, out: &mut String, class: &str, pts: &[(f64, f64)], style: &str) {
        let list: Vec<String> = pts.iter().map(|p| format!("{},{}", self.x(p.0), self.y(p.1))).collect();
        let _ = writeln!(out, r#"<polygon class="{class}" points="{}" {style}/>"#, list.join(" "));
    }
}

fn header(title: &str, hash: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n<title>{title}</title>\n<metadata>manifest_hash={hash}</metadata>\n<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"
    )
}

fn fp(p: &Point) -> (f64, f64) {
    (to_f64(&p.0), to_f64(&p.1))
}

pub fn subdivision(sub: &Subdivision, hash: &str) -> String {
    let (k, ell) = (sub.polygon.k as f64, sub.polygon.ell as f64);
    let frame = Frame::new(-ell, 0.0, 0.0, k);
    let mut out = header("subdivision", hash);
    for face in &sub.faces {
        let pts: Vec<(f64, f64)> = face.vertices.iter().map(|m| (m.0 as f64, m.1 as f64)).collect();
        frame.polygon(&mut out, "face", &pts, r##"fill="#eef3fa" stroke="#234" stroke-width="1.5""##);
    }
    for mu in sub.polygon.points() {
        let fill = if sub.is_vertex(mu) { "#234" } else { "white" };
        frame.circle(&mut out, "point", (mu.0 as f64, mu.1 as f64), 4.0, fill);
    }
    out.push_str("</svg>\n");
    out
}

pub fn curve(curve: &TropicalCurve, hash: &str) -> String {
    let pts: Vec<(f64, f64)> = curve.vertices.iter().map(|v| fp(&v.position)).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &pts {
        x0 = x0.min(p.0);
        y0 = y0.min(p.1);
        x1 = x1.max(p.0);
        y1 = y1.max(p.1);
    }
    let pad = 1f64.max(0.25 * (x1 - x0).max(y1 - y0));
    let (x0, y0, x1, y1) = (x0 - pad, y0 - pad, x1 + pad, y1 + pad);
    let frame = Frame::new(x0, y0, x1, y1);
    let mut out = header("tropical curve", hash);
    for leaf in &curve.leaves {
        let p = pts[leaf.vertex];
        let d = (-leaf.eta.0 as f64, -leaf.eta.1 as f64);
        let mut t = f64::INFINITY;
        if d.0 != 0.0 {
            t = t.min(((if d.0 > 0.0 { x1 } else { x0 }) - p.0) / d.0);
        }
        if d.1 != 0.0 {
            t = t.min(((if d.1 > 0.0 { y1 } else { y0 }) - p.1) / d.1);
        }
        frame.line(&mut out, "leaf", p, (p.0 + t * d.0, p.1 + t * d.1), r##"stroke="#888" stroke-width="1.5""##);
    }
    for e in &curve.bounded {
        frame.line(&mut out, "edge", pts[e.from], pts[e.to], r##"stroke="#234" stroke-width="2""##);
    }
    for p in &pts {
        frame.circle(&mut out, "vertex", *p, 4.0, "#234");
    }
    out.push_str("</svg>\n");
    out
}

fn class_fill(class: PointClass) -> &'static str {
    match class {
        PointClass::Corner => "#cfe0f3",
        PointClass::Side => "#f6e2c6",
        PointClass::Interior => "#d6efcf",
    }
}

pub fn arctic(k: usize, ell: usize, sub: &Subdivision, geometry: &ArcticCurveGeometry, hash: &str) -> String {
    let (w, h) = (1.0 / ell as f64, 1.0 / k as f64);
    let frame = Frame::new(-w, -h, 0.0, 0.0);
    let mut out = header("arctic curve", hash);
    frame.polygon(&mut out, "domain", &[(-w, -h), (0.0, -h), (0.0, 0.0), (-w, 0.0)], r##"fill="none" stroke="#000" stroke-width="1""##);
    for region in geometry.regions.values().filter(|r| !r.is_empty()) {
        let pts: Vec<(f64, f64)> = region.vertices.iter().map(fp).collect();
        let style = format!(r##"fill="{}" stroke="none""##, class_fill(sub.polygon.classify(region.mu)));
        frame.polygon(&mut out, "region", &pts, &style);
    }
    for seg in &geometry.segments {
        frame.line(&mut out, "segment", fp(&seg.from), fp(&seg.to), r##"stroke="#b00" stroke-width="2""##);
    }
    out.push_str("</svg>\n");
    out
}

pub fn limit_shape(k: usize, ell: usize, samples: &LimitGrid, hash: &str) -> String {
    let (w, h) = (1.0 / ell as f64, 1.0 / k as f64);
    let frame = Frame::new(-w, -h, 0.0, 0.0);
    let mut out = header("limit shape", hash);
    let values: Vec<f64> = samples.values.iter().map(|s| to_f64(&s.2)).collect();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (cw, ch) = (w / samples.grid as f64, h / samples.grid as f64);
    for (s, value) in samples.values.iter().zip(&values) {
        let (u, v) = (to_f64(&s.1 .0), to_f64(&s.1 .1));
        let t = if hi > lo { (value - lo) / (hi - lo) } else { 0.5 };
        let g = (40.0 + 200.0 * t).round() as u8;
        let cell = [
            (u - cw / 2.0, v - ch / 2.0),
            (u + cw / 2.0, v - ch / 2.0),
            (u + cw / 2.0, v + ch / 2.0),
            (u - cw / 2.0, v + ch / 2.0),
        ];
        frame.polygon(&mut out, "cell", &cell, &format!(r#"fill="rgb({g},{g},{g})" stroke="none""#));
    }
    out.push_str("</svg>\n");
    out
}

fn edge_color(ty: EdgeType) -> &'static str {
    match ty {
        EdgeType::West => "#1f77b4",
        EdgeType::South => "#d62728",
        EdgeType::East => "#2ca02c",
        EdgeType::North => "#ff7f0e",
    }
}

pub fn sample(graph: &AztecGraph, cover: &[usize], hash: &str) -> String {
    let positions: Vec<(f64, f64)> = (0..graph.whites.len())
        .map(|w| graph.white_position(w))
        .chain((0..graph.blacks.len()).map(|b| graph.black_position(b)))
        .map(|(x, y)| (x as f64, y as f64))
        .collect();
    let x0 = positions.iter().map(|p| p.0).fold(f64::INFINITY, f64::min) - 1.0;
    let y0 = positions.iter().map(|p| p.1).fold(f64::INFINITY, f64::min) - 1.0;
    let x1 = positions.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let y1 = positions.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let frame = Frame::new(x0, y0, x1, y1);
    let width = (0.6 * frame.scale).max(1.0);
    let mut out = header("dimer sample", hash);
    for &id in cover {
        let e = &graph.edges[id];
        let (a, b) = (graph.white_position(e.white), graph.black_position(e.black));
        let style = format!(r#"stroke="{}" stroke-width="{width:.3}" stroke-linecap="round""#, edge_color(e.ty));
        frame.line(&mut out, "dimer", (a.0 as f64, a.1 as f64), (b.0 as f64, b.1 as f64), &style);
    }
    out.push_str("</svg>\n");
    out
}
