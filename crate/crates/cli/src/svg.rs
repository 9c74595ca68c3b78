//! SVG 1.1 figures. Output depends only on the numbers passed in, with
//! fixed precision, so equal inputs give byte-equal files.

use std::fmt::Write;

use exwkb::borel::{PadeApproximant, SingularityForecast};
use exwkb::stokes::StokesGraph;
use num_complex::Complex64 as C;

const SIZE: f64 = 600.0;

struct Canvas {
    half: f64,
    out: String,
}

impl Canvas {
    fn new(half: f64, title: &str) -> Self {
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(out, "<title>{title}</title>");
        let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
        let mut c = Canvas { half, out };
        let (l, r) = (c.map(C::new(-half, 0.0)), c.map(C::new(half, 0.0)));
        let (b, t) = (c.map(C::new(0.0, -half)), c.map(C::new(0.0, half)));
        let _ = writeln!(
            c.out,
            r##"<path d="M{:.2} {:.2}H{:.2}M{:.2} {:.2}V{:.2}" stroke="#bbbbbb" stroke-width="1"/>"##,
            l.0, l.1, r.0, t.0, t.1, b.1
        );
        c
    }

    fn map(&self, z: C) -> (f64, f64) {
        let s = SIZE / (2.0 * self.half);
        (SIZE / 2.0 + z.re * s, SIZE / 2.0 - z.im * s)
    }

    fn polyline(&mut self, pts: &[C], color: &str, width: f64) {
        let mut d = String::new();
        for (i, z) in pts.iter().enumerate() {
            let (x, y) = self.map(*z);
            let _ = write!(d, "{}{:.2} {:.2}", if i == 0 { "M" } else { "L" }, x, y);
        }
        let _ = writeln!(self.out, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="{width}"/>"#);
    }

    fn dot(&mut self, z: C, r: f64, fill: &str, stroke: &str) {
        let (x, y) = self.map(z);
        let _ = writeln!(self.out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{fill}" stroke="{stroke}"/>"#);
    }

    fn square(&mut self, z: C, r: f64, stroke: &str) {
        let (x, y) = self.map(z);
        let _ = writeln!(
            self.out,
            r#"<rect x="{:.2}" y="{:.2}" width="{}" height="{}" fill="none" stroke="{stroke}"/>"#,
            x - r,
            y - r,
            2.0 * r,
            2.0 * r
        );
    }

    fn text(&mut self, z: C, s: &str, color: &str) {
        let (x, y) = self.map(z);
        let _ = writeln!(
            self.out,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="14" fill="{color}" text-anchor="middle">{s}</text>"#
        );
    }

    fn circle(&mut self, r: f64, stroke: &str) {
        let (x, y) = self.map(C::new(0.0, 0.0));
        let rr = r * SIZE / (2.0 * self.half);
        let _ = writeln!(
            self.out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{rr:.2}" fill="none" stroke="{stroke}" stroke-dasharray="4 3"/>"#
        );
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

/// Turning points, Stokes lines (finite ones in red) and sector labels with
/// their signatures.
pub fn stokes(g: &StokesGraph) -> String {
    let extent = g.locations().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let half = (2.0 * extent).max(2.0 * g.scale()).max(1.0);
    let mut c = Canvas::new(half, "Stokes graph");
    for line in &g.lines {
        let color = if line.is_finite() { "#c0392b" } else { "#2c3e80" };
        let pts: Vec<C> = line.polyline.iter().map(|z| clamp(*z, 1.2 * half)).collect();
        c.polyline(&pts, color, 1.5);
    }
    for tp in &g.turning_points.points {
        c.dot(tp.location, 4.0, "black", "black");
    }
    for s in &g.sectors {
        let sign = if s.signature > 0.0 { "+" } else { "−" };
        c.text(C::from_polar(0.8 * half, s.bisector()), &format!("{} ({sign})", s.index), "#1e6b30");
    }
    c.finish()
}

fn clamp(z: C, r: f64) -> C {
    if z.norm() > r {
        z * (r / z.norm())
    } else {
        z
    }
}

/// Padé poles in the Borel plane (filled: genuine, hollow: Froissart
/// doublets), forecast singularities as squares, the circle |s| = |ξ| and
/// the integration rays.
pub fn pole_map(p: &PadeApproximant, forecast: &SingularityForecast, rays: &[f64]) -> String {
    let reach = forecast.moving.norm().max(forecast.fixed.iter().map(|z| z.norm()).fold(0.0, f64::max));
    let half = (2.0 * reach).max(1e-3);
    let mut c = Canvas::new(half, "Borel plane");
    c.circle(forecast.moving.norm(), "#999999");
    for &th in rays {
        c.polyline(&[C::new(0.0, 0.0), C::from_polar(1.5 * half, th)], "#2c3e80", 1.0);
    }
    for (z, fd) in p.poles.iter().zip(&p.froissart) {
        if z.norm() > 1.5 * half {
            continue;
        }
        if *fd {
            c.dot(*z, 3.0, "none", "#888888");
        } else {
            c.dot(*z, 3.0, "#c0392b", "#c0392b");
        }
    }
    c.square(forecast.moving, 6.0, "#1e6b30");
    for z in &forecast.fixed {
        c.square(*z, 6.0, "#8e44ad");
    }
    c.finish()
}
