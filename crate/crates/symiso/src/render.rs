//! SVG drawings of placed frameworks.
//!
//! Edges coloured `F₁` are drawn black and those coloured `F₂` gray. A
//! reflection's mirror is drawn as a dashed line; a rotation centre as a
//! cross. Exact coordinates are kept in `data-x`/`data-y` attributes.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use symiso_core::polynorm::{FacetClass, LinearIsometry, Point};
use symiso_core::{Coloring, IsometryClass, SymmetricGraph};

pub const SIZE: f64 = 800.0;
pub const MARGIN: f64 = 0.05 * SIZE;

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
    off_x: f64,
    off_y: f64,
}

impl Frame {
    fn new(points: &[(f64, f64)]) -> Self {
        let xs = points.iter().map(|p| p.0);
        let ys = points.iter().map(|p| p.1);
        let (min_x, max_x) = xs.fold((0.0f64, 0.0f64), |(a, b), x| (a.min(x), b.max(x)));
        let (min_y, max_y) = ys.fold((0.0f64, 0.0f64), |(a, b), y| (a.min(y), b.max(y)));
        let w = (max_x - min_x).max(1e-9);
        let h = (max_y - min_y).max(1e-9);
        let inner = SIZE - 2.0 * MARGIN;
        let scale = (inner / w).min(inner / h);
        Frame {
            min_x,
            max_y,
            scale,
            off_x: MARGIN + (inner - w * scale) / 2.0,
            off_y: MARGIN + (inner - h * scale) / 2.0,
        }
    }

    fn map(&self, p: (f64, f64)) -> (f64, f64) {
        (
            self.off_x + (p.0 - self.min_x) * self.scale,
            self.off_y + (self.max_y - p.1) * self.scale,
        )
    }
}

fn approx(p: &Point) -> (f64, f64) {
    (p.x.to_f64().unwrap_or(0.0), p.y.to_f64().unwrap_or(0.0))
}

// Direction fixed by a reflection.
fn mirror_direction(tau: &LinearIsometry) -> (f64, f64) {
    let m = &tau.matrix;
    let f = |i: usize, j: usize| m[i][j].to_f64().unwrap_or(0.0);
    let (a, b, c, d) = (f(0, 0) - 1.0, f(0, 1), f(1, 0), f(1, 1) - 1.0);
    let (x, y) = if a.abs() + b.abs() > 1e-12 {
        (-b, a)
    } else {
        (-d, c)
    };
    let len = (x * x + y * y).sqrt().max(1e-12);
    (x / len, y / len)
}

pub fn render_svg(
    sg: &SymmetricGraph,
    coords: &[Point],
    coloring: &Coloring,
    tau: Option<&LinearIsometry>,
) -> String {
    let pts: Vec<(f64, f64)> = coords.iter().map(approx).collect();
    let frame = Frame::new(&pts);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">
<rect width="100%" height="100%" fill="white"/>"#
    );
    if let Some(tau) = tau {
        let (cx, cy) = frame.map((0.0, 0.0));
        match tau.class {
            IsometryClass::ReflectionPreserving | IsometryClass::ReflectionSwapping => {
                let (dx, dy) = mirror_direction(tau);
                let r = 2.0 * SIZE;
                let _ = writeln!(
                    s,
                    r#"<line class="mirror" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-width="1.5" stroke-dasharray="8 6"/>"#,
                    cx - r * dx,
                    cy + r * dy,
                    cx + r * dx,
                    cy - r * dy
                );
            }
            IsometryClass::Identity => {}
            _ => {
                let _ = writeln!(
                    s,
                    r#"<path class="centre" d="M {:.3} {:.3} h 16 M {:.3} {:.3} v 16" stroke="black" stroke-width="2"/>"#,
                    cx - 8.0,
                    cy,
                    cx,
                    cy - 8.0
                );
            }
        }
    }
    for (&e, &c) in &coloring.classes {
        let (a, b) = (frame.map(pts[e.u()]), frame.map(pts[e.v()]));
        let (class, colour) = match c {
            FacetClass::F1 => ("tree1", "black"),
            FacetClass::F2 => ("tree2", "#9a9a9a"),
        };
        let _ = writeln!(
            s,
            r#"<line class="{class}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{colour}" stroke-width="4" stroke-linecap="round"/>"#,
            a.0, a.1, b.0, b.1
        );
    }
    for v in sg.graph().vertices() {
        let (x, y) = frame.map(pts[v]);
        let _ = writeln!(
            s,
            r#"<circle class="vertex" data-id="{v}" data-x="{}" data-y="{}" cx="{x:.3}" cy="{y:.3}" r="7" fill="white" stroke="black" stroke-width="2"/>"#,
            coords[v].x, coords[v].y
        );
    }
    s.push_str("</svg>\n");
    s
}
