//! Standalone SVG figures: discs with fold segments, link graphs, and the
//! diagonal fan of a regular polygon.

use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use sccat::hypgeom::{embed_polygon, euclidean_min_internal_angle_config, DiskPoint};
use sccat::linkcert::{LinkGraph, Pipeline};
use sccat::words::Presentation;

const SIZE: f64 = 1000.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

pub struct Svg {
    body: String,
}

impl Default for Svg {
    fn default() -> Self {
        Self::new()
    }
}

impl Svg {
    pub fn new() -> Self {
        Svg { body: String::new() }
    }

    pub fn raw(&mut self, s: &str) {
        self.body.push_str(s);
        self.body.push('\n');
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, s: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-size="{size}" font-family="sans-serif" text-anchor="middle">{}</text>"#,
            escape(s)
        );
    }

    pub fn circle(&mut self, x: f64, y: f64, r: f64, style: &str) {
        let _ = writeln!(self.body, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" {style}/>"#);
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), style: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {style}/>"#,
            a.0, a.1, b.0, b.1
        );
    }

    pub fn path(&mut self, d: &str, style: &str) {
        let _ = writeln!(self.body, r#"<path d="{d}" {style}/>"#);
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIZE} {SIZE}\" width=\"{SIZE}\" height=\"{SIZE}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Maps conformal-disk coordinates into a square cell of the canvas.
#[derive(Clone, Copy, Debug)]
pub struct Frame {
    pub cx: f64,
    pub cy: f64,
    pub scale: f64,
}

impl Frame {
    pub fn map(&self, p: DiskPoint) -> (f64, f64) {
        (self.cx + self.scale * p.x, self.cy - self.scale * p.y)
    }

    /// Path command continuing from `a` along the geodesic to `b`: a circular
    /// arc orthogonal to the unit circle, or a straight line through the origin.
    pub fn geodesic_to(&self, a: DiskPoint, b: DiskPoint) -> String {
        let (bx, by) = self.map(b);
        let cross = a.x * b.y - a.y * b.x;
        let Some((c, radius)) = orthogonal_circle(a, b).filter(|_| cross.abs() > 1e-12) else {
            return format!("L {bx:.3} {by:.3}");
        };
        let (ax, ay) = self.map(a);
        let (ccx, ccy) = self.map(c);
        let turn = (ax - ccx) * (by - ccy) - (ay - ccy) * (bx - ccx);
        let sweep = u8::from(turn > 0.0);
        let r = radius * self.scale;
        format!("A {r:.3} {r:.3} 0 0 {sweep} {bx:.3} {by:.3}")
    }

    pub fn geodesic(&self, a: DiskPoint, b: DiskPoint) -> String {
        let (ax, ay) = self.map(a);
        format!("M {ax:.3} {ay:.3} {}", self.geodesic_to(a, b))
    }
}

/// Centre and radius of the circle through `a` and `b` orthogonal to the
/// unit circle (it also passes through the inversion of `a`).
pub fn orthogonal_circle(a: DiskPoint, b: DiskPoint) -> Option<(DiskPoint, f64)> {
    let (p, q) = if a.norm() > b.norm() { (a, b) } else { (b, a) };
    let n2 = p.x * p.x + p.y * p.y;
    if n2 < 1e-24 {
        return None;
    }
    let s = DiskPoint {
        x: p.x / n2,
        y: p.y / n2,
    };
    let d = 2.0 * (p.x * (q.y - s.y) + q.x * (s.y - p.y) + s.x * (p.y - q.y));
    if d.abs() < 1e-15 {
        return None;
    }
    let sq = |z: DiskPoint| z.x * z.x + z.y * z.y;
    let ux = (sq(p) * (q.y - s.y) + sq(q) * (s.y - p.y) + sq(s) * (p.y - q.y)) / d;
    let uy = (sq(p) * (s.x - q.x) + sq(q) * (p.x - s.x) + sq(s) * (q.x - p.x)) / d;
    let c = DiskPoint { x: ux, y: uy };
    let r = (p.x - ux).hypot(p.y - uy);
    Some((c, r))
}

fn grid(n: usize) -> (usize, f64) {
    let cols = (n as f64).sqrt().ceil().max(1.0) as usize;
    (cols, SIZE / cols as f64)
}

fn cell_frame(i: usize, cols: usize, cell: f64, r: f64) -> Frame {
    let (row, col) = (i / cols, i % cols);
    Frame {
        cx: cell * (col as f64 + 0.5),
        cy: cell * (row as f64 + 0.5) + 10.0,
        scale: 0.38 * cell / (r / 2.0).tanh(),
    }
}

/// Discs drawn as regular `g_i`-gons of radius `r`; with `folds` the two
/// segments of each fold share a colour, otherwise every distinct diagonal is
/// drawn and interior link points are marked.
pub fn discs_svg(p: &Presentation, pipe: &Pipeline, folds: bool) -> String {
    let mut svg = Svg::new();
    let (cols, cell) = grid(pipe.discs.len());
    for (i, disc) in pipe.discs.iter().enumerate() {
        let frame = cell_frame(i, cols, cell, disc.r);
        let poly = embed_polygon(disc.g_i, disc.r);
        let v = &poly.vertices;
        let mut d = {
            let (x, y) = frame.map(v[0]);
            format!("M {x:.3} {y:.3}")
        };
        for k in 0..disc.g_i {
            d.push(' ');
            d.push_str(&frame.geodesic_to(v[k], v[(k + 1) % disc.g_i]));
        }
        svg.path(&(d + " Z"), r##"fill="#f4f4f4" stroke="black" stroke-width="2""##);
        let r = p.relators[disc.relator_index].letters();
        for k in 0..disc.g_i {
            let mid = DiskPoint::polar(disc.r * 1.08, TAU * (k as f64 + 0.5) / disc.g_i as f64);
            let (x, y) = frame.map(mid);
            svg.text(x, y + 4.0, 12.0, &p.generator_names[r[k].generator_id].clone().to_string());
            if r[k].inverted {
                svg.text(x + 8.0, y - 2.0, 9.0, "-1");
            }
            let (vx, vy) = frame.map(v[k]);
            svg.circle(vx, vy, 4.0, r#"fill="black""#);
        }
        let (cx, cy) = frame.map(poly.center);
        svg.circle(cx, cy, 3.0, r#"fill="gray""#);
        svg.text(cx, cell * ((i / cols) as f64 + 1.0) - 4.0, 14.0, &format!("R{} (g_i = {}, g = {})", i + 1, disc.g_i, disc.g));
        if folds {
            for (fi, f) in pipe.folds.folds.iter().enumerate() {
                let colour = PALETTE[fi % PALETTE.len()];
                for side in [&f.a, &f.b] {
                    if side.segment.disc != i {
                        continue;
                    }
                    let s = side.segment;
                    let at = |j: usize| v[(s.start + j) % disc.g_i];
                    let mut d = frame.geodesic(at(s.k), at(0));
                    for j in 0..s.k {
                        d.push(' ');
                        d.push_str(&frame.geodesic_to(at(j), at(j + 1)));
                    }
                    svg.path(
                        &(d + " Z"),
                        &format!(r#"fill="{colour}" fill-opacity="0.25" stroke="{colour}" stroke-width="2""#),
                    );
                }
            }
        } else {
            for &(start, k) in &pipe.folds.diagonals[i] {
                let d = frame.geodesic(v[start % disc.g_i], v[(start + k) % disc.g_i]);
                svg.path(&d, r##"fill="none" stroke="#d62728" stroke-width="1.5""##);
            }
            for class in &pipe.classes {
                for pt in class.points.iter().filter(|pt| pt.disc == i) {
                    let angle = pt.psi * disc.g as f64 / disc.g_i as f64;
                    let (x, y) = frame.map(DiskPoint::polar(pt.rho, angle));
                    svg.circle(x, y, 3.5, r##"fill="#2ca02c""##);
                }
            }
        }
    }
    svg.finish()
}

fn graph_panel(svg: &mut Svg, g: &LinkGraph, cx: f64, cy: f64, radius: f64, title: &str) {
    let n = g.vertices.len().max(1);
    let pos: Vec<(f64, f64)> = (0..g.vertices.len())
        .map(|i| {
            let a = PI / 2.0 - TAU * i as f64 / n as f64;
            (cx + radius * a.cos(), cy - radius * a.sin())
        })
        .collect();
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for e in &g.edges {
        let key = (e.u.min(e.v), e.u.max(e.v));
        let rank = seen.iter().filter(|&&k| k == key).count() as f64;
        seen.push(key);
        let (a, b) = (pos[e.u], pos[e.v]);
        let style = r##"fill="none" stroke="#1f77b4" stroke-width="1.5""##;
        if e.u == e.v {
            let (dx, dy) = (a.0 - cx, a.1 - cy);
            let len = dx.hypot(dy).max(1.0);
            let r = 12.0 + 6.0 * rank;
            svg.circle(a.0 + dx / len * r, a.1 + dy / len * r, r, style);
            continue;
        }
        let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
        let (nx, ny) = (b.1 - a.1, a.0 - b.0);
        let len = nx.hypot(ny).max(1.0);
        let bend = 18.0 * rank * if (rank as usize).is_multiple_of(2) { 1.0 } else { -1.0 };
        let ctrl = (mid.0 + nx / len * bend, mid.1 + ny / len * bend);
        svg.path(
            &format!("M {:.2} {:.2} Q {:.2} {:.2} {:.2} {:.2}", a.0, a.1, ctrl.0, ctrl.1, b.0, b.1),
            style,
        );
        svg.text(ctrl.0, ctrl.1, 9.0, &format!("{:.3}", e.weight));
    }
    for (i, &(x, y)) in pos.iter().enumerate() {
        svg.circle(x, y, 5.0, r#"fill="black""#);
        let (dx, dy) = (x - cx, y - cy);
        let len = dx.hypot(dy).max(1.0);
        svg.text(x + dx / len * 22.0, y + dy / len * 22.0 + 4.0, 11.0, &g.vertices[i]);
    }
    svg.text(cx, cy + radius + 70.0, 16.0, title);
}

/// The type-1 link before folding (corners only) and after folding and smoothing.
pub fn links_svg(pipe: &Pipeline) -> String {
    let mut svg = Svg::new();
    let t1 = &pipe.type1;
    graph_panel(
        &mut svg,
        &t1.intermediate,
        250.0,
        450.0,
        180.0,
        &format!("corners ({} edges)", t1.intermediate.edges.len()),
    );
    let girth = if t1.girth.length.is_finite() {
        format!("{:.6}", t1.girth.length)
    } else {
        "∞".to_string()
    };
    graph_panel(
        &mut svg,
        &t1.smoothed,
        750.0,
        450.0,
        180.0,
        &format!("folded and smoothed, girth {girth}"),
    );
    svg.line((500.0, 200.0), (500.0, 700.0), r#"stroke="gray" stroke-dasharray="4 4""#);
    svg.text(500.0, 60.0, 20.0, "link of the vertex of the 1-skeleton");
    svg.finish()
}

/// Regular Euclidean `m`-gon with all diagonals of length at most `k`,
/// the fan from vertex 0, and the extremal pair of diagonals highlighted.
pub fn demo_svg(m: usize, k: usize) -> String {
    let mut svg = Svg::new();
    let c = (500.0, 500.0);
    let rad = 420.0;
    let pt = |v: usize| {
        let a = TAU * v as f64 / m as f64;
        (c.0 + rad * a.cos(), c.1 - rad * a.sin())
    };
    let mut d = format!("M {:.2} {:.2}", pt(0).0, pt(0).1);
    for v in 1..=m {
        let p = pt(v % m);
        let _ = write!(d, " L {:.2} {:.2}", p.0, p.1);
    }
    svg.path(&d, r#"fill="none" stroke="black" stroke-width="2""#);
    for v in 0..m {
        for len in 2..=k.min(m / 2) {
            svg.line(pt(v), pt(v + len), r##"stroke="#cccccc" stroke-width="1""##);
        }
    }
    for len in 2..=k.min(m / 2) {
        svg.line(pt(0), pt(len), r##"stroke="#1f77b4" stroke-width="2""##);
        svg.line(pt(0), pt(m - len), r##"stroke="#1f77b4" stroke-width="2""##);
    }
    for v in 0..m {
        let (x, y) = pt(v);
        svg.circle(x, y, 4.0, r#"fill="black""#);
    }
    if m >= 7 && k == (m - 1) / 6 {
        let cfg = euclidean_min_internal_angle_config(m - 1);
        for (a, b) in [cfg.first, cfg.second] {
            svg.line(pt(a), pt(b), r##"stroke="#d62728" stroke-width="3""##);
        }
        svg.text(
            500.0,
            970.0,
            18.0,
            &format!("extremal angle {:.4} rad ({:.2}°)", cfg.angle, cfg.angle.to_degrees()),
        );
    }
    svg.text(500.0, 40.0, 20.0, &format!("regular {m}-gon, diagonals of length ≤ {k}"));
    svg.finish()
}
