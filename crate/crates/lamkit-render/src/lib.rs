//! Deterministic SVG rendering of portraits, dual trees, polygon orbits, and
//! the leaf length function.
//!
//! Determinism contract: identical inputs produce byte-identical documents.
//! Coordinates come from an in-crate sine/cosine (fixed-order IEEE
//! arithmetic, no libm) and are quantized to six decimals everywhere;
//! element emission order is construction order.

use std::fmt::Write as _;

use lamkit_core::angle::Angle;
use lamkit_core::chord::tau_fixed_points;
use lamkit_core::polygon::PolygonOrbit;
use lamkit_core::portrait::{CentralStrip, RegionKind, SiblingPortrait};
use lamkit_core::tree::PlaneBicoloredTree;
use lamkit_core::{rat, Rational};
use num::{ToPrimitive, Zero};

mod trig;

pub use trig::{cos_turns, sin_turns, sincos_turns};

const C_FILL: &str = "#bcd7f0";
const R_FILL: &str = "#f5d9b0";
const STRIP_STROKE: &str = "#c0392b";
const PALETTE: [&str; 6] = [
    "#bcd7f0", "#f5d9b0", "#c8e6c9", "#e1bee7", "#ffe0b2", "#d7ccc8",
];

/// Rendering options shared by all figures.
#[derive(Debug, Clone)]
pub struct RenderOptions {
    /// Canvas edge in pixels.
    pub size: u32,
    /// Margin around the unit circle in pixels.
    pub margin: f64,
    /// Label boundary angles with their reduced fractions.
    pub labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            size: 600,
            margin: 40.0,
            labels: true,
        }
    }
}

fn quantize(x: f64) -> String {
    // Fixed six decimals; -0.000000 normalizes to 0.000000.
    let mut s = format!("{x:.6}");
    if s == "-0.000000" {
        s = "0.000000".to_string();
    }
    s
}

/// A deterministic SVG document builder.
pub struct Scene {
    body: String,
}

impl Scene {
    pub fn new(size: u32) -> Scene {
        let mut body = String::new();
        let _ = writeln!(
            body,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
        );
        Scene { body }
    }

    fn push(&mut self, element: String) {
        self.body.push_str(&element);
        self.body.push('\n');
    }

    pub fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

/// Circle canvas: places angles on a centered circle.
struct Disk {
    cx: f64,
    cy: f64,
    r: f64,
}

impl Disk {
    fn new(opts: &RenderOptions) -> Disk {
        let half = opts.size as f64 / 2.0;
        Disk {
            cx: half,
            cy: half,
            r: half - opts.margin,
        }
    }

    fn point(&self, a: &Angle) -> (f64, f64) {
        self.point_scaled(a, 1.0)
    }

    fn point_scaled(&self, a: &Angle, scale: f64) -> (f64, f64) {
        let (c, s) = sincos_turns(a.as_rational());
        (self.cx + self.r * scale * c, self.cy - self.r * scale * s)
    }

    fn circle(&self, scene: &mut Scene) {
        scene.push(format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1.5\"/>",
            quantize(self.cx),
            quantize(self.cy),
            quantize(self.r)
        ));
    }

    fn line(&self, scene: &mut Scene, a: &Angle, b: &Angle, stroke: &str, width: f64) {
        let (x1, y1) = self.point(a);
        let (x2, y2) = self.point(b);
        scene.push(format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{}\"/>",
            quantize(x1),
            quantize(y1),
            quantize(x2),
            quantize(y2),
            quantize(width)
        ));
    }

    /// Path around a region bounded by circle arcs and chords: each arc is
    /// followed counterclockwise, then a straight edge runs to the next
    /// arc's start.
    fn region_path(&self, arcs: &[(Angle, Angle)]) -> String {
        let mut d = String::new();
        for (i, (start, end)) in arcs.iter().enumerate() {
            let (sx, sy) = self.point(start);
            let (ex, ey) = self.point(end);
            if i == 0 {
                let _ = write!(d, "M {} {} ", quantize(sx), quantize(sy));
            } else {
                let _ = write!(d, "L {} {} ", quantize(sx), quantize(sy));
            }
            let span = start.ccw_distance(end);
            let large = if span > rat(1, 2) { 1 } else { 0 };
            let _ = write!(
                d,
                "A {} {} 0 {} 0 {} {} ",
                quantize(self.r),
                quantize(self.r),
                large,
                quantize(ex),
                quantize(ey)
            );
        }
        d.push('Z');
        d
    }

    fn label(&self, scene: &mut Scene, a: &Angle, text: &str) {
        let (x, y) = self.point_scaled(a, 1.07);
        scene.push(format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" font-family=\"monospace\" text-anchor=\"middle\" dominant-baseline=\"middle\">{text}</text>",
            quantize(x),
            quantize(y)
        ));
    }
}

fn dot(scene: &mut Scene, x: f64, y: f64, r: f64, fill: &str) {
    scene.push(format!(
        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>",
        quantize(x),
        quantize(y),
        quantize(r)
    ));
}

/// Portrait figure: shaded C/R regions, straight chords, outlined central
/// strip, fraction labels on the preimage endpoints.
pub fn render_portrait(
    portrait: &SiblingPortrait,
    strip: Option<&CentralStrip>,
    opts: &RenderOptions,
) -> String {
    let mut scene = Scene::new(opts.size);
    let disk = Disk::new(opts);
    for region in &portrait.regions {
        let fill = match region.kind {
            RegionKind::C => C_FILL,
            RegionKind::R => R_FILL,
        };
        scene.push(format!(
            "<path d=\"{}\" fill=\"{fill}\" stroke=\"none\"/>",
            disk.region_path(&region.arcs)
        ));
    }
    disk.circle(&mut scene);
    for leaf in portrait.collection.leaves() {
        let (a, b) = leaf.endpoints();
        disk.line(&mut scene, a, b, "#333333", 1.5);
    }
    if let Some(strip) = strip {
        for component in &strip.components {
            scene.push(format!(
                "<path d=\"{}\" fill=\"none\" stroke=\"{STRIP_STROKE}\" stroke-width=\"2.5\"/>",
                disk.region_path(&component.arcs)
            ));
        }
    }
    if opts.labels {
        for point in portrait.collection.points() {
            disk.label(&mut scene, &point.angle, &point.angle.to_string());
        }
    }
    scene.finish()
}

/// Orbit figure: each polygon of the orbit filled from a fixed palette.
pub fn render_orbit(orbit: &PolygonOrbit, opts: &RenderOptions) -> String {
    let mut scene = Scene::new(opts.size);
    let disk = Disk::new(opts);
    disk.circle(&mut scene);
    for (i, polygon) in orbit.polygons.iter().enumerate() {
        let fill = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        for (j, v) in polygon.vertices().iter().enumerate() {
            let (x, y) = disk.point(v);
            let _ = write!(
                d,
                "{} {} {} ",
                if j == 0 { "M" } else { "L" },
                quantize(x),
                quantize(y)
            );
        }
        d.push('Z');
        scene.push(format!(
            "<path d=\"{d}\" fill=\"{fill}\" fill-opacity=\"0.6\" stroke=\"#333333\" stroke-width=\"1.2\"/>"
        ));
    }
    if opts.labels {
        for v in orbit.polygons.first().map(|p| p.vertices()).unwrap_or(&[]) {
            disk.label(&mut scene, v, &v.to_string());
        }
    }
    scene.finish()
}

/// Multi-orbit sheet; an empty list still yields a valid document.
pub fn render_orbits(orbits: &[PolygonOrbit], opts: &RenderOptions) -> String {
    match orbits.first() {
        Some(orbit) => render_orbit(orbit, opts),
        None => {
            let mut scene = Scene::new(opts.size);
            Disk::new(opts).circle(&mut scene);
            scene.finish()
        }
    }
}

/// Dual-tree figure: radial layout from vertex 0, C/R vertices as filled
/// circles joined by straight edges.
pub fn render_tree(tree: &PlaneBicoloredTree, opts: &RenderOptions) -> String {
    let n = tree.vertex_count();
    let mut depth = vec![usize::MAX; n];
    let mut span: Vec<(Rational, Rational)> = vec![(rat(0, 1), rat(1, 1)); n];
    depth[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut max_depth = 0;
    while let Some(v) = queue.pop_front() {
        let children: Vec<usize> = tree.rotations()[v]
            .iter()
            .map(|&e| {
                let (a, b) = tree.edges()[e];
                if a == v {
                    b
                } else {
                    a
                }
            })
            .filter(|&w| depth[w] == usize::MAX)
            .collect();
        let (lo, hi) = span[v].clone();
        let count = children.len().max(1) as i64;
        let step = (&hi - &lo) / rat(count, 1);
        for (i, w) in children.iter().enumerate() {
            depth[*w] = depth[v] + 1;
            max_depth = max_depth.max(depth[*w]);
            let a = &lo + &step * rat(i as i64, 1);
            let b = &a + &step;
            span[*w] = (a, b);
            queue.push_back(*w);
        }
    }
    let half = opts.size as f64 / 2.0;
    let radius_unit = (half - opts.margin) / max_depth.max(1) as f64;
    let pos = |v: usize| -> (f64, f64) {
        let (lo, hi) = &span[v];
        let turns = (lo + hi) / rat(2, 1);
        let r = radius_unit * depth[v] as f64;
        let (c, s) = sincos_turns(&turns);
        (half + r * c, half - r * s)
    };
    let mut scene = Scene::new(opts.size);
    for &(a, b) in tree.edges() {
        let (x1, y1) = pos(a);
        let (x2, y2) = pos(b);
        scene.push(format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#555555\" stroke-width=\"1.5\"/>",
            quantize(x1),
            quantize(y1),
            quantize(x2),
            quantize(y2)
        ));
    }
    for v in 0..n {
        let (x, y) = pos(v);
        let (fill, tag) = match tree.colors()[v] {
            RegionKind::C => (C_FILL, "C"),
            RegionKind::R => (R_FILL, "R"),
        };
        scene.push(format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"12\" fill=\"{fill}\" stroke=\"#333333\" stroke-width=\"1.2\"/>",
            quantize(x),
            quantize(y)
        ));
        scene.push(format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" font-family=\"monospace\" text-anchor=\"middle\" dominant-baseline=\"middle\">{tag}</text>",
            quantize(x),
            quantize(y)
        ));
    }
    scene.finish()
}

/// Graph of the leaf length function on `[0, 1/2]`: the polyline passes
/// through every breakpoint `i/(2d)` exactly, the identity line is drawn
/// for reference, and fixed points are marked.
pub fn render_tau(d: u32, samples_per_unit: u32, opts: &RenderOptions) -> String {
    let mut scene = Scene::new(opts.size);
    let size = opts.size as f64;
    let m = opts.margin;
    let plot = size - 2.0 * m;
    let to_px = |x: &Rational, y: &Rational| -> (f64, f64) {
        let fx = x.to_f64().unwrap_or(0.0) * 2.0;
        let fy = y.to_f64().unwrap_or(0.0) * 2.0;
        (m + plot * fx, size - m - plot * fy)
    };
    scene.push(format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>",
        quantize(m),
        quantize(m),
        quantize(plot),
        quantize(plot)
    ));
    let (ix1, iy1) = to_px(&rat(0, 1), &rat(0, 1));
    let (ix2, iy2) = to_px(&rat(1, 2), &rat(1, 2));
    scene.push(format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#aaaaaa\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>",
        quantize(ix1),
        quantize(iy1),
        quantize(ix2),
        quantize(iy2)
    ));
    let mut xs: Vec<Rational> = tau_breakpoints(d);
    let extra = samples_per_unit.max(2) as i64;
    for i in 0..=extra {
        xs.push(rat(i, 2 * extra));
    }
    xs.sort();
    xs.dedup();
    let mut path = String::new();
    for (i, x) in xs.iter().enumerate() {
        let y = lamkit_core::chord::tau(d, x).expect("x in [0, 1/2]");
        let (px, py) = to_px(x, &y);
        let _ = write!(
            path,
            "{} {} {} ",
            if i == 0 { "M" } else { "L" },
            quantize(px),
            quantize(py)
        );
    }
    scene.push(format!(
        "<path d=\"{}\" fill=\"none\" stroke=\"#2c5f8a\" stroke-width=\"2\"/>",
        path.trim_end()
    ));
    for fixed in tau_fixed_points(d) {
        let (px, py) = to_px(&fixed, &fixed);
        dot(&mut scene, px, py, 4.0, STRIP_STROKE);
        if opts.labels && !fixed.is_zero() {
            scene.push(format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"11\" font-family=\"monospace\" text-anchor=\"start\" dominant-baseline=\"middle\">{fixed}</text>",
                quantize(px + 8.0),
                quantize(py)
            ));
        }
    }
    scene.finish()
}

/// Breakpoints `i/(2d)` of the leaf length function.
pub fn tau_breakpoints(d: u32) -> Vec<Rational> {
    (0..=d).map(|i| rat(i as i64, 2 * d as i64)).collect()
}
