//! Trigonometry of small regular hyperbolic polygons and a conformal-disk
//! realization used for chords, crossings and angle measurements.
//!
//! Closed forms are the source of truth for corner and chord angles. The
//! embedding cross-checks them and locates crossings of diagonals.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for closed-form trigonometric identities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Tolerance for comparisons routed through embedded coordinates.
pub const EMBEDDING_TOL: f64 = 1e-6;

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

/// `acot` with range `(0, π)`, continuous through `x = 0`.
fn arccot(x: f64) -> f64 {
    1f64.atan2(x)
}

/// Largest radius for which two length-`n` diagonals sharing an endpoint in
/// a regular hyperbolic `(6n+1)`-gon still meet at an angle above `2π/3`:
/// `acosh(cot(nπ/(6n+1)) / √3)`.
pub fn r_max(n: u32) -> f64 {
    assert!(n >= 1, "r_max is defined for n >= 1");
    let n = f64::from(n);
    let arg = cot(n * PI / (6.0 * n + 1.0)) / 3f64.sqrt();
    assert!(arg > 1.0, "acosh argument {arg} must exceed 1");
    arg.acosh()
}

/// Base angle of `T(m, r)`: the isosceles triangle with apex `2π/m` and legs
/// `r`. Twice this is the corner angle of the regular `m`-gon of radius `r`.
pub fn base_angle_theta(r: f64, m: u32) -> f64 {
    assert!(m >= 3);
    arccot(r.cosh() * (PI / f64::from(m)).tan())
}

/// Angle at a boundary vertex between the radius and the chord to the vertex
/// at central angle `phi`, for a circle of radius `r`.
///
/// Signed in the rotational sense of `phi`: positive for `phi < π`, zero for
/// the diameter and negative beyond it, so the function decreases strictly
/// on `(0, 2π)`.
pub fn chord_angle_beta(r: f64, phi: f64) -> f64 {
    debug_assert!(phi > 0.0 && phi < TAU);
    (cot(phi / 2.0) / r.cosh()).atan()
}

/// Hyperbolic length of the chord subtending central angle `phi`.
pub fn chord_length(r: f64, phi: f64) -> f64 {
    2.0 * (r.sinh() * (phi / 2.0).sin()).asinh()
}

/// Side length of the regular `m`-gon of radius `r`.
pub fn edge_length_lambda(r: f64, m: u32) -> f64 {
    chord_length(r, TAU / f64::from(m))
}

/// A point of the open unit disk, read as the conformal model of `ℍ²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    pub x: f64,
    pub y: f64,
}

impl DiskPoint {
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(x * x + y * y < 1.0);
        Self { x, y }
    }

    pub const ORIGIN: DiskPoint = DiskPoint { x: 0.0, y: 0.0 };

    /// The point at hyperbolic distance `dist` from the origin in direction `angle`.
    pub fn polar(dist: f64, angle: f64) -> Self {
        let rho = (dist / 2.0).tanh();
        Self {
            x: rho * angle.cos(),
            y: rho * angle.sin(),
        }
    }

    pub fn z(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn from_z(z: Complex64) -> Self {
        Self { x: z.re, y: z.im }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn arg(self) -> f64 {
        self.y.atan2(self.x)
    }
}

/// Möbius map sending `p` to the origin; its derivative at `p` is a positive
/// real, so tangent directions at `p` are preserved.
fn to_origin(p: Complex64, z: Complex64) -> Complex64 {
    (z - p) / (Complex64::new(1.0, 0.0) - p.conj() * z)
}

fn from_origin(p: Complex64, w: Complex64) -> Complex64 {
    (w + p) / (Complex64::new(1.0, 0.0) + p.conj() * w)
}

pub fn distance(a: DiskPoint, b: DiskPoint) -> f64 {
    let q = to_origin(a.z(), b.z()).norm();
    2.0 * q.min(1.0 - 1e-16).atanh()
}

/// Direction (in disk coordinates) of the geodesic leaving `p` toward `q`.
pub fn direction_at(p: DiskPoint, q: DiskPoint) -> f64 {
    to_origin(p.z(), q.z()).arg()
}

/// The point at distance `t` from `a` along the geodesic toward `b`.
pub fn point_along(a: DiskPoint, b: DiskPoint, t: f64) -> DiskPoint {
    let w = to_origin(a.z(), b.z());
    let u = w / w.norm() * (t / 2.0).tanh();
    DiskPoint::from_z(from_origin(a.z(), u))
}

/// Signed side of `z` relative to the oriented geodesic `a → b`; zero on it.
pub fn side_of_geodesic(a: DiskPoint, b: DiskPoint, z: DiskPoint) -> f64 {
    let tb = to_origin(a.z(), b.z());
    let tz = to_origin(a.z(), z.z());
    (tb.conj() * tz).im / tb.norm()
}

/// Hyperbolic angle at `p` between the geodesics to `q1` and `q2`, in `[0, π]`.
pub fn angle_at(p: DiskPoint, q1: DiskPoint, q2: DiskPoint) -> f64 {
    let d = (direction_at(p, q1) - direction_at(p, q2)).rem_euclid(TAU);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

fn to_klein(p: DiskPoint) -> (f64, f64) {
    let s = 2.0 / (1.0 + p.x * p.x + p.y * p.y);
    (s * p.x, s * p.y)
}

fn from_klein(k: (f64, f64)) -> DiskPoint {
    let s = 1.0 + (1.0 - k.0 * k.0 - k.1 * k.1).max(0.0).sqrt();
    DiskPoint::new(k.0 / s, k.1 / s)
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum CrossError {
    #[error("geodesic segments share an endpoint")]
    SharedEndpoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub point: DiskPoint,
    /// Angle at the crossing between the directions toward `b1` and `b2`.
    pub angle: f64,
}

/// Interior intersection of the geodesic segments `a1–b1` and `a2–b2`.
///
/// Geodesics are straight in the projective (Klein) model, so the crossing
/// is a segment–segment intersection there, mapped back afterwards.
pub fn geodesic_cross(
    a1: DiskPoint,
    b1: DiskPoint,
    a2: DiskPoint,
    b2: DiskPoint,
) -> Result<Option<Crossing>, CrossError> {
    let close = |p: DiskPoint, q: DiskPoint| (p.x - q.x).hypot(p.y - q.y) < 1e-12;
    if close(a1, a2) || close(a1, b2) || close(b1, a2) || close(b1, b2) {
        return Err(CrossError::SharedEndpoint);
    }
    let (p, q) = (to_klein(a1), to_klein(b1));
    let (r, s) = (to_klein(a2), to_klein(b2));
    let d1 = (q.0 - p.0, q.1 - p.1);
    let d2 = (s.0 - r.0, s.1 - r.1);
    let denom = d1.0 * d2.1 - d1.1 * d2.0;
    if denom.abs() < 1e-300 {
        return Ok(None);
    }
    let w = (r.0 - p.0, r.1 - p.1);
    let t = (w.0 * d2.1 - w.1 * d2.0) / denom;
    let u = (w.0 * d1.1 - w.1 * d1.0) / denom;
    if t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0 {
        return Ok(None);
    }
    let point = from_klein((p.0 + t * d1.0, p.1 + t * d1.1));
    Ok(Some(Crossing {
        point,
        angle: angle_at(point, b1, b2),
    }))
}

/// Combinatorial crossing test for chords `(i1, j1)`, `(i2, j2)` of a cyclic
/// `n`-vertex boundary: true iff the endpoints interleave strictly.
pub fn chords_interleave(n: usize, (i1, j1): (usize, usize), (i2, j2): (usize, usize)) -> bool {
    let between = |a: usize, b: usize, x: usize| {
        let (a, b, x) = (a % n, b % n, x % n);
        let span = (b + n - a) % n;
        let off = (x + n - a) % n;
        off > 0 && off < span
    };
    if [i2, j2].iter().any(|&v| v % n == i1 % n || v % n == j1 % n) {
        return false;
    }
    between(i1, j1, i2) != between(i1, j1, j2)
}

/// A regular polygon centred at the origin with vertex `k` in direction `2πk/n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonEmbedding {
    pub n: usize,
    pub r: f64,
    pub vertices: Vec<DiskPoint>,
    pub center: DiskPoint,
}

pub fn embed_polygon(n: usize, r: f64) -> PolygonEmbedding {
    assert!(n >= 3 && r > 0.0);
    let vertices = (0..n)
        .map(|k| DiskPoint::polar(r, TAU * k as f64 / n as f64))
        .collect();
    PolygonEmbedding {
        n,
        r,
        vertices,
        center: DiskPoint::ORIGIN,
    }
}

/// Extremal configuration found by [`euclidean_min_internal_angle_config`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinAngleConfig {
    pub angle: f64,
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub shared_endpoint: bool,
    pub lengths: (usize, usize),
}

/// Minimal internal angle between crossing or endpoint-sharing diagonals of
/// length at most `⌊n/6⌋` in the regular Euclidean `(n+1)`-gon.
pub fn euclidean_min_internal_angle(n: usize) -> f64 {
    euclidean_min_internal_angle_config(n).angle
}

pub fn euclidean_min_internal_angle_config(n: usize) -> MinAngleConfig {
    assert!(n >= 6);
    let m = n + 1;
    let max_len = n / 6;
    let pt = |k: usize| {
        let a = TAU * k as f64 / m as f64;
        (a.cos(), a.sin())
    };
    let mut diagonals = Vec::new();
    for i in 0..m {
        for len in 1..=max_len {
            diagonals.push((i, (i + len) % m, len));
        }
    }
    let mut best: Option<MinAngleConfig> = None;
    for (a, &(i1, j1, l1)) in diagonals.iter().enumerate() {
        for &(i2, j2, l2) in &diagonals[a + 1..] {
            let shared = [i2, j2].iter().filter(|&&v| v == i1 || v == j1).count();
            let (p, rays) = if shared == 1 {
                let v = if i2 == i1 || i2 == j1 { i2 } else { j2 };
                let o1 = if v == i1 { j1 } else { i1 };
                let o2 = if v == i2 { j2 } else { i2 };
                (pt(v), vec![pt(o1), pt(o2)])
            } else if shared == 0 && chords_interleave(m, (i1, j1), (i2, j2)) {
                let (p1, q1, p2, q2) = (pt(i1), pt(j1), pt(i2), pt(j2));
                let d1 = (q1.0 - p1.0, q1.1 - p1.1);
                let d2 = (q2.0 - p2.0, q2.1 - p2.1);
                let den = d1.0 * d2.1 - d1.1 * d2.0;
                let t = ((p2.0 - p1.0) * d2.1 - (p2.1 - p1.1) * d2.0) / den;
                ((p1.0 + t * d1.0, p1.1 + t * d1.1), vec![p1, q1, p2, q2])
            } else {
                continue;
            };
            let angle = sector_toward_center(p, &rays);
            if best.is_none_or(|b| angle < b.angle - 1e-12) {
                best = Some(MinAngleConfig {
                    angle,
                    first: (i1, j1),
                    second: (i2, j2),
                    shared_endpoint: shared == 1,
                    lengths: (l1, l2),
                });
            }
        }
    }
    best.expect("a polygon with at least 7 vertices has adjacent edges")
}

/// Size of the angular sector at `p`, cut out by rays toward `targets`, that
/// contains the direction toward the origin.
fn sector_toward_center(p: (f64, f64), targets: &[(f64, f64)]) -> f64 {
    let mut dirs: Vec<f64> = targets
        .iter()
        .map(|t| (t.1 - p.1).atan2(t.0 - p.0).rem_euclid(TAU))
        .collect();
    dirs.sort_by(f64::total_cmp);
    let c = (-p.1).atan2(-p.0).rem_euclid(TAU);
    for w in 0..dirs.len() {
        let lo = dirs[w];
        let hi = if w + 1 < dirs.len() { dirs[w + 1] } else { dirs[0] + TAU };
        let cc = if c < lo { c + TAU } else { c };
        if cc > lo && cc < hi {
            return hi - lo;
        }
    }
    unreachable!("the center direction never lies on a short diagonal")
}

/// `π/2`, the limit of [`chord_angle_beta`] as the chord shrinks.
pub const TANGENT_LIMIT: f64 = FRAC_PI_2;
