//! Links of vertices coming from interior points of discs.
//!
//! A point `v_i` in the interior of disc `D_i` has a round link circle `C_i`.
//! Directions are measured relative to the outward radial direction at `v_i`,
//! which every fold isometry preserves up to orientation: a fold maps `ω` to
//! `σω` with `σ = ±1`.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::graph::{girth, Girth, LinkGraph};
use super::LinkError;
use crate::complexfold::{Disc, FoldSchedule, MetricParams, UnionFind};
use crate::hypgeom::{
    chords_interleave, direction_at, distance, geodesic_cross, point_along, side_of_geodesic,
    DiskPoint,
};

const POINT_TOL: f64 = 1e-9;
const SIDE_TOL: f64 = 1e-9;
const ANGLE_TOL: f64 = 1e-9;
const MAX_CLASS_SIZE: usize = 20_000;
const MAX_BREAKPOINTS: usize = 200_000;

/// A point in the interior of a disc, in polar form about its centre.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscPoint {
    pub disc: usize,
    /// Hyperbolic distance from the centre.
    pub rho: f64,
    /// Cone direction, in `[0, g_i·2π/g)`.
    pub psi: f64,
}

impl DiscPoint {
    fn same(&self, other: &DiscPoint, cone: f64) -> bool {
        if self.disc != other.disc || (self.rho - other.rho).abs() > POINT_TOL {
            return false;
        }
        let d = (self.psi - other.psi).rem_euclid(cone);
        d.min(cone - d) * self.rho.max(1e-3) < POINT_TOL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    /// Lies on two crossing diagonals of some disc.
    Crossing,
    /// Lies on identified diagonals but on no crossing.
    Diagonal,
}

/// An isometric identification between the link circles of two members.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gluing {
    pub from: usize,
    pub to: usize,
    /// `+1` if the fold preserves orientation.
    pub sigma: i8,
    /// Start of the glued half-circle at `from`; `None` glues the whole circle.
    pub arc: Option<f64>,
}

/// All disc points that become one vertex of the folded complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorPointClass {
    pub kind: PointKind,
    pub points: Vec<DiscPoint>,
    pub gluings: Vec<Gluing>,
    /// Half-circle starts on the segment side of every diagonal through each point.
    pub arcs: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug)]
struct SideGeom {
    disc: usize,
    start: usize,
    k: usize,
    inverted: bool,
}

#[derive(Clone, Copy, Debug)]
struct SidePair {
    this: SideGeom,
    other: SideGeom,
}

struct Geometry<'a> {
    discs: &'a [Disc],
    r: f64,
    g: usize,
    by_disc: Vec<Vec<SidePair>>,
}

enum Location {
    Interior,
    OnDiagonal { omega: f64 },
}

fn norm_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y >= TAU {
        0.0
    } else {
        y
    }
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Whether `x` lies in the closed half-circle `[a, a + π]`.
fn in_half(a: f64, x: f64) -> bool {
    let d = (x - a).rem_euclid(TAU);
    d <= PI + ANGLE_TOL || d >= TAU - ANGLE_TOL
}

impl<'a> Geometry<'a> {
    fn new(fs: &FoldSchedule, discs: &'a [Disc], mp: &MetricParams) -> Self {
        let mut by_disc = vec![Vec::new(); discs.len()];
        for f in &fs.folds {
            let geom = |s: &crate::complexfold::FoldSide| SideGeom {
                disc: s.segment.disc,
                start: s.segment.start,
                k: s.segment.k,
                inverted: s.occurrence.inverted,
            };
            let (a, b) = (geom(&f.a), geom(&f.b));
            by_disc[a.disc].push(SidePair { this: a, other: b });
            by_disc[b.disc].push(SidePair { this: b, other: a });
        }
        Geometry {
            discs,
            r: mp.r,
            g: mp.g,
            by_disc,
        }
    }

    fn width(&self, k: usize) -> f64 {
        TAU * k as f64 / self.g as f64
    }

    fn cone(&self, d: usize) -> f64 {
        self.discs[d].cone_angle()
    }

    /// Chart offset of `q` from the start direction of a segment, in
    /// `(-(cone - π), π]` style: directions just behind the start go negative.
    fn chart_delta(&self, q: &DiscPoint, s: &SideGeom) -> f64 {
        let cone = self.cone(s.disc);
        let base = self.discs[s.disc].vertex_direction(s.start as f64);
        let mut d = (q.psi - base).rem_euclid(cone);
        if d > cone - PI {
            d -= cone;
        }
        d
    }

    fn locate(&self, q: &DiscPoint, s: &SideGeom) -> Option<(f64, Location)> {
        let w = self.width(s.k);
        let delta = self.chart_delta(q, s);
        if delta <= 1e-12 || delta >= w - 1e-12 {
            return None;
        }
        let z = DiskPoint::polar(q.rho, delta);
        let v0 = DiskPoint::polar(self.r, 0.0);
        let vk = DiskPoint::polar(self.r, w);
        let side = side_of_geodesic(v0, vk, z);
        if side.abs() < SIDE_TOL {
            let omega = norm_angle(direction_at(z, vk) - delta);
            Some((delta, Location::OnDiagonal { omega }))
        } else if side < 0.0 {
            Some((delta, Location::Interior))
        } else {
            None
        }
    }

    fn transport(&self, q: &DiscPoint, pair: &SidePair, delta: f64) -> DiscPoint {
        let w = self.width(pair.this.k);
        let std = if pair.this.inverted { w - delta } else { delta };
        let d2 = if pair.other.inverted { w - std } else { std };
        let o = pair.other;
        let base = self.discs[o.disc].vertex_direction(o.start as f64);
        DiscPoint {
            disc: o.disc,
            rho: q.rho,
            psi: (base + d2).rem_euclid(self.cone(o.disc)),
        }
    }

    fn point_in_chart(&self, d: usize, base_vertex: usize, z: DiskPoint) -> DiscPoint {
        let base = self.discs[d].vertex_direction(base_vertex as f64);
        let rho = 2.0 * z.norm().atanh();
        DiscPoint {
            disc: d,
            rho,
            psi: (base + z.arg()).rem_euclid(self.cone(d)),
        }
    }

    /// Offset from vertex `from` to `to`, taken in `(-g_i/2, g_i/2]`.
    fn signed_offset(&self, d: usize, from: usize, to: usize) -> isize {
        let n = self.discs[d].g_i as isize;
        let o = (to as isize - from as isize).rem_euclid(n);
        if o > n / 2 {
            o - n
        } else {
            o
        }
    }

    fn chart_point(&self, offset: isize) -> DiskPoint {
        DiskPoint::polar(self.r, TAU * offset as f64 / self.g as f64)
    }

    /// Crossing of two interleaving chords on disc `d`, in the chart of `c1`.
    fn crossing(&self, d: usize, c1: (usize, usize), c2: (usize, usize)) -> Option<DiskPoint> {
        let o = self.signed_offset(d, c1.0, c2.0);
        let a1 = self.chart_point(0);
        let b1 = self.chart_point(c1.1 as isize);
        let a2 = self.chart_point(o);
        let b2 = self.chart_point(o + c2.1 as isize);
        geodesic_cross(a1, b1, a2, b2).ok().flatten().map(|c| c.point)
    }
}

/// Follows every fold through `seed`, returning the full class.
fn close_class(geo: &Geometry, seed: DiscPoint, kind: PointKind) -> Result<InteriorPointClass, LinkError> {
    let mut points = vec![seed];
    let mut gluings = Vec::new();
    let mut arcs: Vec<Vec<f64>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let q = points[i];
        for pair in &geo.by_disc[q.disc] {
            let Some((delta, loc)) = geo.locate(&q, &pair.this) else {
                continue;
            };
            let image = geo.transport(&q, pair, delta);
            let cone = geo.cone(image.disc);
            let j = match points.iter().position(|x| x.same(&image, cone)) {
                Some(j) => j,
                None => {
                    if points.len() >= MAX_CLASS_SIZE {
                        return Err(LinkError::ClassTooLarge(MAX_CLASS_SIZE));
                    }
                    points.push(image);
                    arcs.push(Vec::new());
                    queue.push_back(points.len() - 1);
                    points.len() - 1
                }
            };
            let sigma = if pair.this.inverted == pair.other.inverted { 1 } else { -1 };
            let arc = match loc {
                Location::Interior => None,
                Location::OnDiagonal { omega } => {
                    let a = if (-omega).rem_euclid(TAU) < PI {
                        omega
                    } else {
                        norm_angle(omega + PI)
                    };
                    if !arcs[i].iter().any(|&b| circ_dist(a, b) < ANGLE_TOL) {
                        arcs[i].push(a);
                    }
                    Some(a)
                }
            };
            gluings.push(Gluing {
                from: i,
                to: j,
                sigma,
                arc,
            });
        }
    }
    Ok(InteriorPointClass {
        kind,
        points,
        gluings,
        arcs,
    })
}

/// Chord instances `(disc, start, k)` and how folds carry them onto each other.
fn chord_seeds(geo: &Geometry, fs: &FoldSchedule) -> Vec<(DiscPoint, PointKind)> {
    let mut chords: Vec<(usize, usize, usize)> = Vec::new();
    for (d, diags) in fs.diagonals.iter().enumerate() {
        for &(s, k) in diags {
            if k >= 2 {
                chords.push((d, s, k));
            }
        }
    }
    let mut seen: std::collections::HashMap<(usize, usize, usize), (usize, bool)> =
        Default::default();
    let mut seeds = Vec::new();
    for &root in &chords {
        if seen.contains_key(&root) {
            continue;
        }
        let comp_id = seen.len();
        seen.insert(root, (comp_id, false));
        let mut queue = VecDeque::from([(root, false)]);
        let mut members = Vec::new();
        while let Some((c, flip)) = queue.pop_front() {
            members.push((c, flip));
            let (d, s, k) = c;
            let g_i = geo.discs[d].g_i;
            for pair in &geo.by_disc[d] {
                let t = pair.this;
                let a0 = (s + g_i - t.start) % g_i;
                if a0 + k > t.k {
                    continue;
                }
                let to_piece = |a: usize| if t.inverted { t.k - a } else { a };
                let o = pair.other;
                let from_piece = |j: usize| if o.inverted { o.k - j } else { j };
                let b0 = from_piece(to_piece(a0));
                let b1 = from_piece(to_piece(a0 + k));
                let g_o = geo.discs[o.disc].g_i;
                let image = (o.disc, (o.start + b0.min(b1)) % g_o, k);
                let image_flip = flip ^ (b0 > b1);
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(image) {
                    e.insert((comp_id, image_flip));
                    queue.push_back((image, image_flip));
                }
            }
        }
        let chord_len = distance(geo.chart_point(0), geo.chart_point(root.2 as isize));
        let mut params = Vec::new();
        for &((d, s, k), flip) in &members {
            for &(s2, k2) in &fs.diagonals[d] {
                if k2 < 2 || !chords_interleave(geo.discs[d].g_i, (s, s + k), (s2, s2 + k2)) {
                    continue;
                }
                if let Some(z) = geo.crossing(d, (s, k), (s2, k2)) {
                    let t = distance(geo.chart_point(0), z);
                    params.push(if flip { chord_len - t } else { t });
                }
            }
        }
        params.sort_by(f64::total_cmp);
        params.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let a = geo.chart_point(0);
        let b = geo.chart_point(root.2 as isize);
        let mut prev = 0.0;
        for &t in params.iter().chain(std::iter::once(&chord_len)) {
            let mid = 0.5 * (prev + t);
            seeds.push((geo.point_in_chart(root.0, root.1, point_along(a, b, mid)), PointKind::Diagonal));
            if t < chord_len {
                seeds.push((geo.point_in_chart(root.0, root.1, point_along(a, b, t)), PointKind::Crossing));
            }
            prev = t;
        }
    }
    seeds
}

/// Every vertex of the folded complex that comes from the interior of a disc
/// and lies on at least one fold diagonal, grouped into classes.
pub fn enumerate_interior_points(
    fs: &FoldSchedule,
    discs: &[Disc],
    mp: &MetricParams,
) -> Result<Vec<InteriorPointClass>, LinkError> {
    let geo = Geometry::new(fs, discs, mp);
    let mut seeds = Vec::new();
    for (d, diags) in fs.diagonals.iter().enumerate() {
        let long: Vec<(usize, usize)> = diags.iter().copied().filter(|&(_, k)| k >= 2).collect();
        for (x, &c1) in long.iter().enumerate() {
            for &c2 in &long[x + 1..] {
                if chords_interleave(discs[d].g_i, (c1.0, c1.0 + c1.1), (c2.0, c2.0 + c2.1)) {
                    if let Some(z) = geo.crossing(d, c1, c2) {
                        seeds.push((geo.point_in_chart(d, c1.0, z), PointKind::Crossing));
                    }
                }
            }
        }
    }
    seeds.extend(chord_seeds(&geo, fs));

    let mut known: Vec<Vec<DiscPoint>> = vec![Vec::new(); discs.len()];
    let mut classes = Vec::new();
    for (seed, kind) in seeds {
        let cone = geo.cone(seed.disc);
        if known[seed.disc].iter().any(|p| p.same(&seed, cone)) {
            continue;
        }
        let class = close_class(&geo, seed, kind)?;
        for p in &class.points {
            known[p.disc].push(*p);
        }
        classes.push(class);
    }
    Ok(classes)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Type2Link {
    pub kind: PointKind,
    pub representative: DiscPoint,
    /// Number of link circles `C_i` (disc points in the class).
    pub circles: usize,
    /// Circles left after merging whole-circle identifications.
    pub groups: usize,
    pub graph: LinkGraph,
    pub girth: Girth,
    /// Smallest arc common to all segments through a point.
    pub alpha_min: Option<f64>,
    /// Smallest unshared arc, when at least two groups exist.
    pub beta_min: Option<f64>,
    /// Largest deviation of a circle's total length from `2π`.
    pub circle_error: f64,
}

fn add_breakpoint(list: &mut Vec<f64>, x: f64) -> bool {
    let x = norm_angle(x);
    if list.iter().any(|&b| circ_dist(b, x) < ANGLE_TOL) {
        false
    } else {
        list.push(x);
        true
    }
}

fn region_contains(arc: Option<f64>, x: f64) -> bool {
    arc.is_none_or(|a| in_half(a, x))
}

fn image_region(arc: Option<f64>, sigma: i8) -> Option<f64> {
    arc.map(|a| if sigma > 0 { a } else { norm_angle(-a - PI) })
}

fn find_breakpoint(list: &[f64], x: f64) -> Option<usize> {
    list.iter().position(|&b| circ_dist(b, x) < 1e-7)
}

/// Index of the arc `[bp[i], bp[i+1])` containing `x`.
fn find_arc(list: &[f64], x: f64) -> usize {
    let x = norm_angle(x);
    let n = list.len();
    for i in 0..n {
        let start = list[i];
        let len = if i + 1 < n { list[i + 1] - start } else { list[0] + TAU - start };
        if (x - start).rem_euclid(TAU) < len {
            return i;
        }
    }
    n - 1
}

fn arc_len(list: &[f64], i: usize) -> f64 {
    if i + 1 < list.len() {
        list[i + 1] - list[i]
    } else {
        list[0] + TAU - list[i]
    }
}

/// The link of one interior vertex: round circles glued along half-circles
/// and merged along whole-circle identifications.
pub fn build_type2_link(c: &InteriorPointClass) -> Result<Type2Link, LinkError> {
    let n = c.points.len();
    let mut bps: Vec<Vec<f64>> = vec![Vec::new(); n];
    for (i, arcs) in c.arcs.iter().enumerate() {
        for &a in arcs {
            add_breakpoint(&mut bps[i], a);
            add_breakpoint(&mut bps[i], a + PI);
        }
    }
    if bps.iter().all(Vec::is_empty) {
        bps[0].push(0.0);
    }
    loop {
        let mut changed = false;
        for gl in &c.gluings {
            let back = image_region(gl.arc, gl.sigma);
            let fwd: Vec<f64> = bps[gl.from]
                .iter()
                .copied()
                .filter(|&b| region_contains(gl.arc, b))
                .map(|b| f64::from(gl.sigma) * b)
                .collect();
            for x in fwd {
                changed |= add_breakpoint(&mut bps[gl.to], x);
            }
            let rev: Vec<f64> = bps[gl.to]
                .iter()
                .copied()
                .filter(|&b| region_contains(back, b))
                .map(|b| f64::from(gl.sigma) * b)
                .collect();
            for x in rev {
                changed |= add_breakpoint(&mut bps[gl.from], x);
            }
        }
        if bps.iter().map(Vec::len).sum::<usize>() > MAX_BREAKPOINTS {
            return Err(LinkError::ClassTooLarge(MAX_BREAKPOINTS));
        }
        if !changed {
            break;
        }
    }
    for b in &mut bps {
        b.sort_by(f64::total_cmp);
    }

    let mut base = Vec::with_capacity(n);
    let mut total = 0;
    for b in &bps {
        base.push(total);
        total += b.len();
    }
    let mut puf = UnionFind::new(total);
    let mut auf = UnionFind::new(total);
    let mut guf = UnionFind::new(n);
    for gl in &c.gluings {
        if gl.arc.is_none() {
            guf.union(gl.from, gl.to);
        }
        let (from, to) = (&bps[gl.from], &bps[gl.to]);
        let sigma = f64::from(gl.sigma);
        for (idx, &b) in from.iter().enumerate() {
            if !region_contains(gl.arc, b) {
                continue;
            }
            let Some(t) = find_breakpoint(to, sigma * b) else {
                return Err(LinkError::InconsistentGluing(format!(
                    "breakpoint {b:.9} of circle {} has no image on circle {}",
                    gl.from, gl.to
                )));
            };
            puf.union(base[gl.from] + idx, base[gl.to] + t);
        }
        for idx in 0..from.len() {
            let len = arc_len(from, idx);
            let mid = from[idx] + 0.5 * len;
            if !region_contains(gl.arc, mid) {
                continue;
            }
            let t = find_arc(to, sigma * mid);
            if (arc_len(to, t) - len).abs() > 1e-7 {
                return Err(LinkError::InconsistentGluing(format!(
                    "arc of length {len:.9} glued to arc of length {:.9}",
                    arc_len(to, t)
                )));
            }
            auf.union(base[gl.from] + idx, base[gl.to] + t);
        }
    }

    let mut graph = LinkGraph::new();
    let mut node_of = vec![usize::MAX; total];
    for i in 0..n {
        for (idx, b) in bps[i].iter().enumerate() {
            let root = puf.find(base[i] + idx);
            if node_of[root] == usize::MAX {
                node_of[root] = graph.add_vertex(format!("C{i}@{b:.4}"));
            }
        }
    }
    let mut seen = vec![false; total];
    let mut circle_error: f64 = 0.0;
    for i in 0..n {
        let m = bps[i].len();
        let mut sum = 0.0;
        for idx in 0..m {
            let len = arc_len(&bps[i], idx);
            sum += len;
            let root = auf.find(base[i] + idx);
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let a = node_of[puf.find(base[i] + idx)];
            let b = node_of[puf.find(base[i] + (idx + 1) % m)];
            graph.add_edge(a, b, len, format!("C{i}[{idx}]"));
        }
        circle_error = circle_error.max((sum - TAU).abs());
    }

    let mut alpha_min: Option<f64> = None;
    for i in 0..n {
        if c.arcs[i].is_empty() {
            continue;
        }
        let b = &bps[i];
        let alpha: f64 = (0..b.len())
            .map(|idx| (arc_len(b, idx), b[idx] + 0.5 * arc_len(b, idx)))
            .filter(|&(_, mid)| c.arcs[i].iter().all(|&a| in_half(a, mid)))
            .map(|(len, _)| len)
            .sum();
        alpha_min = Some(alpha_min.map_or(alpha, |x| x.min(alpha)));
    }

    let group_of: Vec<usize> = (0..n).map(|i| guf.find(i)).collect();
    let mut groups: Vec<usize> = group_of.clone();
    groups.sort_unstable();
    groups.dedup();
    let mut beta_min = None;
    if groups.len() >= 2 {
        let mut arc_group: Vec<Option<usize>> = vec![None; total];
        let mut shared = vec![false; total];
        for i in 0..n {
            for idx in 0..bps[i].len() {
                let root = auf.find(base[i] + idx);
                match arc_group[root] {
                    None => arc_group[root] = Some(group_of[i]),
                    Some(gid) if gid != group_of[i] => shared[root] = true,
                    _ => {}
                }
            }
        }
        let mut best = f64::INFINITY;
        for i in 0..n {
            let m = bps[i].len();
            let exclusive: Vec<bool> = (0..m).map(|idx| !shared[auf.find(base[i] + idx)]).collect();
            let mut longest: f64 = 0.0;
            if exclusive.iter().all(|&e| e) {
                longest = TAU;
            } else {
                let first_shared = exclusive.iter().position(|&e| !e).unwrap();
                let mut run = 0.0;
                for step in 1..=m {
                    let idx = (first_shared + step) % m;
                    if exclusive[idx] {
                        run += arc_len(&bps[i], idx);
                        longest = longest.max(run);
                    } else {
                        run = 0.0;
                    }
                }
            }
            best = best.min(longest);
        }
        beta_min = Some(best);
    }

    let smoothed = graph.smoothed();
    let girth = girth(&smoothed);
    Ok(Type2Link {
        kind: c.kind,
        representative: c.points[0],
        circles: n,
        groups: groups.len(),
        graph: smoothed,
        girth,
        alpha_min,
        beta_min,
        circle_error,
    })
}
