//! The metrized presentation complex: one singular disc `D(g_i, g, r)` per
//! relator, and the folds that identify the segments subtended by pieces.
//!
//! Boundary vertex `v` of a disc sits at distance `r` from the centre in cone
//! direction `2πv/g`; consecutive vertices are `2π/g` apart, so a disc with
//! `g_i > g` has total cone angle `g_i·2π/g > 2π` at its centre. Any segment
//! of length `k < g/6` lives inside a sector narrower than `π/3`, and is
//! computed in a chart that develops that sector into the regular `g`-gon.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypgeom::{
    base_angle_theta, chord_angle_beta, chord_length, edge_length_lambda, r_max, DiskPoint,
    PolygonEmbedding,
};
use crate::pieces::{Occurrence, Piece, SmallCancellationReport};
use crate::words::Presentation;

/// Default safety factor applied to `r_max(n_eff)`.
pub const DEFAULT_RADIUS_FACTOR: f64 = 0.9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FoldError {
    #[error("presentation is not uniformly C'(1/6): {0}")]
    NotUniform(String),
    #[error("radius factor {0} must lie in (0, 1)")]
    InvalidRadiusFactor(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    pub g: usize,
    /// Piece-length bound the radius is tuned for.
    pub n_eff: usize,
    pub radius_factor: f64,
    pub r_max: f64,
    /// Chosen disc radius, `radius_factor · r_max(n_eff)`.
    pub r: f64,
    /// Boundary edge length of every disc.
    pub lambda: f64,
    /// Base angle of `T(g, r)`; corners of every disc measure `2θ`.
    pub theta: f64,
}

impl MetricParams {
    pub fn corner_angle(&self) -> f64 {
        2.0 * self.theta
    }

    /// Angle at a boundary vertex between the radius and a length-`k` diagonal.
    pub fn beta(&self, k: usize) -> f64 {
        chord_angle_beta(self.r, TAU * k as f64 / self.g as f64)
    }

    /// Angle between a boundary edge and the length-`k` diagonal leaving the
    /// same vertex on that edge's side.
    pub fn delta(&self, k: usize) -> f64 {
        self.beta(1) - self.beta(k)
    }

    pub fn diagonal_length(&self, k: usize) -> f64 {
        chord_length(self.r, TAU * k as f64 / self.g as f64)
    }
}

/// Picks the disc radius for a uniformly C'(1/6) presentation.
///
/// `n_eff = max(1, longest piece)`. When pieces exist the strict condition
/// gives `g ≥ 6·n_eff + 1`; a piece-free presentation needs no diagonal
/// estimates, so short relators are accepted there.
pub fn choose_radius(
    report: &SmallCancellationReport,
    radius_factor: f64,
) -> Result<MetricParams, FoldError> {
    if !report.passes_uniform {
        return Err(FoldError::NotUniform(
            report.uniform_failure().unwrap_or_default(),
        ));
    }
    if !(radius_factor > 0.0 && radius_factor < 1.0) {
        return Err(FoldError::InvalidRadiusFactor(radius_factor));
    }
    let g = report.g;
    let n_eff = report.max_piece_length.max(1);
    if report.max_piece_length > 0 {
        assert!(g > 6 * n_eff, "uniform condition implies g >= 6·n_eff + 1");
    }
    let rm = r_max(n_eff as u32);
    let r = radius_factor * rm;
    let poly = g.max(3) as u32;
    Ok(MetricParams {
        g,
        n_eff,
        radius_factor,
        r_max: rm,
        r,
        lambda: edge_length_lambda(r, poly),
        theta: base_angle_theta(r, poly),
    })
}

/// A relator disc metrized as `D(g_i, g, r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub relator_index: usize,
    pub g_i: usize,
    pub g: usize,
    pub r: f64,
    /// Developed boundary: vertex `k` at distance `r` in direction `2πk/g`.
    /// Vertices wrap past `2π` when `g_i > g`.
    pub embedding: PolygonEmbedding,
    pub corner_angle: f64,
    /// Length of the link of the centre, `g_i·2π/g`.
    pub center_link_length: f64,
}

impl Disc {
    /// Cone angle of boundary vertex `v` (unwrapped).
    pub fn vertex_direction(&self, v: f64) -> f64 {
        TAU * v / self.g as f64
    }

    pub fn cone_angle(&self) -> f64 {
        self.center_link_length
    }

    /// Chart position of boundary vertex `v` when vertex `base` is put at
    /// direction zero. Only meaningful for `|v - base|` well below `g/2`.
    pub fn chart_vertex(&self, base: isize, v: isize) -> DiskPoint {
        DiskPoint::polar(self.r, self.vertex_direction((v - base) as f64))
    }
}

pub fn build_discs(p: &Presentation, mp: &MetricParams) -> Vec<Disc> {
    p.relators
        .iter()
        .enumerate()
        .map(|(i, rel)| {
            let g_i = rel.len();
            let vertices = (0..g_i)
                .map(|k| DiskPoint::polar(mp.r, TAU * k as f64 / mp.g as f64))
                .collect();
            Disc {
                relator_index: i,
                g_i,
                g: mp.g,
                r: mp.r,
                embedding: PolygonEmbedding {
                    n: g_i,
                    r: mp.r,
                    vertices,
                    center: DiskPoint::ORIGIN,
                },
                corner_angle: mp.corner_angle(),
                center_link_length: g_i as f64 * TAU / mp.g as f64,
            }
        })
        .collect()
}

/// The boundary segment of one disc subtended by a piece occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub disc: usize,
    /// First boundary vertex in counterclockwise order.
    pub start: usize,
    /// Last boundary vertex, `start + k` modulo `g_i`.
    pub end: usize,
    pub k: usize,
}

impl Segment {
    pub fn of(occ: &Occurrence, g_i: usize) -> Self {
        let start = occ.first_vertex(g_i);
        Segment {
            disc: occ.relator_index,
            start,
            end: (start + occ.length) % g_i,
            k: occ.length,
        }
    }

    /// Offset of `v` from `start` along the boundary, in `[0, g_i)`.
    pub fn offset_of(&self, v: usize, g_i: usize) -> usize {
        (v + g_i - self.start) % g_i
    }

    pub fn contains_vertex(&self, v: usize, g_i: usize) -> bool {
        self.offset_of(v, g_i) <= self.k
    }
}

/// One side of a fold: the occurrence and the segment it subtends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSide {
    pub occurrence: Occurrence,
    pub segment: Segment,
}

impl FoldSide {
    /// `+1` when the piece is read counterclockwise on this disc.
    pub fn orientation(&self) -> i32 {
        if self.occurrence.inverted {
            -1
        } else {
            1
        }
    }
}

/// An isometric identification of two segments. Piece vertex `j` sits at
/// `a.occurrence.vertex(j)` on one disc and `b.occurrence.vertex(j)` on the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    pub piece: usize,
    pub a: FoldSide,
    pub b: FoldSide,
}

impl Fold {
    pub fn len(&self) -> usize {
        self.a.segment.k
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sides(&self) -> [(&FoldSide, &FoldSide); 2] {
        [(&self.a, &self.b), (&self.b, &self.a)]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldSchedule {
    pub folds: Vec<Fold>,
    /// Distinct diagonals `(start, k)` of each disc, sorted.
    pub diagonals: Vec<Vec<(usize, usize)>>,
}

/// Emits one fold per unordered pair of occurrences of every piece.
pub fn segments_from_pieces(discs: &[Disc], pieces: &[Piece]) -> FoldSchedule {
    let mut folds = Vec::new();
    let mut diagonals = vec![Vec::new(); discs.len()];
    for (pi, piece) in pieces.iter().enumerate() {
        let sides: Vec<FoldSide> = piece
            .occurrences
            .iter()
            .map(|o| FoldSide {
                occurrence: *o,
                segment: Segment::of(o, discs[o.relator_index].g_i),
            })
            .collect();
        for s in &sides {
            diagonals[s.segment.disc].push((s.segment.start, s.segment.k));
        }
        for i in 0..sides.len() {
            for j in i + 1..sides.len() {
                folds.push(Fold {
                    piece: pi,
                    a: sides[i],
                    b: sides[j],
                });
            }
        }
    }
    for d in &mut diagonals {
        d.sort_unstable();
        d.dedup();
    }
    FoldSchedule { folds, diagonals }
}

/// How a fold maps boundary vertices of one disc onto another:
/// `v ↦ sign·v + shift (mod g_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Alignment {
    from: usize,
    to: usize,
    sign: i64,
    shift: i64,
}

fn alignment(f: &Fold, discs: &[Disc]) -> Alignment {
    let (x, y) = (f.a.occurrence, f.b.occurrence);
    let (gx, gy) = (discs[x.relator_index].g_i as i64, discs[y.relator_index].g_i as i64);
    let ex = i64::from(f.a.orientation());
    let ey = i64::from(f.b.orientation());
    let sign = ex * ey;
    let forward = Alignment {
        from: x.relator_index,
        to: y.relator_index,
        sign,
        shift: (y.offset as i64 - sign * x.offset as i64).rem_euclid(gy),
    };
    let backward = Alignment {
        from: y.relator_index,
        to: x.relator_index,
        sign,
        shift: (x.offset as i64 - sign * y.offset as i64).rem_euclid(gx),
    };
    // Same-relator folds have two encodings; keep the smaller.
    if (backward.from, backward.to) < (forward.from, forward.to)
        || ((backward.from, backward.to) == (forward.from, forward.to) && backward < forward)
    {
        backward
    } else {
        forward
    }
}

/// Outcome of [`check_fold_maximality`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalityReport {
    pub passed: bool,
    /// Two folds whose consistent overlap is not covered by any single fold.
    pub witness: Option<(usize, usize)>,
}

/// Verifies that overlapping or abutting folds along the same boundary
/// correspondence are always contained in one recorded fold, i.e. that no
/// longer common path was split into shorter identifications.
pub fn check_fold_maximality(fs: &FoldSchedule, discs: &[Disc]) -> MaximalityReport {
    let als: Vec<Alignment> = fs.folds.iter().map(|f| alignment(f, discs)).collect();
    let mut order: Vec<usize> = (0..fs.folds.len()).collect();
    order.sort_by_key(|&i| als[i]);
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end < order.len() && als[order[end]] == als[order[start]] {
            end += 1;
        }
        let group = &order[start..end];
        let al = als[group[0]];
        let g_i = discs[al.from].g_i;
        let mut segs: Vec<(usize, Segment)> = Vec::new();
        for &i in group {
            for seg in source_segments(&fs.folds[i], &al, discs) {
                segs.push((i, seg));
            }
        }
        for x in 0..segs.len() {
            for y in x + 1..segs.len() {
                let Some(u) = cyclic_union(segs[x].1, segs[y].1, g_i) else {
                    continue;
                };
                let covered = segs.iter().any(|(_, s)| contains(*s, u, g_i));
                if !covered {
                    return MaximalityReport {
                        passed: false,
                        witness: Some((segs[x].0, segs[y].0)),
                    };
                }
            }
        }
        start = end;
    }
    MaximalityReport {
        passed: true,
        witness: None,
    }
}

/// The sides on `al.from` whose vertices map under `al` onto the other side.
/// A reflection of one disc onto itself is an involution, so both sides qualify.
fn source_segments(f: &Fold, al: &Alignment, discs: &[Disc]) -> Vec<Segment> {
    let mut out = Vec::new();
    for (s, t) in f.sides() {
        if s.segment.disc != al.from || t.segment.disc != al.to {
            continue;
        }
        let gs = discs[al.to].g_i as i64;
        let v = s.occurrence.vertex(0, discs[al.from].g_i) as i64;
        let w = t.occurrence.vertex(0, discs[al.to].g_i) as i64;
        if (al.sign * v + al.shift).rem_euclid(gs) == w {
            out.push(s.segment);
        }
    }
    out
}

/// Union of two cyclic vertex intervals sharing at least one vertex.
fn cyclic_union(a: Segment, b: Segment, g_i: usize) -> Option<Segment> {
    let rel_b = (b.start + g_i - a.start) % g_i;
    let rel_a = (a.start + g_i - b.start) % g_i;
    let (base, k) = if rel_b <= a.k {
        (a, a.k.max(rel_b + b.k))
    } else if rel_a <= b.k {
        (b, b.k.max(rel_a + a.k))
    } else {
        return None;
    };
    (k < g_i).then_some(Segment {
        k,
        end: (base.start + k) % g_i,
        ..base
    })
}

fn contains(outer: Segment, inner: Segment, g_i: usize) -> bool {
    let rel = (inner.start + g_i - outer.start) % g_i;
    rel + inner.k <= outer.k
}

/// Partition of `(disc, boundary edge)` pairs induced by the folds applied in
/// `order`, in a canonical form (each class sorted, classes sorted).
pub fn edge_identification_classes(
    fs: &FoldSchedule,
    discs: &[Disc],
    order: &[usize],
) -> Vec<Vec<(usize, usize)>> {
    let offsets: Vec<usize> = discs
        .iter()
        .scan(0, |acc, d| {
            let o = *acc;
            *acc += d.g_i;
            Some(o)
        })
        .collect();
    let total: usize = discs.iter().map(|d| d.g_i).sum();
    let mut uf = UnionFind::new(total);
    for &fi in order {
        let f = &fs.folds[fi];
        for j in 0..f.len() {
            let ea = edge_of(&f.a.occurrence, j, discs);
            let eb = edge_of(&f.b.occurrence, j, discs);
            uf.union(offsets[f.a.segment.disc] + ea, offsets[f.b.segment.disc] + eb);
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
    for (d, disc) in discs.iter().enumerate() {
        for e in 0..disc.g_i {
            let root = uf.find(offsets[d] + e);
            classes.entry(root).or_default().push((d, e));
        }
    }
    let mut out: Vec<Vec<(usize, usize)>> = classes.into_values().collect();
    out.sort();
    out
}

/// Boundary edge (indexed by its counterclockwise start vertex) carrying
/// letter `j` of the occurrence.
pub fn edge_of(occ: &Occurrence, j: usize, discs: &[Disc]) -> usize {
    let g_i = discs[occ.relator_index].g_i;
    if occ.inverted {
        occ.vertex(j + 1, g_i)
    } else {
        occ.vertex(j, g_i)
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn push(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.size.push(1);
        self.parent.len() - 1
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    /// `(Σ g_i / g)·π·r²` with the chosen radius.
    pub approx_area: f64,
    /// The same expression with `r_max` at `formula_n`.
    pub formula_area: f64,
    pub formula_n: usize,
}

/// Area of the metrized complex before folding, approximating each disc
/// `D(g_i, g, r)` by a Euclidean disc of area `π r² g_i / g`.
///
/// `formula_n` is `g/6` when that is an integer and `⌈g/6⌉ - 1` otherwise
/// (the longest piece the strict condition allows), at least 1.
pub fn area_estimate(p: &Presentation, mp: &MetricParams) -> AreaEstimate {
    let ratio = p.total_relator_length() as f64 / mp.g as f64;
    let formula_n = if mp.g.is_multiple_of(6) {
        mp.g / 6
    } else {
        mp.g.div_ceil(6) - 1
    }
    .max(1);
    let rf = r_max(formula_n as u32);
    AreaEstimate {
        approx_area: ratio * PI * mp.r * mp.r,
        formula_area: ratio * PI * rf * rf,
        formula_n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeom::distance;
    use crate::pieces::{check_conditions, enumerate_pieces};
    use crate::words::parse_presentation;

    fn genus2() -> Presentation {
        parse_presentation("generators: a b c d\nrelator: a b a- b- c d c- d-").unwrap()
    }

    #[test]
    fn radius_for_genus_two() {
        let rep = check_conditions(&genus2());
        let mp = choose_radius(&rep, DEFAULT_RADIUS_FACTOR).unwrap();
        assert_eq!(mp.n_eff, 1);
        assert!((mp.r - 0.9 * r_max(1)).abs() < 1e-15);
        assert!((mp.r - 0.56).abs() < 0.01);
        assert!(choose_radius(&rep, 1.0).is_err());
        let bad = check_conditions(&parse_presentation("generators: a b\nrelator: a b a- b-").unwrap());
        assert!(matches!(choose_radius(&bad, 0.9), Err(FoldError::NotUniform(_))));
    }

    #[test]
    fn radius_substitution() {
        let rep = SmallCancellationReport {
            g: 13,
            max_piece_length: 2,
            num_maximal_pieces: 1,
            per_relator_max_ratio: vec![],
            proper_power_flags: vec![false],
            passes_c16: true,
            passes_uniform: true,
            short_relators: false,
        };
        let mp = choose_radius(&rep, 0.9).unwrap();
        assert_eq!(mp.n_eff, 2);
        assert_eq!(mp.r, 0.9 * r_max(2));
    }

    #[test]
    fn discs_for_genus_two() {
        let p = genus2();
        let mp = choose_radius(&check_conditions(&p), 0.9).unwrap();
        let discs = build_discs(&p, &mp);
        assert_eq!(discs.len(), 1);
        assert_eq!(discs[0].g_i, 8);
        assert!((discs[0].corner_angle - 2.0 * base_angle_theta(mp.r, 8)).abs() < 1e-15);
        assert!((discs[0].center_link_length - TAU).abs() < 1e-12);
        let e = &discs[0].embedding;
        for k in 0..8 {
            let d = distance(e.vertices[k], e.vertices[(k + 1) % 8]);
            assert!((d - mp.lambda).abs() < 1e-10);
        }
    }

    #[test]
    fn longer_relator_has_bigger_cone() {
        let p = parse_presentation(
            "generators: a b c d e f g h\nrelator: a b c d e f g\nrelator: h h a h h b h h c h h d h e",
        )
        .unwrap();
        let mp = MetricParams {
            g: 7,
            n_eff: 1,
            radius_factor: 0.9,
            r_max: r_max(1),
            r: 0.5,
            lambda: edge_length_lambda(0.5, 7),
            theta: base_angle_theta(0.5, 7),
        };
        let discs = build_discs(&p, &mp);
        assert!((discs[1].center_link_length - 2.0 * discs[0].center_link_length).abs() < 1e-12);
        assert!(discs.iter().all(|d| d.center_link_length >= TAU - 1e-12));
    }

    #[test]
    fn folds_from_pieces() {
        let p = genus2();
        let mp = choose_radius(&check_conditions(&p), 0.9).unwrap();
        let discs = build_discs(&p, &mp);
        let pieces = enumerate_pieces(&p);
        let fs = segments_from_pieces(&discs, &pieces);
        assert_eq!(fs.folds.len(), pieces.len());
        assert!(fs.folds.iter().all(|f| f.len() == 1));
        assert!(check_fold_maximality(&fs, &discs).passed);
    }

    #[test]
    fn three_occurrences_give_three_folds() {
        let occ = |o| Occurrence {
            relator_index: 0,
            offset: o,
            inverted: false,
            length: 1,
        };
        let piece = Piece {
            word: crate::words::Word::default(),
            occurrences: vec![occ(0), occ(3), occ(6)],
            maximal: true,
        };
        let p = parse_presentation("generators: a b c\nrelator: a b c a b c- a c b-").unwrap();
        let mp = choose_radius(
            &SmallCancellationReport {
                g: 9,
                max_piece_length: 1,
                num_maximal_pieces: 1,
                per_relator_max_ratio: vec![],
                proper_power_flags: vec![false],
                passes_c16: true,
                passes_uniform: true,
                short_relators: false,
            },
            0.9,
        )
        .unwrap();
        let discs = build_discs(&p, &mp);
        let fs = segments_from_pieces(&discs, &[piece]);
        assert_eq!(fs.folds.len(), 3);
    }

    #[test]
    fn empty_schedule_is_maximal() {
        let fs = FoldSchedule {
            folds: vec![],
            diagonals: vec![],
        };
        assert!(check_fold_maximality(&fs, &[]).passed);
    }

    #[test]
    fn area_for_genus_two() {
        let p = genus2();
        let mp = choose_radius(&check_conditions(&p), 0.9).unwrap();
        let a = area_estimate(&p, &mp);
        assert!((a.approx_area - PI * mp.r * mp.r).abs() < 1e-12);
        assert!((a.approx_area - 0.985).abs() < 0.03);
        assert_eq!(a.formula_n, 1);
        assert!((a.formula_area - PI * r_max(1).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(4);
        assert!(uf.union(0, 1));
        assert!(!uf.union(1, 0));
        uf.union(2, 3);
        assert_ne!(uf.find(0), uf.find(2));
        let x = uf.push();
        uf.union(x, 3);
        assert_eq!(uf.find(x), uf.find(2));
    }
}
