//! The link of the single vertex in the image of the 1-skeleton.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::graph::{girth, Girth, LinkGraph};
use super::LinkError;
use crate::complexfold::{Disc, FoldSchedule, MetricParams, UnionFind};
use crate::words::{Letter, Presentation};

/// Link vertex at the start of the edge labelled `l`.
fn plus(l: Letter) -> usize {
    2 * l.generator_id + usize::from(l.inverted)
}

/// Link vertex at the end of the edge labelled `l`.
fn minus(l: Letter) -> usize {
    2 * l.generator_id + usize::from(!l.inverted)
}

fn vertex_labels(p: &Presentation) -> Vec<String> {
    p.generator_names
        .iter()
        .flat_map(|n| [format!("{n}+"), format!("{n}-")])
        .collect()
}

/// A stub identification: the initial `delta` of two edge classes, measured
/// from a shared link vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stub {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Type1Link {
    /// After collapsing parallel corners along folds.
    pub intermediate: LinkGraph,
    /// After identifying initial subpaths at piece endpoints.
    pub folded: LinkGraph,
    pub smoothed: LinkGraph,
    pub stubs: Vec<Stub>,
    /// Length of the unidentified middle of every edge class.
    pub central_paths: Vec<f64>,
    pub girth: Girth,
}

impl Type1Link {
    pub fn min_central_path(&self) -> f64 {
        self.central_paths.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Builds the folded link of the vertex of the 1-skeleton.
///
/// Corners are edges of the unfolded link: the corner at boundary vertex `v`
/// of relator `r` joins `r[v-1]⁻` to `r[v]⁺`.
pub fn build_type1_link(
    p: &Presentation,
    discs: &[Disc],
    fs: &FoldSchedule,
    mp: &MetricParams,
) -> Result<Type1Link, LinkError> {
    let labels = vertex_labels(p);
    let w = mp.corner_angle();
    let offsets: Vec<usize> = discs
        .iter()
        .scan(0, |acc, d| {
            let o = *acc;
            *acc += d.g_i;
            Some(o)
        })
        .collect();
    let mut corners = Vec::new();
    let mut corner_names = Vec::new();
    for (d, r) in p.relators.iter().enumerate() {
        for v in 0..r.len() as isize {
            corners.push((minus(r.at(v - 1)), plus(r.at(v))));
            corner_names.push(format!("R{}:{}", d + 1, v));
        }
    }
    let corner = |d: usize, v: usize| offsets[d] + v;

    let mut uf = UnionFind::new(corners.len());
    for f in &fs.folds {
        let (ga, gb) = (discs[f.a.segment.disc].g_i, discs[f.b.segment.disc].g_i);
        for j in 1..f.len() {
            uf.union(
                corner(f.a.segment.disc, f.a.occurrence.vertex(j, ga)),
                corner(f.b.segment.disc, f.b.occurrence.vertex(j, gb)),
            );
        }
    }
    let mut class_of = vec![usize::MAX; corners.len()];
    let mut ends: Vec<(usize, usize)> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for c in 0..corners.len() {
        let root = uf.find(c);
        if class_of[root] == usize::MAX {
            class_of[root] = ends.len();
            ends.push(corners[root]);
            names.push(corner_names[root].clone());
        }
        class_of[c] = class_of[root];
        let (u, v) = ends[class_of[c]];
        let (x, y) = corners[c];
        if !((x, y) == (u, v) || (x, y) == (v, u)) {
            return Err(LinkError::InconsistentCorners {
                first: corner_names[root].clone(),
                second: corner_names[c].clone(),
            });
        }
    }
    let n_classes = ends.len();
    let mut intermediate = LinkGraph {
        vertices: labels.clone(),
        edges: Vec::new(),
    };
    for (c, &(u, v)) in ends.iter().enumerate() {
        intermediate.add_edge(u, v, w, names[c].clone());
    }
    if intermediate.parallel_pairs() > 0 {
        return Err(LinkError::IntermediateBigon);
    }

    let side = |c: usize, x: usize| -> Option<usize> {
        let (u, v) = ends[c];
        if x == u {
            Some(0)
        } else if x == v {
            Some(1)
        } else {
            None
        }
    };
    let mut stubs = Vec::new();
    for f in fs.folds.iter().filter(|f| f.len() >= 2) {
        let k = f.len();
        let delta = mp.delta(k);
        if delta >= w {
            return Err(LinkError::StubTooLong { k, delta, corner: w });
        }
        let word = f.a.occurrence.read(p);
        let (ga, gb) = (discs[f.a.segment.disc].g_i, discs[f.b.segment.disc].g_i);
        for (j, x) in [(0, plus(word.0[0])), (k, minus(word.0[k - 1]))] {
            let ca = class_of[corner(f.a.segment.disc, f.a.occurrence.vertex(j, ga))];
            let cb = class_of[corner(f.b.segment.disc, f.b.occurrence.vertex(j, gb))];
            let (Some(sa), Some(sb)) = (side(ca, x), side(cb, x)) else {
                return Err(LinkError::InconsistentCorners {
                    first: names[ca].clone(),
                    second: names[cb].clone(),
                });
            };
            if (ca, sa) != (cb, sb) {
                stubs.push(Stub {
                    first: (ca, sa),
                    second: (cb, sb),
                    delta,
                });
            }
        }
    }

    let mut end_uf = UnionFind::new(2 * n_classes);
    for s in &stubs {
        end_uf.union(2 * s.first.0 + s.first.1, 2 * s.second.0 + s.second.1);
    }
    let mut cuts: Vec<Vec<f64>> = vec![Vec::new(); 2 * n_classes];
    for s in &stubs {
        cuts[end_uf.find(2 * s.first.0 + s.first.1)].push(s.delta);
    }
    for c in &mut cuts {
        c.sort_by(f64::total_cmp);
        c.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    }
    let cuts_at = |end_uf: &mut UnionFind, c: usize, s: usize| cuts[end_uf.find(2 * c + s)].clone();

    let mut positions: Vec<Vec<f64>> = Vec::with_capacity(n_classes);
    let mut central_paths = Vec::with_capacity(n_classes);
    for c in 0..n_classes {
        let cu = cuts_at(&mut end_uf, c, 0);
        let cv = cuts_at(&mut end_uf, c, 1);
        let central = w - cu.last().copied().unwrap_or(0.0) - cv.last().copied().unwrap_or(0.0);
        if central <= 2.0 * PI / 3.0 {
            return Err(LinkError::ShortCentralPath {
                edge: names[c].clone(),
                length: central,
            });
        }
        central_paths.push(central);
        let mut pos = vec![0.0];
        pos.extend(cu.iter().copied());
        pos.extend(cv.iter().rev().map(|d| w - d));
        pos.push(w);
        positions.push(pos);
    }

    // Points: link vertices first, then interior cut points of each class.
    let mut point_ids: Vec<Vec<usize>> = Vec::with_capacity(n_classes);
    let mut point_labels = labels.clone();
    let mut edge_base = Vec::with_capacity(n_classes);
    let mut n_sub = 0;
    for (c, pos) in positions.iter().enumerate() {
        let (u, v) = ends[c];
        let mut ids = vec![u];
        for x in &pos[1..pos.len() - 1] {
            ids.push(point_labels.len());
            point_labels.push(format!("{}@{:.4}", names[c], x));
        }
        ids.push(v);
        point_ids.push(ids);
        edge_base.push(n_sub);
        n_sub += pos.len() - 1;
    }
    let mut puf = UnionFind::new(point_labels.len());
    let mut euf = UnionFind::new(n_sub);
    let point_from_end = |c: usize, s: usize, i: usize| {
        let ids = &point_ids[c];
        if s == 0 {
            ids[i]
        } else {
            ids[ids.len() - 1 - i]
        }
    };
    let sub_from_end = |c: usize, s: usize, i: usize| {
        let m = positions[c].len() - 1;
        edge_base[c] + if s == 0 { i } else { m - 1 - i }
    };
    for s in &stubs {
        let list = cuts_at(&mut end_uf, s.first.0, s.first.1);
        let n = list.iter().filter(|&&d| d <= s.delta + 1e-12).count();
        for i in 0..n {
            puf.union(
                point_from_end(s.first.0, s.first.1, i + 1),
                point_from_end(s.second.0, s.second.1, i + 1),
            );
            euf.union(
                sub_from_end(s.first.0, s.first.1, i),
                sub_from_end(s.second.0, s.second.1, i),
            );
        }
    }

    let mut folded = LinkGraph::new();
    let mut node_of = vec![usize::MAX; point_labels.len()];
    for (x, label) in point_labels.iter().enumerate() {
        let root = puf.find(x);
        if node_of[root] == usize::MAX {
            node_of[root] = folded.add_vertex(label.clone());
        }
    }
    let mut seen = vec![false; n_sub];
    for c in 0..n_classes {
        let pos = &positions[c];
        for i in 0..pos.len() - 1 {
            let root = euf.find(edge_base[c] + i);
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let a = node_of[puf.find(point_ids[c][i])];
            let b = node_of[puf.find(point_ids[c][i + 1])];
            folded.add_edge(a, b, pos[i + 1] - pos[i], format!("{}[{}]", names[c], i));
        }
    }
    let smoothed = folded.smoothed();
    let girth = girth(&smoothed);
    Ok(Type1Link {
        intermediate,
        folded,
        smoothed,
        stubs,
        central_paths,
        girth,
    })
}
