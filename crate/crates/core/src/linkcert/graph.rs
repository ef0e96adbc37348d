//! Metric multigraphs and their girth.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkEdge {
    pub u: usize,
    pub v: usize,
    /// Length in radians, strictly positive.
    pub weight: f64,
    pub label: String,
}

/// A finite metric multigraph; multi-edges and self-loops are allowed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LinkGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<LinkEdge>,
}

impl LinkGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.vertices.push(label.into());
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64, label: impl Into<String>) -> usize {
        assert!(weight > 0.0, "link edge weights must be positive, got {weight}");
        self.edges.push(LinkEdge {
            u,
            v,
            weight,
            label: label.into(),
        });
        self.edges.len() - 1
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Number of unordered vertex pairs joined by two or more edges.
    pub fn parallel_pairs(&self) -> usize {
        let mut pairs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|e| e.u != e.v)
            .map(|e| (e.u.min(e.v), e.u.max(e.v)))
            .collect();
        pairs.sort_unstable();
        let mut count = 0;
        let mut i = 0;
        while i < pairs.len() {
            let mut j = i + 1;
            while j < pairs.len() && pairs[j] == pairs[i] {
                j += 1;
            }
            if j - i > 1 {
                count += 1;
            }
            i = j;
        }
        count
    }

    /// Concatenates edges through every vertex of degree 2 (other than the
    /// lone vertex of an isolated cycle) and drops vertices left isolated
    /// by the merge. Girth is unchanged.
    pub fn smoothed(&self) -> LinkGraph {
        let mut edges: Vec<Option<LinkEdge>> = self.edges.iter().cloned().map(Some).collect();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            incident[e.u].push(i);
            incident[e.v].push(i);
        }
        let mut removed = vec![false; self.vertices.len()];
        for x in 0..self.vertices.len() {
            let live: Vec<usize> = incident[x]
                .iter()
                .copied()
                .filter(|&i| edges[i].is_some())
                .collect();
            if live.len() != 2 || live[0] == live[1] {
                continue;
            }
            let e1 = edges[live[0]].take().unwrap();
            let e2 = edges[live[1]].take().unwrap();
            let a = if e1.u == x { e1.v } else { e1.u };
            let b = if e2.u == x { e2.v } else { e2.u };
            let merged = LinkEdge {
                u: a,
                v: b,
                weight: e1.weight + e2.weight,
                label: format!("{}|{}", e1.label, e2.label),
            };
            let idx = edges.len();
            edges.push(Some(merged));
            incident[a].push(idx);
            incident[b].push(idx);
            removed[x] = true;
        }
        let mut map = vec![usize::MAX; self.vertices.len()];
        let mut out = LinkGraph::new();
        for (x, label) in self.vertices.iter().enumerate() {
            if !removed[x] {
                map[x] = out.add_vertex(label.clone());
            }
        }
        for e in edges.into_iter().flatten() {
            out.edges.push(LinkEdge {
                u: map[e.u],
                v: map[e.v],
                ..e
            });
        }
        out
    }
}

/// Shortest essential loop and a witness for it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Girth {
    /// `f64::INFINITY` for forests.
    #[serde(with = "finite_or_null")]
    pub length: f64,
    /// Vertex labels around the witness cycle, starting and ending at the same vertex.
    pub cycle: Vec<String>,
    /// Arc lengths between consecutive witness vertices.
    pub arcs: Vec<f64>,
}

impl Girth {
    pub fn is_finite(&self) -> bool {
        self.length.is_finite()
    }
}

/// JSON has no infinity; forests serialize their girth as `null`.
pub(crate) mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

#[derive(Copy, Clone, PartialEq)]
struct State {
    dist: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| self.node.cmp(&other.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `src` ignoring edge `skip`; returns distances and the edge
/// used to reach each vertex.
fn dijkstra(
    g: &LinkGraph,
    adj: &[Vec<(usize, usize)>],
    src: usize,
    skip: usize,
    bound: f64,
) -> (Vec<f64>, Vec<usize>) {
    let n = g.vertices.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut via = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(State { dist: 0.0, node: src });
    while let Some(State { dist: d, node }) = heap.pop() {
        if d > dist[node] || d >= bound {
            continue;
        }
        for &(eid, next) in &adj[node] {
            if eid == skip {
                continue;
            }
            let nd = d + g.edges[eid].weight;
            if nd < dist[next] {
                dist[next] = nd;
                via[next] = eid;
                heap.push(State { dist: nd, node: next });
            }
        }
    }
    (dist, via)
}

/// Minimum total weight of a cycle without backtracking: for every edge
/// `u–v`, the edge plus a shortest `v → u` path avoiding it.
pub fn girth(g: &LinkGraph) -> Girth {
    let n = g.vertices.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in g.edges.iter().enumerate() {
        adj[e.u].push((i, e.v));
        if e.u != e.v {
            adj[e.v].push((i, e.u));
        }
    }
    let mut best = f64::INFINITY;
    let mut witness: Option<(usize, Vec<usize>)> = None;
    for (i, e) in g.edges.iter().enumerate() {
        if e.u == e.v {
            if e.weight < best {
                best = e.weight;
                witness = Some((i, Vec::new()));
            }
            continue;
        }
        let (dist, via) = dijkstra(g, &adj, e.u, i, best - e.weight);
        let total = e.weight + dist[e.v];
        if total < best {
            best = total;
            let mut path = Vec::new();
            let mut x = e.v;
            while x != e.u {
                let eid = via[x];
                path.push(eid);
                let ed = &g.edges[eid];
                x = if ed.u == x { ed.v } else { ed.u };
            }
            witness = Some((i, path));
        }
    }
    let Some((first, path)) = witness else {
        return Girth {
            length: f64::INFINITY,
            cycle: Vec::new(),
            arcs: Vec::new(),
        };
    };
    let e = &g.edges[first];
    let mut cycle = vec![g.vertices[e.u].clone(), g.vertices[e.v].clone()];
    let mut arcs = vec![e.weight];
    let mut x = e.v;
    for &eid in &path {
        let ed = &g.edges[eid];
        x = if ed.u == x { ed.v } else { ed.u };
        cycle.push(g.vertices[x].clone());
        arcs.push(ed.weight);
    }
    Girth {
        length: best,
        cycle,
        arcs,
    }
}
