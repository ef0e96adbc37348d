#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use sccat::linkcert::LinkGraph;
use sccat::pieces::Occurrence;
use sccat::words::{Letter, Presentation, Word};

pub fn random_letter<R: Rng>(rng: &mut R, m: usize) -> Letter {
    Letter::new(rng.gen_range(0..m), rng.gen_bool(0.5))
}

/// A random freely reduced word of exactly `len` letters.
pub fn random_reduced_word<R: Rng>(rng: &mut R, m: usize, len: usize) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let l = random_letter(rng, m);
        if out.last().is_some_and(|p| p.cancels(l)) {
            continue;
        }
        out.push(l);
    }
    Word(out)
}

/// Random presentation, biased towards repeated fragments so that long
/// pieces actually occur.
pub fn random_presentation<R: Rng>(rng: &mut R, max_total: usize) -> Option<Presentation> {
    let m = rng.gen_range(1..=4);
    let count = rng.gen_range(1..=5);
    let fragments: Vec<Word> = (0..3)
        .map(|_| {
            let n = rng.gen_range(1..=6);
            random_reduced_word(rng, m, n)
        })
        .collect();
    let mut relators = Vec::new();
    let mut total = 0;
    for _ in 0..count {
        let target = rng.gen_range(1..=40).min(max_total.saturating_sub(total));
        if target == 0 {
            break;
        }
        let mut letters: Vec<Letter> = Vec::new();
        while letters.len() < target {
            if rng.gen_bool(0.3) {
                let f = &fragments[rng.gen_range(0..fragments.len())];
                let f = if rng.gen_bool(0.5) { f.inverse() } else { f.clone() };
                letters.extend(f.0);
            } else {
                letters.push(random_letter(rng, m));
            }
        }
        letters.truncate(target);
        total += target;
        relators.push(Word(letters));
    }
    let names = (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Presentation::new(names, relators).ok()
}

/// A place on the boundary of a relator disc with a reading direction.
type Pos = (usize, usize, bool);

fn read(p: &Presentation, (ri, v, inv): Pos, len: usize) -> Vec<Letter> {
    let r = p.relators[ri].letters();
    let n = r.len();
    (0..len)
        .map(|t| {
            if inv {
                r[(v + 2 * n - 1 - t) % n].inverse()
            } else {
                r[(v + t) % n]
            }
        })
        .collect()
}

/// Exhaustive piece enumeration: every word read at two or more positions
/// with length at most `|r| - 1`, kept when no one-letter extension on
/// either side is read at as many positions.
pub fn brute_force_pieces(p: &Presentation) -> Vec<(Word, Vec<Occurrence>)> {
    let mut occ: BTreeMap<Vec<Letter>, BTreeSet<Pos>> = BTreeMap::new();
    for (ri, r) in p.relators.iter().enumerate() {
        let n = r.len();
        for v in 0..n {
            for inv in [false, true] {
                for len in 1..n {
                    occ.entry(read(p, (ri, v, inv), len)).or_default().insert((ri, v, inv));
                }
            }
        }
    }
    let count = |w: &[Letter]| occ.get(w).map_or(0, BTreeSet::len);
    let mut letters = Vec::new();
    for g in 0..p.num_generators() {
        letters.push(Letter::gen(g));
        letters.push(Letter::inv(g));
    }
    let mut out = Vec::new();
    for (w, positions) in &occ {
        if positions.len() < 2 {
            continue;
        }
        let word = Word(w.clone());
        if word >= word.inverse() {
            continue;
        }
        let extends = letters.iter().any(|&x| {
            let mut right = w.clone();
            right.push(x);
            let mut left = vec![x];
            left.extend_from_slice(w);
            count(&right) == positions.len() || count(&left) == positions.len()
        });
        if extends {
            continue;
        }
        let occurrences = positions
            .iter()
            .map(|&(relator_index, offset, inverted)| Occurrence {
                relator_index,
                offset,
                inverted,
                length: w.len(),
            })
            .collect();
        out.push((word, occurrences));
    }
    out.sort();
    out
}

pub fn random_multigraph<R: Rng>(rng: &mut R) -> LinkGraph {
    let mut g = LinkGraph::new();
    let n = rng.gen_range(1..=10);
    for i in 0..n {
        g.add_vertex(format!("v{i}"));
    }
    let m = rng.gen_range(0..=20);
    for e in 0..m {
        let u = rng.gen_range(0..n);
        let v = if rng.gen_bool(0.1) { u } else { rng.gen_range(0..n) };
        let w = if rng.gen_bool(0.2) {
            rng.gen_range(1..=4) as f64 * 0.5
        } else {
            rng.gen_range(0.05..3.0)
        };
        g.add_edge(u, v, w, format!("e{e}"));
    }
    g
}

/// Shortest simple cycle by exhaustive search over edge-simple, vertex-simple
/// closed walks.
pub fn brute_force_girth(g: &LinkGraph) -> f64 {
    let n = g.vertices.len();
    let mut best = f64::INFINITY;
    for e in &g.edges {
        if e.u == e.v {
            best = best.min(e.weight);
        }
    }
    // Cycles through at least two vertices, rooted at their least vertex.
    for start in 0..n {
        let mut visited = vec![false; n];
        visited[start] = true;
        let mut used = vec![false; g.edges.len()];
        dfs(g, start, start, 0.0, &mut visited, &mut used, &mut best);
    }
    best
}

fn dfs(
    g: &LinkGraph,
    start: usize,
    at: usize,
    len: f64,
    visited: &mut [bool],
    used: &mut [bool],
    best: &mut f64,
) {
    for (i, e) in g.edges.iter().enumerate() {
        if used[i] || e.u == e.v {
            continue;
        }
        let next = if e.u == at {
            e.v
        } else if e.v == at {
            e.u
        } else {
            continue;
        };
        let total = len + e.weight;
        if next == start {
            *best = best.min(total);
            continue;
        }
        if next < start || visited[next] {
            continue;
        }
        visited[next] = true;
        used[i] = true;
        dfs(g, start, next, total, visited, used, best);
        used[i] = false;
        visited[next] = false;
    }
}
