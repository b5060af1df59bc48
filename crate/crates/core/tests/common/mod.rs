//! Independent reference checks for the integration tests. Everything here
//! works by enumerating simple paths explicitly and does not call the
//! search routines it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use pagset::gen::{generate, GenConfig, Instance};
use pagset::graph::{Mark, MixedGraph};
use pagset::io::parse_graph;
use pagset::rules::BackgroundKnowledge;
use pagset::vset::VertexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn graph(text: &str) -> MixedGraph {
    parse_graph(text).unwrap()
}

pub fn ids(g: &MixedGraph, names: &[&str]) -> VertexSet {
    names.iter().map(|n| g.index_of(n).unwrap_or_else(|| panic!("no vertex {n}"))).collect()
}

pub fn id(g: &MixedGraph, name: &str) -> usize {
    g.index_of(name).unwrap_or_else(|| panic!("no vertex {name}"))
}

fn mark(g: &MixedGraph, at: usize, other: usize) -> Mark {
    g.mark_at(at, other).expect("adjacent")
}

/// `a *-* b` may be followed from `a` to `b` on a possibly directed path.
fn forward(g: &MixedGraph, a: usize, b: usize) -> bool {
    mark(g, a, b) != Mark::Arrowhead && mark(g, b, a) != Mark::Tail
}

/// Ancestors of `s` by repeated scans over every ordered pair.
pub fn ancestors(g: &MixedGraph, s: &VertexSet) -> VertexSet {
    let mut out = s.clone();
    loop {
        let mut grew = false;
        for u in 0..g.n() {
            if out.contains(u) {
                continue;
            }
            if (0..g.n()).any(|v| out.contains(v) && g.adjacent(u, v) && mark(g, u, v) == Mark::Tail && mark(g, v, u) == Mark::Arrowhead) {
                out.insert(u);
                grew = true;
            }
        }
        if !grew {
            return out;
        }
    }
}

pub fn possible_ancestors(g: &MixedGraph, s: &VertexSet) -> VertexSet {
    let mut out = s.clone();
    loop {
        let mut grew = false;
        for u in 0..g.n() {
            if !out.contains(u) && (0..g.n()).any(|v| out.contains(v) && g.adjacent(u, v) && forward(g, u, v)) {
                out.insert(u);
                grew = true;
            }
        }
        if !grew {
            return out;
        }
    }
}

pub fn possible_descendants(g: &MixedGraph, s: &VertexSet) -> VertexSet {
    let mut out = s.clone();
    loop {
        let mut grew = false;
        for u in 0..g.n() {
            if !out.contains(u) && (0..g.n()).any(|v| out.contains(v) && g.adjacent(u, v) && forward(g, v, u)) {
                out.insert(u);
                grew = true;
            }
        }
        if !grew {
            return out;
        }
    }
}

/// Every simple path starting with `prefix`, extended one vertex at a time
/// while `extend(path, next)` holds; `visit` sees each path of length ≥ 2.
pub fn for_each_path(
    g: &MixedGraph,
    prefix: &mut Vec<usize>,
    extend: &dyn Fn(&[usize], usize) -> bool,
    visit: &mut dyn FnMut(&[usize]),
) {
    if prefix.len() >= 2 {
        visit(prefix);
    }
    let last = *prefix.last().expect("non-empty");
    for w in 0..g.n() {
        if !g.adjacent(last, w) || prefix.contains(&w) || !extend(prefix, w) {
            continue;
        }
        prefix.push(w);
        for_each_path(g, prefix, extend, visit);
        prefix.pop();
    }
}

fn uncovered_step(g: &MixedGraph, path: &[usize], w: usize) -> bool {
    path.len() < 2 || !g.adjacent(path[path.len() - 2], w)
}

/// Endpoints `K` of uncovered possibly directed paths `⟨a, b, ..., K⟩`.
pub fn uncovered_pd_endpoints(g: &MixedGraph, a: usize, b: usize) -> VertexSet {
    let mut out = VertexSet::new();
    if !forward(g, a, b) {
        return out;
    }
    let extend = |p: &[usize], w: usize| uncovered_step(g, p, w) && forward(g, *p.last().unwrap(), w);
    for_each_path(g, &mut vec![a, b], &extend, &mut |p| {
        out.insert(*p.last().unwrap());
    });
    out
}

pub fn s_a(g: &MixedGraph, a: usize) -> VertexSet {
    let mut s: VertexSet = (0..g.n()).filter(|&v| g.adjacent(a, v) && mark(g, a, v) == Mark::Arrowhead).collect();
    s.insert(a);
    s
}

/// `F_v` relative to `vp`: members adjacent to `v` with a circle or an
/// arrowhead at `v`.
pub fn f_set(g: &MixedGraph, v: usize, vp: &VertexSet) -> VertexSet {
    vp.iter().filter(|&u| g.adjacent(u, v) && mark(g, v, u) != Mark::Tail).collect()
}

/// Uncovered circle paths inside `scope \ vp` with private `F` members at
/// both ends, listed in full.
pub fn unbridged_paths(g: &MixedGraph, vp: &VertexSet, scope: &VertexSet) -> Vec<Vec<usize>> {
    let scope = scope.difference(vp);
    let mut out = Vec::new();
    for v0 in scope.iter() {
        let extend = |p: &[usize], w: usize| scope.contains(w) && g.is_circle_edge(*p.last().unwrap(), w) && uncovered_step(g, p, w);
        for_each_path(g, &mut vec![v0], &extend, &mut |p| {
            let n = p.len();
            let private = |i: usize, j: usize| !f_set(g, p[i], vp).is_subset(&f_set(g, p[j], vp));
            if private(0, 1) && private(n - 1, n - 2) {
                out.push(p.to_vec());
            }
        });
    }
    out
}

/// R12 for `a o-* b` read off its statement. The scope avoids `S_A`, so
/// paths inside it are the same in `g` and in `g[-S_A]`.
pub fn r12_literal(g: &MixedGraph, a: usize, b: usize) -> bool {
    if mark(g, a, b) != Mark::Circle {
        return false;
    }
    let sa = s_a(g, a);
    let ks = uncovered_pd_endpoints(g, a, b).without(b).difference(&sa);
    !unbridged_paths(g, &sa, &ks).is_empty()
}

/// R13 for `a o-* b` read off its statement.
pub fn r13_literal(g: &MixedGraph, a: usize, b: usize) -> bool {
    if mark(g, a, b) != Mark::Circle {
        return false;
    }
    let an = ancestors(g, &s_a(g, a));
    uncovered_pd_endpoints(g, a, b).intersects(&an)
}

/// Ordered pairs `(a, b)` whose edge R12 or R13 transforms in `g`.
pub fn literal_transformable(g: &MixedGraph) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for a in 0..g.n() {
        for b in g.neighbors(a).iter() {
            if r13_literal(g, a, b) || r12_literal(g, a, b) {
                out.insert((a, b));
            }
        }
    }
    out
}

/// Bridgedness read off its definition: for every pair in a circle
/// component of `g[k]`, every minimal circle path between them has `F`
/// sets that grow and then shrink.
pub fn bridged_by_definition(g: &MixedGraph, k: &VertexSet, vp: &VertexSet) -> bool {
    let h = g.induced(k);
    for a in k.iter() {
        let extend = |p: &[usize], w: usize| {
            k.contains(w) && h.is_circle_edge(*p.last().unwrap(), w) && p[..p.len() - 1].iter().all(|&u| !h.adjacent(u, w))
        };
        let mut ok = true;
        for_each_path(&h, &mut vec![a], &extend, &mut |p| {
            let f: Vec<VertexSet> = p.iter().map(|&v| f_set(g, v, vp)).collect();
            let n = f.len();
            let bitonic = (0..n).any(|s| (0..s).all(|i| f[i].is_subset(&f[i + 1])) && (s..n - 1).all(|i| f[i + 1].is_subset(&f[i])));
            ok &= bitonic;
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Vertices `v ≠ x` joined to `x` by a collider path whose interior lies
/// in `interior`, optionally starting with an arrowhead at `x`.
pub fn collider_path_endpoints(g: &MixedGraph, x: usize, interior: &VertexSet, arrow_at_x: bool) -> VertexSet {
    let mut out = VertexSet::new();
    let extend = |p: &[usize], w: usize| {
        let last = *p.last().unwrap();
        if p.len() == 1 {
            return !arrow_at_x || mark(g, x, w) == Mark::Arrowhead;
        }
        let prev = p[p.len() - 2];
        // `last` becomes an interior collider
        interior.contains(last) && mark(g, last, prev) == Mark::Arrowhead && mark(g, last, w) == Mark::Arrowhead
    };
    for_each_path(g, &mut vec![x], &extend, &mut |p| {
        out.insert(*p.last().unwrap());
    });
    out
}

/// Draws a PAG on 4 to 7 observed vertices with 1 to 3 latents.
pub fn corpus_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let cfg = GenConfig {
        observed: rng.gen_range(4..=7),
        latents: rng.gen_range(1..=3),
        edge_prob: rng.gen_range(0.3..0.6),
        seed,
        mag_cap: 2_000,
        max_attempts: 1_000,
    };
    generate(&cfg).expect("instance within attempts")
}

/// Commits a random share of the circles of `p` to the marks of `m`.
pub fn sample_bk(p: &MixedGraph, m: &MixedGraph, share: f64, rng: &mut ChaCha8Rng) -> BackgroundKnowledge {
    let mut bk = BackgroundKnowledge::new();
    for e in p.edges() {
        for (at, other) in [(e.u, e.v), (e.v, e.u)] {
            if p.mark_at(at, other) == Some(Mark::Circle) && rng.gen_bool(share) {
                bk = bk.with(at, other, m.mark_at(at, other).expect("same skeleton"));
            }
        }
    }
    bk
}

/// Members of `mags` that carry every commitment of `bk`.
pub fn agreeing<'a>(mags: &'a [MixedGraph], bk: &BackgroundKnowledge) -> Vec<&'a MixedGraph> {
    mags.iter().filter(|m| bk.commitments.iter().all(|c| m.mark_at(c.at, c.other) == Some(c.mark))).collect()
}

/// Loads a fixture from `fixtures/`, with its `# key: value` header lines.
pub fn fixture(name: &str) -> (String, Vec<(String, String)>) {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let header = text
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| l.split_once(':'))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect();
    (text, header)
}

pub fn header<'a>(h: &'a [(String, String)], key: &str) -> &'a str {
    h.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str()).unwrap_or_else(|| panic!("no header {key}"))
}
