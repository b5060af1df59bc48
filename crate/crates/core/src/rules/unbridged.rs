//! F-sets, unbridged paths and bridgedness relative to a vertex set.

use crate::graph::{Mark, MixedGraph};
use crate::query::Path;
use crate::vset::VertexSet;

/// `F_v`: members of the reference set adjacent to `v` with a non-tail mark
/// at `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSet {
    pub owner: usize,
    pub members: VertexSet,
}

pub fn fset(h: &MixedGraph, v: usize, reference: &VertexSet) -> FSet {
    let members = h.neighbors(v).intersection(reference).iter().filter(|&w| h.mark_at(v, w) != Some(Mark::Tail)).collect();
    FSet { owner: v, members }
}

/// An uncovered circle path `V0 o-o ... o-o Vn` outside the reference set
/// with `c1 ∈ F_V0 \ F_V1` and `c2 ∈ F_Vn \ F_Vn-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnbridgedPath {
    pub path: Path,
    pub witnesses: (usize, usize),
}

/// Searches `h[scope]` for an unbridged path relative to `vp`.
///
/// Breadth-first over consecutive pairs, which is exhaustive for walks. A
/// walk that revisits a vertex is re-checked by depth-first search over
/// simple paths from the same first edge.
pub fn find_unbridged_path(h: &MixedGraph, vp: &VertexSet, scope: &VertexSet) -> Option<UnbridgedPath> {
    let scope = scope.difference(vp);
    let f: Vec<VertexSet> = (0..h.n()).map(|v| if scope.contains(v) { fset(h, v, vp).members } else { VertexSet::new() }).collect();
    let private = |a: usize, b: usize| f[a].difference(&f[b]).first();
    let circle = |u: usize, v: usize| h.is_circle_edge(u, v);
    for v0 in scope.iter() {
        for v1 in h.circle_neighbors(v0).intersection(&scope).iter() {
            let Some(c1) = private(v0, v1) else { continue };
            let reach = h.uncovered_search(v0, v1, &scope, &circle);
            let mut needs_dfs = false;
            for (c, d) in reach.pairs() {
                let Some(c2) = private(d, c) else { continue };
                let walk = reach.walk_via(c, d);
                let simple = walk.iter().copied().collect::<VertexSet>().len() == walk.len();
                if simple {
                    let path = Path::new(h, walk).expect("walk vertices are distinct and adjacent");
                    return Some(UnbridgedPath { path, witnesses: (c1, c2) });
                }
                needs_dfs = true;
            }
            if needs_dfs {
                let mut path = vec![v0, v1];
                if let Some(found) = dfs(h, &scope, &f, &mut path) {
                    let c2 = private(found[found.len() - 1], found[found.len() - 2]).expect("checked in dfs");
                    return Some(UnbridgedPath { path: Path::new(h, found).expect("simple path"), witnesses: (c1, c2) });
                }
            }
        }
    }
    None
}

fn dfs(h: &MixedGraph, scope: &VertexSet, f: &[VertexSet], path: &mut Vec<usize>) -> Option<Vec<usize>> {
    let k = path.len();
    let (p, c) = (path[k - 2], path[k - 1]);
    if f[c].difference(&f[p]).first().is_some() {
        return Some(path.clone());
    }
    for d in h.circle_neighbors(c).intersection(scope).iter() {
        if path.contains(&d) || h.adjacent(p, d) {
            continue;
        }
        path.push(d);
        if let Some(found) = dfs(h, scope, f, path) {
            return Some(found);
        }
        path.pop();
    }
    None
}

/// `h[component]` is bridged relative to `vp`: equivalent to the absence of
/// an unbridged path inside the component.
pub fn is_bridged(h: &MixedGraph, component: &VertexSet, vp: &VertexSet) -> bool {
    find_unbridged_path(h, vp, component).is_none()
}
