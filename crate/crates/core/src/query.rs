//! Structural queries: paths, ancestry, collider reachability,
//! m-separation and MAG validity.

use std::collections::{BTreeMap, VecDeque};

use crate::graph::{GraphError, Mark, MixedGraph};
use crate::vset::VertexSet;

/// A simple path: distinct vertices, consecutive ones adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<usize>);

impl Path {
    pub fn new(g: &MixedGraph, vs: Vec<usize>) -> Result<Path, GraphError> {
        if vs.len() < 2 {
            return Err(GraphError::NotAPath("fewer than two vertices".into()));
        }
        for (i, &v) in vs.iter().enumerate() {
            if v >= g.n() {
                return Err(GraphError::UnknownVertex(format!("#{v}")));
            }
            if vs[..i].contains(&v) {
                return Err(GraphError::NotAPath(format!("{} repeats", g.label(v))));
            }
        }
        for w in vs.windows(2) {
            if !g.adjacent(w[0], w[1]) {
                return Err(GraphError::NotAPath(format!("{} and {} are not adjacent", g.label(w[0]), g.label(w[1]))));
            }
        }
        Ok(Path(vs))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PathClass {
    pub directed: bool,
    pub possibly_directed: bool,
    pub uncovered: bool,
    pub minimal: bool,
    pub collider: bool,
    pub circle: bool,
}

impl MixedGraph {
    /// One step `a` to `b` of a possibly directed path: no arrowhead at `a`,
    /// no tail at `b`.
    #[inline]
    pub fn pd_step(&self, a: usize, b: usize) -> bool {
        match (self.mark_at(a, b), self.mark_at(b, a)) {
            (Some(ma), Some(mb)) => ma != Mark::Arrowhead && mb != Mark::Tail,
            _ => false,
        }
    }

    pub fn classify_path(&self, p: &Path) -> PathClass {
        let vs = p.vertices();
        let k = vs.len();
        let steps = || vs.windows(2);
        PathClass {
            directed: steps().all(|w| self.is_directed(w[0], w[1])),
            possibly_directed: steps().all(|w| self.pd_step(w[0], w[1])),
            uncovered: vs.windows(3).all(|w| !self.adjacent(w[0], w[2])),
            minimal: (0..k).all(|i| (i + 2..k).all(|j| !self.adjacent(vs[i], vs[j]))),
            collider: vs.windows(3).all(|w| self.arrow_into(w[1], w[0]) && self.arrow_into(w[1], w[2])),
            circle: steps().all(|w| self.is_circle_edge(w[0], w[1])),
        }
    }

    fn closure(&self, s: &VertexSet, step: impl Fn(usize, usize) -> bool) -> VertexSet {
        let mut seen = s.clone();
        let mut stack: Vec<usize> = s.to_vec();
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u).iter() {
                if !seen.contains(w) && step(u, w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// `{u | u → s for some s ∈ S}`.
    pub fn parents(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for v in s.iter() {
            for u in self.neighbors(v).iter() {
                if self.is_directed(u, v) {
                    out.insert(u);
                }
            }
        }
        out
    }

    pub fn ancestors(&self, s: &VertexSet) -> VertexSet {
        self.closure(s, |cur, prev| self.is_directed(prev, cur))
    }

    pub fn descendants(&self, s: &VertexSet) -> VertexSet {
        self.closure(s, |cur, next| self.is_directed(cur, next))
    }

    pub fn possible_ancestors(&self, s: &VertexSet) -> VertexSet {
        self.closure(s, |cur, prev| self.pd_step(prev, cur))
    }

    pub fn possible_descendants(&self, s: &VertexSet) -> VertexSet {
        self.closure(s, |cur, next| self.pd_step(cur, next))
    }

    pub fn ancestors_of(&self, v: usize) -> VertexSet {
        self.ancestors(&VertexSet::singleton(v))
    }

    pub fn possible_descendants_of(&self, v: usize) -> VertexSet {
        self.possible_descendants(&VertexSet::singleton(v))
    }

    /// Vertices `v ≠ x` joined to `x` by a collider path whose interior lies
    /// in `interior`. With `arrow_at_x` the first edge must point into `x`.
    pub fn collider_reach(&self, x: usize, interior: &VertexSet, arrow_at_x: bool) -> VertexSet {
        self.collider_search(x, interior, arrow_at_x, |at, other| self.arrow_into(at, other))
    }

    /// As [`collider_reach`](Self::collider_reach), with circles allowed
    /// wherever an arrowhead is asked for.
    pub fn possible_collider_reach(&self, x: usize, interior: &VertexSet, arrow_at_x: bool) -> VertexSet {
        self.collider_search(x, interior, arrow_at_x, |at, other| self.mark_at(at, other) != Some(Mark::Tail))
    }

    fn collider_search(&self, x: usize, interior: &VertexSet, arrow_at_x: bool, head: impl Fn(usize, usize) -> bool) -> VertexSet {
        let mut out = VertexSet::new();
        let mut visited = VertexSet::new();
        let mut stack = Vec::new();
        for w in self.neighbors(x).iter() {
            if arrow_at_x && !head(x, w) {
                continue;
            }
            out.insert(w);
            if interior.contains(w) && head(w, x) && visited.insert(w) {
                stack.push(w);
            }
        }
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v).iter() {
                if w == x || !head(v, w) {
                    continue;
                }
                out.insert(w);
                if interior.contains(w) && head(w, v) && visited.insert(w) {
                    stack.push(w);
                }
            }
        }
        out
    }

    /// Breadth-first search over consecutive pairs for walks
    /// `start, second, ...` in which every step satisfies `step`, every
    /// vertex after `start` lies in `allowed`, and no consecutive triple is
    /// shielded. The walk never returns to `start`.
    pub fn uncovered_search(
        &self,
        start: usize,
        second: usize,
        allowed: &VertexSet,
        step: &dyn Fn(usize, usize) -> bool,
    ) -> UncoveredReach {
        let n = self.n();
        let mut reach = UncoveredReach { start, n, parent: BTreeMap::new(), end: vec![None; n] };
        if !allowed.contains(second) || !self.adjacent(start, second) || !step(start, second) {
            return reach;
        }
        let root = start * n + second;
        reach.parent.insert(root, root);
        reach.end[second] = Some(start);
        let mut queue = VecDeque::from([(start, second)]);
        while let Some((p, c)) = queue.pop_front() {
            for d in self.neighbors(c).iter() {
                if d == p || d == start || !allowed.contains(d) || self.adjacent(p, d) || !step(c, d) {
                    continue;
                }
                let idx = c * n + d;
                if reach.parent.contains_key(&idx) {
                    continue;
                }
                reach.parent.insert(idx, p * n + c);
                if reach.end[d].is_none() {
                    reach.end[d] = Some(c);
                }
                queue.push_back((c, d));
            }
        }
        reach
    }

    /// Uncovered possibly directed walks from `a` whose second vertex is `b`,
    /// staying inside `allowed`.
    pub fn uncovered_pd_search(&self, a: usize, b: usize, allowed: &VertexSet) -> UncoveredReach {
        self.uncovered_search(a, b, allowed, &|u, v| self.pd_step(u, v))
    }

    /// Second vertices of minimal possibly directed paths from `v` that end
    /// in `targets` and whose non-endpoints avoid `avoid`. Exhaustive over
    /// simple paths; each second vertex is settled once a witness is found.
    pub fn minimal_pd_second_vertices(&self, v: usize, targets: &VertexSet, avoid: &VertexSet) -> VertexSet {
        let mut found = VertexSet::new();
        for s in self.neighbors(v).iter() {
            if !self.pd_step(v, s) {
                continue;
            }
            if targets.contains(s) {
                found.insert(s);
                continue;
            }
            if avoid.contains(s) {
                continue;
            }
            let mut path = vec![v, s];
            let mut on_path = VertexSet::from_iter([v, s]);
            if self.minimal_pd_dfs(&mut path, &mut on_path, targets, avoid) {
                found.insert(s);
            }
        }
        found
    }

    fn minimal_pd_dfs(&self, path: &mut Vec<usize>, on_path: &mut VertexSet, targets: &VertexSet, avoid: &VertexSet) -> bool {
        let last = *path.last().expect("non-empty path");
        for w in self.neighbors(last).iter() {
            if on_path.contains(w) || !self.pd_step(last, w) {
                continue;
            }
            // minimality: w may only touch its predecessor
            if path[..path.len() - 1].iter().any(|&u| self.adjacent(u, w)) {
                continue;
            }
            if targets.contains(w) {
                return true;
            }
            if avoid.contains(w) {
                continue;
            }
            path.push(w);
            on_path.insert(w);
            let hit = self.minimal_pd_dfs(path, on_path, targets, avoid);
            path.pop();
            on_path.remove(w);
            if hit {
                return true;
            }
        }
        false
    }

    /// A discriminating path `⟨k, ..., a, b, r⟩` for `b`: `k` non-adjacent
    /// to `r`, at least one vertex between `k` and `b`, and every vertex
    /// strictly between `k` and `b` a collider on the path and a parent of
    /// `r`. Shortest such path for the given `k`.
    pub fn discriminating_path(&self, k: usize, b: usize, r: usize) -> Option<Path> {
        self.discriminating_search(b, r, Some(k))
    }

    /// Any discriminating path for `b` ending at `r`.
    pub fn find_discriminating_path(&self, b: usize, r: usize) -> Option<Path> {
        self.discriminating_search(b, r, None)
    }

    fn discriminating_search(&self, b: usize, r: usize, want_k: Option<usize>) -> Option<Path> {
        let n = self.n();
        if b == r || !self.adjacent(b, r) || want_k.is_some_and(|k| k == b || k == r || self.adjacent(k, r)) {
            return None;
        }
        let mut prev = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        // a: the vertex just before b; collider means arrowheads at a on both sides
        for a in self.neighbors(b).iter() {
            if a != r && self.arrow_into(a, b) && self.is_directed(a, r) {
                prev[a] = b;
                queue.push_back(a);
            }
        }
        while let Some(a) = queue.pop_front() {
            for w in self.neighbors(a).iter() {
                if w == b || w == r || prev[w] != usize::MAX || !self.arrow_into(a, w) {
                    continue;
                }
                let is_k = !self.adjacent(w, r) && want_k.is_none_or(|k| k == w);
                if is_k {
                    let mut vs = vec![w, a];
                    let mut cur = a;
                    while prev[cur] != b {
                        cur = prev[cur];
                        vs.push(cur);
                    }
                    vs.push(b);
                    vs.push(r);
                    return Some(Path(vs));
                }
                if self.arrow_into(w, a) && self.is_directed(w, r) {
                    prev[w] = a;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// m-separation of `x` and `y` given `z`.
    pub fn m_separated(&self, x: usize, y: usize, z: &VertexSet) -> Result<bool, GraphError> {
        if z.contains(x) || z.contains(y) {
            return Err(GraphError::NotAPath("conditioning set contains an endpoint".into()));
        }
        Ok(self.msep(x, y, z))
    }

    /// [`Self::m_separated`] without argument checks.
    pub fn msep(&self, x: usize, y: usize, z: &VertexSet) -> bool {
        !self.m_connected_from(x, z).contains(y)
    }

    /// Vertices m-connected to `x` given `z`.
    pub fn m_connected_from(&self, x: usize, z: &VertexSet) -> VertexSet {
        let n = self.n();
        let anz = self.ancestors(z);
        // state: (vertex, arrived with an arrowhead at it)
        let mut seen = vec![[false; 2]; n];
        let mut out = VertexSet::new();
        let mut stack = Vec::new();
        for w in self.neighbors(x).iter() {
            let into = self.arrow_into(w, x) as usize;
            if !seen[w][into] {
                seen[w][into] = true;
                stack.push((w, into == 1));
            }
        }
        while let Some((v, into)) = stack.pop() {
            out.insert(v);
            for w in self.neighbors(v).iter() {
                if w == x {
                    continue;
                }
                let collider = into && self.arrow_into(v, w);
                let open = if collider { anz.contains(v) } else { !z.contains(v) };
                if !open {
                    continue;
                }
                let wi = self.arrow_into(w, v) as usize;
                if !seen[w][wi] {
                    seen[w][wi] = true;
                    stack.push((w, wi == 1));
                }
            }
        }
        out
    }

    /// No directed cycle and no almost directed cycle. Tail-tail edges are
    /// rejected as not ancestral since selection variables are out of scope.
    pub fn is_ancestral(&self) -> Result<bool, GraphError> {
        if self.has_circles() {
            return Err(GraphError::HasCircles);
        }
        for e in self.edges() {
            let (u, v) = (e.u, e.v);
            match (e.mark_at_u, e.mark_at_v) {
                (Mark::Tail, Mark::Tail) => return Ok(false),
                (Mark::Tail, Mark::Arrowhead) => {
                    if self.ancestors_of(u).contains(v) {
                        return Ok(false);
                    }
                }
                (Mark::Arrowhead, Mark::Tail) => {
                    if self.ancestors_of(v).contains(u) {
                        return Ok(false);
                    }
                }
                _ => {
                    if self.ancestors_of(u).contains(v) || self.ancestors_of(v).contains(u) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// No inducing path (every interior vertex a collider that is an
    /// ancestor of an endpoint) between any non-adjacent pair.
    pub fn is_maximal(&self) -> Result<bool, GraphError> {
        if self.has_circles() {
            return Err(GraphError::HasCircles);
        }
        for x in 0..self.n() {
            for y in x + 1..self.n() {
                if self.adjacent(x, y) {
                    continue;
                }
                let an = self.ancestors(&VertexSet::from_iter([x, y]));
                if self.collider_reach(x, &an, false).contains(y) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_mag(&self) -> Result<bool, GraphError> {
        Ok(self.is_ancestral()? && self.is_maximal()?)
    }
}

/// Result of [`MixedGraph::uncovered_search`].
#[derive(Clone, Debug)]
pub struct UncoveredReach {
    start: usize,
    n: usize,
    /// Keyed by `c * n + d` for each reached pair.
    parent: BTreeMap<usize, usize>,
    end: Vec<Option<usize>>,
}

impl UncoveredReach {
    /// Vertices (other than the start) at which some walk ends.
    pub fn reached(&self) -> VertexSet {
        (0..self.n).filter(|&v| self.end[v].is_some()).collect()
    }

    pub fn reaches(&self, v: usize) -> bool {
        self.end[v].is_some()
    }

    /// Whether some walk arrives at `d` from `c`.
    pub fn has_pair(&self, c: usize, d: usize) -> bool {
        self.parent.contains_key(&(c * self.n + d))
    }

    /// One walk from the start to `v`, following recorded parents.
    pub fn walk_to(&self, v: usize) -> Option<Vec<usize>> {
        let prev = self.end[v]?;
        Some(self.walk_via(prev, v))
    }

    /// Reached consecutive pairs `(c, d)`: some walk arrives at `d` from `c`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.keys().map(|&i| (i / self.n, i % self.n))
    }

    /// The recorded walk whose last step is `c` to `d`.
    pub fn walk_via(&self, c: usize, d: usize) -> Vec<usize> {
        let mut out = vec![d];
        let mut idx = c * self.n + d;
        loop {
            let p = self.parent[&idx];
            if p == idx {
                out.push(self.start);
                break;
            }
            out.push(idx / self.n);
            idx = p;
        }
        out.reverse();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_graph;

    fn g(s: &str) -> MixedGraph {
        parse_graph(s).unwrap()
    }

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn classify_chain_and_circle() {
        let chain = g("vertices: A B C\nA --> B\nB --> C\n");
        let c = chain.classify_path(&Path::new(&chain, vec![0, 1, 2]).unwrap());
        assert!(c.directed && c.possibly_directed && c.uncovered && c.minimal && !c.collider && !c.circle);
        let circ = g("vertices: A B\nA o-o B\n");
        let c = circ.classify_path(&Path::new(&circ, vec![0, 1]).unwrap());
        assert!(c.possibly_directed && c.circle && !c.directed);
    }

    #[test]
    fn path_validation() {
        let chain = g("vertices: A B C\nA --> B\nB --> C\n");
        assert!(Path::new(&chain, vec![0, 2]).is_err());
        assert!(Path::new(&chain, vec![0, 1, 0]).is_err());
        assert!(Path::new(&chain, vec![0]).is_err());
    }

    #[test]
    fn ancestry() {
        let chain = g("vertices: A B C\nA --> B\nB --> C\n");
        assert_eq!(chain.ancestors(&set(&[2])), set(&[0, 1, 2]));
        let circ = g("vertices: A B\nA o-o B\n");
        assert_eq!(circ.possible_descendants(&set(&[0])), set(&[0, 1]));
        assert_eq!(circ.descendants(&set(&[0])), set(&[0]));
    }

    #[test]
    fn msep_chain_and_collider() {
        let chain = g("vertices: A B C\nA --> B\nB --> C\n");
        assert!(chain.m_separated(0, 2, &set(&[1])).unwrap());
        assert!(!chain.m_separated(0, 2, &set(&[])).unwrap());
        let coll = g("vertices: A B C\nA --> B\nC --> B\n");
        assert!(coll.m_separated(0, 2, &set(&[])).unwrap());
        assert!(!coll.m_separated(0, 2, &set(&[1])).unwrap());
        assert!(coll.m_separated(0, 2, &set(&[0])).is_err());
    }

    #[test]
    fn ancestral_and_maximal() {
        let cyc = g("vertices: A B C\nA --> B\nB --> C\nC <-> A\n");
        assert!(!cyc.is_ancestral().unwrap());
        let bb = g("vertices: A B C\nA <-> B\nB <-> C\n");
        assert!(bb.is_maximal().unwrap());
        assert!(bb.is_ancestral().unwrap());
        // collider B is an ancestor of C through D, so A <-> B <-> C is inducing
        let ip = g("vertices: A B C D\nA <-> B\nB <-> C\nB --> D\nD --> C\n");
        assert!(!ip.is_maximal().unwrap());
        assert!(g("vertices: A\n").is_mag().unwrap());
        assert!(g("vertices: A B\nA o-> B\n").is_mag().is_err());
    }

    #[test]
    fn discriminating_paths() {
        let h = g("vertices: K V1 B R\nK --> V1\nV1 <-> B\nV1 --> R\nB o-o R\n");
        let p = h.find_discriminating_path(2, 3).unwrap();
        assert_eq!(p.vertices(), &[0, 1, 2, 3]);
        assert_eq!(h.discriminating_path(0, 2, 3), Some(p));
        let chain = g("vertices: A B C\nA --> B\nB --> C\n");
        assert!(chain.find_discriminating_path(1, 2).is_none());
    }

    #[test]
    fn uncovered_walks() {
        let h = g("vertices: A B C D\nA o-o B\nB o-o C\nA o-o C\nC o-o D\n");
        let r = h.uncovered_pd_search(0, 1, &h.vertices());
        // A B C is covered, so nothing beyond B
        assert_eq!(r.reached(), set(&[1]));
        let r = h.uncovered_pd_search(1, 2, &h.vertices());
        assert_eq!(r.reached(), set(&[2, 3]));
        assert_eq!(r.walk_to(3), Some(vec![1, 2, 3]));
    }
}
