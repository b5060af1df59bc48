//! Partial mixed graphs: vertices with string labels and edges whose two
//! endpoints each carry a tail, arrowhead or circle mark.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mark {
    Tail,
    Arrowhead,
    Circle,
}

impl Mark {
    fn code(self) -> u8 {
        match self {
            Mark::Tail => 1,
            Mark::Arrowhead => 2,
            Mark::Circle => 3,
        }
    }

    fn from_code(c: u8) -> Option<Mark> {
        match c {
            1 => Some(Mark::Tail),
            2 => Some(Mark::Arrowhead),
            3 => Some(Mark::Circle),
            _ => None,
        }
    }
}

/// One edge with the mark at each endpoint. `(u, v, a, b)` and `(v, u, b, a)`
/// describe the same edge; [`MixedGraph::edges`] yields the `u < v` form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRecord {
    pub u: usize,
    pub v: usize,
    pub mark_at_u: Mark,
    pub mark_at_v: Mark,
}

impl EdgeRecord {
    pub fn mirrored(self) -> EdgeRecord {
        EdgeRecord { u: self.v, v: self.u, mark_at_u: self.mark_at_v, mark_at_v: self.mark_at_u }
    }

    pub fn canonical(self) -> EdgeRecord {
        if self.u <= self.v {
            self
        } else {
            self.mirrored()
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(String),
    #[error("duplicate edge between {0} and {1}")]
    DuplicateEdge(String, String),
    #[error("duplicate vertex label {0}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("no edge between {0} and {1}")]
    NoEdge(String, String),
    #[error("edge between {0} and {1} has a tail at one end and a circle or tail at the other")]
    TailEdge(String, String),
    #[error("graph contains circle marks")]
    HasCircles,
    #[error("graphs are over different vertex sets")]
    VertexMismatch,
    #[error("not a path: {0}")]
    NotAPath(String),
}

/// Mixed graph with a dense end-mark matrix.
///
/// Vertex ids are positions in the label list. Subgraph operations keep the
/// id space and simply drop edges, so ids stay comparable across a graph and
/// every subgraph derived from it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedGraph {
    labels: Vec<String>,
    // marks[u * n + v]: mark at v on the edge {u, v}, 0 when absent
    marks: Vec<u8>,
    adj: Vec<VertexSet>,
}

impl MixedGraph {
    pub fn new<I, S>(labels: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(GraphError::DuplicateVertex(l.clone()));
            }
        }
        let n = labels.len();
        Ok(MixedGraph { labels, marks: vec![0; n * n], adj: vec![VertexSet::new(); n] })
    }

    /// Graph on `n` vertices labelled `V0 .. V{n-1}`.
    pub fn with_vertices(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("V{i}"))).expect("generated labels are distinct")
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Labels of a set, in id order.
    pub fn names(&self, s: &VertexSet) -> Vec<String> {
        s.iter().map(|v| self.labels[v].clone()).collect()
    }

    pub fn add_edge(&mut self, u: usize, v: usize, mark_at_u: Mark, mark_at_v: Mark) -> Result<(), GraphError> {
        let n = self.n();
        if u >= n {
            return Err(GraphError::UnknownVertex(format!("#{u}")));
        }
        if v >= n {
            return Err(GraphError::UnknownVertex(format!("#{v}")));
        }
        if u == v {
            return Err(GraphError::SelfLoop(self.labels[u].clone()));
        }
        if self.adjacent(u, v) {
            return Err(GraphError::DuplicateEdge(self.labels[u].clone(), self.labels[v].clone()));
        }
        self.put(u, v, mark_at_u, mark_at_v);
        Ok(())
    }

    /// Inserts or overwrites the edge `{u, v}`.
    pub fn put(&mut self, u: usize, v: usize, mark_at_u: Mark, mark_at_v: Mark) {
        assert_ne!(u, v, "self-loop");
        let n = self.n();
        self.marks[v * n + u] = mark_at_u.code();
        self.marks[u * n + v] = mark_at_v.code();
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        let n = self.n();
        self.marks[u * n + v] = 0;
        self.marks[v * n + u] = 0;
        self.adj[u].remove(v);
        self.adj[v].remove(u);
    }

    /// Mark at `at` on the edge `{at, other}`.
    #[inline]
    pub fn mark_at(&self, at: usize, other: usize) -> Option<Mark> {
        Mark::from_code(self.marks[other * self.n() + at])
    }

    /// Overwrites the mark at `at` on the existing edge `{at, other}`.
    pub fn set_mark_at(&mut self, at: usize, other: usize, m: Mark) {
        assert!(self.adjacent(at, other), "set_mark_at on a missing edge");
        let n = self.n();
        self.marks[other * n + at] = m.code();
    }

    pub fn edge(&self, u: usize, v: usize) -> Option<EdgeRecord> {
        Some(EdgeRecord { u, v, mark_at_u: self.mark_at(u, v)?, mark_at_v: self.mark_at(v, u)? })
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.marks[u * self.n() + v] != 0
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    /// All edges as `u < v` records, sorted.
    pub fn edges(&self) -> Vec<EdgeRecord> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push(self.edge(u, v).expect("adjacency and marks agree"));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// `u → v`.
    #[inline]
    pub fn is_directed(&self, u: usize, v: usize) -> bool {
        self.mark_at(u, v) == Some(Mark::Tail) && self.mark_at(v, u) == Some(Mark::Arrowhead)
    }

    /// `u ↔ v`.
    #[inline]
    pub fn is_bidirected(&self, u: usize, v: usize) -> bool {
        self.mark_at(u, v) == Some(Mark::Arrowhead) && self.mark_at(v, u) == Some(Mark::Arrowhead)
    }

    /// `u o-o v`.
    #[inline]
    pub fn is_circle_edge(&self, u: usize, v: usize) -> bool {
        self.mark_at(u, v) == Some(Mark::Circle) && self.mark_at(v, u) == Some(Mark::Circle)
    }

    /// `from *→ at`.
    #[inline]
    pub fn arrow_into(&self, at: usize, from: usize) -> bool {
        self.mark_at(at, from) == Some(Mark::Arrowhead)
    }

    /// Number of circle endpoints.
    pub fn circle_count(&self) -> usize {
        self.marks.iter().filter(|&&c| c == Mark::Circle.code()).count()
    }

    pub fn has_circles(&self) -> bool {
        self.circle_count() > 0
    }

    /// Same vertex ids, only the edges with both ends in `keep`.
    pub fn induced(&self, keep: &VertexSet) -> MixedGraph {
        let mut g = self.clone();
        for e in self.edges() {
            if !keep.contains(e.u) || !keep.contains(e.v) {
                g.remove_edge(e.u, e.v);
            }
        }
        g
    }

    /// `G[V \ drop]`.
    pub fn minus(&self, drop: &VertexSet) -> MixedGraph {
        self.induced(&self.vertices().difference(drop))
    }

    /// Deletes every edge with a tail at `x`.
    pub fn remove_edges_out_of(&self, x: usize) -> MixedGraph {
        let mut g = self.clone();
        for w in self.adj[x].iter() {
            if self.mark_at(x, w) == Some(Mark::Tail) {
                g.remove_edge(x, w);
            }
        }
        g
    }

    /// All vertices, only the `o-o` edges.
    pub fn circle_component(&self) -> MixedGraph {
        let mut g = self.clone();
        for e in self.edges() {
            if !(e.mark_at_u == Mark::Circle && e.mark_at_v == Mark::Circle) {
                g.remove_edge(e.u, e.v);
            }
        }
        g
    }

    /// Neighbours joined to `v` by `o-o`.
    pub fn circle_neighbors(&self, v: usize) -> VertexSet {
        self.adj[v].iter().filter(|&w| self.is_circle_edge(v, w)).collect()
    }

    /// Vertices reachable from `v` along `o-o` edges, `v` included.
    pub fn circle_reach(&self, v: usize) -> VertexSet {
        let mut seen = VertexSet::singleton(v);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for w in self.circle_neighbors(u).iter() {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn same_circle_component(&self, u: usize, v: usize) -> bool {
        self.circle_reach(u).contains(v)
    }

    /// Triples `a *→ b ←* c` with `a`, `c` non-adjacent, `a < c`.
    pub fn unshielded_colliders(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.n() {
            let into: Vec<usize> = self.adj[b].iter().filter(|&a| self.arrow_into(b, a)).collect();
            for (i, &a) in into.iter().enumerate() {
                for &c in &into[i + 1..] {
                    if !self.adjacent(a, c) {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Every pair in `s` adjacent.
    pub fn is_complete_on(&self, s: &VertexSet) -> bool {
        let vs = s.to_vec();
        vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| self.adjacent(a, b)))
    }

    pub fn same_skeleton(&self, other: &MixedGraph) -> bool {
        self.n() == other.n() && self.adj == other.adj
    }

    /// Same skeleton with every endpoint a circle.
    pub fn circled(&self) -> MixedGraph {
        let mut g = self.clone();
        for e in self.edges() {
            g.put(e.u, e.v, Mark::Circle, Mark::Circle);
        }
        g
    }

    /// Every non-circle mark of `self` is present in `h` at the same place,
    /// and the skeletons agree.
    pub fn marks_refined_by(&self, h: &MixedGraph) -> bool {
        self.same_skeleton(h)
            && self.edges().iter().all(|e| {
                (e.mark_at_u == Mark::Circle || h.mark_at(e.u, e.v) == Some(e.mark_at_u))
                    && (e.mark_at_v == Mark::Circle || h.mark_at(e.v, e.u) == Some(e.mark_at_v))
            })
    }

    /// Rejects edges with a tail next to a circle or another tail, which
    /// cannot occur without selection variables.
    pub fn validate_pmg(&self) -> Result<(), GraphError> {
        for e in self.edges() {
            let tailed = e.mark_at_u == Mark::Tail || e.mark_at_v == Mark::Tail;
            let other_ok = matches!((e.mark_at_u, e.mark_at_v), (Mark::Tail, Mark::Arrowhead) | (Mark::Arrowhead, Mark::Tail));
            if tailed && !other_ok {
                return Err(GraphError::TailEdge(self.labels[e.u].clone(), self.labels[e.v].clone()));
            }
        }
        Ok(())
    }

    /// Maximum cardinality search over the `o-o` edges inside `within`,
    /// ties broken towards the lower id.
    pub fn circle_mcs_order(&self, within: &VertexSet) -> Vec<usize> {
        let mut weight = vec![0usize; self.n()];
        let mut numbered = VertexSet::new();
        let mut order = Vec::new();
        while numbered.len() < within.len() {
            let v = within
                .iter()
                .filter(|&v| !numbered.contains(v))
                .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
                .expect("unnumbered vertex remains");
            numbered.insert(v);
            order.push(v);
            for w in self.circle_neighbors(v).intersection(within).iter() {
                if !numbered.contains(w) {
                    weight[w] += 1;
                }
            }
        }
        order
    }

    /// The `o-o` subgraph restricted to `within` has a perfect elimination
    /// ordering.
    pub fn circle_component_chordal(&self, within: &VertexSet) -> bool {
        let order = self.circle_mcs_order(within);
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        for &v in &order {
            let earlier: Vec<usize> =
                self.circle_neighbors(v).intersection(within).iter().filter(|&w| pos[w] < pos[v]).collect();
            if let Some(&parent) = earlier.iter().max_by_key(|&&w| pos[w]) {
                for &w in &earlier {
                    if w != parent && !self.is_circle_edge(w, parent) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl fmt::Debug for MixedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::serialize_graph(self))
    }
}

impl fmt::Display for MixedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::serialize_graph(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_graph;

    #[test]
    fn edge_symmetry() {
        let mut g = MixedGraph::with_vertices(3);
        g.add_edge(2, 0, Mark::Circle, Mark::Arrowhead).unwrap();
        assert_eq!(g.mark_at(0, 2), Some(Mark::Arrowhead));
        assert_eq!(g.mark_at(2, 0), Some(Mark::Circle));
        assert_eq!(g.edges(), vec![EdgeRecord { u: 0, v: 2, mark_at_u: Mark::Arrowhead, mark_at_v: Mark::Circle }]);
        assert!(g.add_edge(0, 2, Mark::Tail, Mark::Tail).is_err());
        assert!(g.add_edge(1, 1, Mark::Tail, Mark::Tail).is_err());
    }

    #[test]
    fn remove_out_edges() {
        let g = parse_graph("vertices: A B C\nA --> B\nA <-> C\n").unwrap();
        let h = g.remove_edges_out_of(0);
        assert_eq!(h, parse_graph("vertices: A B C\nA <-> C\n").unwrap());
    }

    #[test]
    fn induced_keeps_inner_edges() {
        let g = parse_graph("vertices: A B C\nA o-o B\nB o-o C\n").unwrap();
        let h = g.induced(&[0, 1].into_iter().collect());
        assert_eq!(h, parse_graph("vertices: A B C\nA o-o B\n").unwrap());
    }

    #[test]
    fn circle_component_basics() {
        let g = parse_graph("vertices: A B C\nA o-o B\nB --> C\n").unwrap();
        assert_eq!(g.circle_component().edge_count(), 1);
        assert!(!g.same_circle_component(0, 2));
        assert!(g.same_circle_component(0, 1));
        let k4 = parse_graph("vertices: A B C D\nA o-o B\nA o-o C\nA o-o D\nB o-o C\nB o-o D\nC o-o D\n").unwrap();
        for u in 0..4 {
            for v in 0..4 {
                assert!(k4.same_circle_component(u, v));
            }
        }
    }

    #[test]
    fn colliders() {
        let g = parse_graph("vertices: A B C\nA --> B\nC --> B\n").unwrap();
        assert_eq!(g.unshielded_colliders(), vec![(0, 1, 2)]);
        let g = parse_graph("vertices: A B C\nA --> B\nC --> B\nA o-o C\n").unwrap();
        assert!(g.unshielded_colliders().is_empty());
    }

    #[test]
    fn chordality() {
        let square = parse_graph("vertices: A B C D\nA o-o B\nB o-o C\nC o-o D\nD o-o A\n").unwrap();
        assert!(!square.circle_component_chordal(&square.vertices()));
        let mut tri = square.clone();
        tri.put(0, 2, Mark::Circle, Mark::Circle);
        assert!(tri.circle_component_chordal(&tri.vertices()));
        // a directed chord does not help the circle component
        let mut dir = square.clone();
        dir.put(0, 2, Mark::Tail, Mark::Arrowhead);
        assert!(!dir.circle_component_chordal(&dir.vertices()));
    }

    #[test]
    fn pmg_validation() {
        assert!(parse_graph("vertices: A B\nA o-- B\n").unwrap().validate_pmg().is_err());
        assert!(parse_graph("vertices: A B\nA --- B\n").unwrap().validate_pmg().is_err());
        assert!(parse_graph("vertices: A B\nA o-> B\n").unwrap().validate_pmg().is_ok());
    }
}
