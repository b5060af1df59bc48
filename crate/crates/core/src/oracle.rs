//! Brute-force ground truth: latent projection, Markov equivalence by
//! m-separation fingerprints, exhaustive enumeration of the MAGs consistent
//! with a partial mixed graph, and adjustment-set checks on single MAGs.
//!
//! Everything here is exponential and meant for small graphs.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{GraphError, Mark, MixedGraph};
use crate::vset::VertexSet;

/// Largest graph the enumerating routines accept.
pub const ORACLE_MAX_VERTICES: usize = 16;

/// Default limit on the number of MAGs one enumeration may return.
pub const DEFAULT_MAG_CAP: usize = 50_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} vertices exceed the oracle limit of {ORACLE_MAX_VERTICES}")]
    TooLarge(usize),
    #[error("more than {0} consistent MAGs")]
    CapExceeded(usize),
    #[error("the latent DAG has a directed cycle")]
    Cyclic,
    #[error("empty bundle")]
    EmptyBundle,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A DAG over observed and latent vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatentDagSpec {
    pub dag: MixedGraph,
    pub latent: VertexSet,
}

impl LatentDagSpec {
    pub fn new(observed: &[&str], latent: &[&str], edges: &[(&str, &str)]) -> Result<Self, GraphError> {
        let mut dag = MixedGraph::new(observed.iter().chain(latent).copied())?;
        for &(a, b) in edges {
            let u = dag.index_of(a).ok_or_else(|| GraphError::UnknownVertex(a.into()))?;
            let v = dag.index_of(b).ok_or_else(|| GraphError::UnknownVertex(b.into()))?;
            dag.add_edge(u, v, Mark::Tail, Mark::Arrowhead)?;
        }
        let latent = (observed.len()..observed.len() + latent.len()).collect();
        Ok(LatentDagSpec { dag, latent })
    }

    pub fn observed(&self) -> VertexSet {
        self.dag.vertices().difference(&self.latent)
    }

    pub fn is_acyclic(&self) -> bool {
        self.dag.edges().iter().all(|e| {
            let (from, to) = if e.mark_at_v == Mark::Arrowhead { (e.u, e.v) } else { (e.v, e.u) };
            !self.dag.ancestors_of(from).contains(to)
        })
    }
}

/// Projects a latent DAG onto its observed vertices.
///
/// Two observed vertices are adjacent iff no set of observed vertices
/// d-separates them, which is the case iff the observed ancestors of the
/// pair fail to. An edge is `A → B` when `A` is an ancestor of `B`, and
/// `A ↔ B` when neither is an ancestor of the other.
pub fn project_dag_to_mag(d: &LatentDagSpec) -> Result<MixedGraph, OracleError> {
    if !d.is_acyclic() {
        return Err(OracleError::Cyclic);
    }
    let obs = d.observed().to_vec();
    let observed = d.observed();
    let mut m = MixedGraph::new(obs.iter().map(|&v| d.dag.label(v)))?;
    for (i, &a) in obs.iter().enumerate() {
        let an_a = d.dag.ancestors_of(a);
        for (j, &b) in obs.iter().enumerate().skip(i + 1) {
            let an_b = d.dag.ancestors_of(b);
            let z = an_a.union(&an_b).intersection(&observed).without(a).without(b);
            if d.dag.msep(a, b, &z) {
                continue;
            }
            let (mi, mj) = match (an_b.contains(a), an_a.contains(b)) {
                (true, false) => (Mark::Tail, Mark::Arrowhead),
                (false, true) => (Mark::Arrowhead, Mark::Tail),
                _ => (Mark::Arrowhead, Mark::Arrowhead),
            };
            m.add_edge(i, j, mi, mj)?;
        }
    }
    Ok(m)
}

/// All m-separation statements `x ⊥ y | Z` for `x < y` and
/// `Z ⊆ V \ {x, y}`, packed as bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    n: usize,
    bits: Vec<u64>,
}

fn for_each_statement(n: usize, mut f: impl FnMut(usize, usize, &VertexSet) -> bool) {
    for x in 0..n {
        for y in x + 1..n {
            let rest: VertexSet = (0..n).filter(|&v| v != x && v != y).collect();
            let rest = rest.to_vec();
            for mask in 0u64..(1u64 << rest.len()) {
                let z: VertexSet = rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                if !f(x, y, &z) {
                    return;
                }
            }
        }
    }
}

pub fn fingerprint(g: &MixedGraph) -> Fingerprint {
    let mut bits = Vec::new();
    let mut k = 0usize;
    for_each_statement(g.n(), |x, y, z| {
        if k.is_multiple_of(64) {
            bits.push(0);
        }
        if g.msep(x, y, z) {
            *bits.last_mut().expect("pushed above") |= 1 << (k % 64);
        }
        k += 1;
        true
    });
    Fingerprint { n: g.n(), bits }
}

fn matches_fingerprint(g: &MixedGraph, fp: &Fingerprint) -> bool {
    if g.n() != fp.n {
        return false;
    }
    let mut k = 0usize;
    let mut ok = true;
    for_each_statement(g.n(), |x, y, z| {
        let want = fp.bits[k / 64] >> (k % 64) & 1 == 1;
        ok = g.msep(x, y, z) == want;
        k += 1;
        ok
    });
    ok
}

/// Same m-separation statements over the same vertex set.
pub fn markov_equivalent(m1: &MixedGraph, m2: &MixedGraph) -> Result<bool, OracleError> {
    if m1.labels() != m2.labels() {
        return Err(GraphError::VertexMismatch.into());
    }
    Ok(matches_fingerprint(m2, &fingerprint(m1)))
}

/// A MAG in the class described by a PAG: arrowheads opposite circles turn
/// `o→` into `→`, and the `o-o` part is oriented acyclically along a
/// maximum cardinality search order, which adds no unshielded collider when
/// that part is chordal. Not validated here.
pub fn reference_mag(p: &MixedGraph) -> MixedGraph {
    let mut m = p.clone();
    for e in p.edges() {
        match (e.mark_at_u, e.mark_at_v) {
            (Mark::Circle, Mark::Circle) => {}
            (Mark::Circle, other) => m.set_mark_at(e.u, e.v, if other == Mark::Tail { Mark::Arrowhead } else { Mark::Tail }),
            (other, Mark::Circle) => m.set_mark_at(e.v, e.u, if other == Mark::Tail { Mark::Arrowhead } else { Mark::Tail }),
            _ => {}
        }
    }
    let order = p.circle_mcs_order(&p.vertices());
    let mut pos = vec![0; p.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    for e in p.edges() {
        if p.is_circle_edge(e.u, e.v) {
            let (a, b) = if pos[e.u] < pos[e.v] { (e.u, e.v) } else { (e.v, e.u) };
            m.put(a, b, Mark::Tail, Mark::Arrowhead);
        }
    }
    m
}

/// Every MAG consistent with a partial mixed graph, with the reference it
/// was compared against.
#[derive(Clone, Debug)]
pub struct OracleBundle {
    pub reference_pag: MixedGraph,
    /// Sorted, without duplicates.
    pub consistent_mags: Vec<MixedGraph>,
}

impl OracleBundle {
    pub fn is_empty(&self) -> bool {
        self.consistent_mags.is_empty()
    }

    pub fn len(&self) -> usize {
        self.consistent_mags.len()
    }

    /// `D-SEP(x, y, M_x)` for every MAG that admits the generalized back-door
    /// adjustment, in bundle order.
    pub fn per_mag_dsep(&self, x: usize, y: usize) -> Vec<Option<VertexSet>> {
        self.consistent_mags.iter().map(|m| adjustment_via_backdoor(m, x, y)).collect()
    }
}

/// MAGs consistent with `h` in the class of the PAG `p`: every assignment
/// of `h`'s circles that is a MAG and Markov equivalent to a member of `p`'s
/// class. When `p` has no member the bundle is empty.
pub fn enumerate_consistent_mags(h: &MixedGraph, p: &MixedGraph, cap: usize) -> Result<OracleBundle, OracleError> {
    let reference = reference_mag(p);
    let consistent_mags = if p.marks_refined_by(&reference) && reference.is_mag()? {
        enumerate_equivalent(h, &reference, cap)?
    } else {
        Vec::new()
    };
    Ok(OracleBundle { reference_pag: p.clone(), consistent_mags })
}

/// Assignments of `h`'s circles that are MAGs Markov equivalent to
/// `reference`.
///
/// Depth-first over the circle-bearing edges. A partial assignment is cut as
/// soon as its decided edges disagree with `reference` on an unshielded
/// collider or contain a directed or almost directed cycle; both properties
/// only get worse as more edges are decided.
pub fn enumerate_equivalent(h: &MixedGraph, reference: &MixedGraph, cap: usize) -> Result<Vec<MixedGraph>, OracleError> {
    if h.n() > ORACLE_MAX_VERTICES {
        return Err(OracleError::TooLarge(h.n()));
    }
    if h.labels() != reference.labels() {
        return Err(GraphError::VertexMismatch.into());
    }
    if !h.same_skeleton(reference) {
        return Ok(Vec::new());
    }
    let search = Search::new(h, reference, cap);
    if !search.consistent_so_far(h, None) {
        return Ok(Vec::new());
    }
    // split the top of the tree for the thread pool
    let mut frontier = vec![(h.clone(), 0usize)];
    while frontier.len() < 64 && frontier.iter().any(|(_, i)| *i < search.open.len()) {
        let mut next = Vec::new();
        for (g, i) in frontier {
            if i == search.open.len() {
                next.push((g, i));
                continue;
            }
            for g2 in search.children(&g, i) {
                next.push((g2, i + 1));
            }
        }
        frontier = next;
    }
    let found: Vec<Result<Vec<MixedGraph>, OracleError>> = frontier
        .into_par_iter()
        .map(|(mut g, i)| {
            let mut out = Vec::new();
            search.run(&mut g, i, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in found {
        all.extend(r?);
    }
    all.sort();
    all.dedup();
    Ok(all)
}

/// The mark pairs an open edge `(u, v)` may take.
type OpenEdge = (usize, usize, Vec<(Mark, Mark)>);

struct Search {
    fp: Fingerprint,
    /// Edges with a circle, as `(u, v, options)`.
    open: Vec<OpenEdge>,
    /// `collider[(a * n + b) * n + c]` for unshielded `a - b - c` in the skeleton.
    collider: Vec<bool>,
    found: AtomicUsize,
    cap: usize,
}

impl Search {
    fn new(h: &MixedGraph, reference: &MixedGraph, cap: usize) -> Self {
        let n = h.n();
        let fill = |m: Mark| if m == Mark::Circle { vec![Mark::Tail, Mark::Arrowhead] } else { vec![m] };
        let open = h
            .edges()
            .into_iter()
            .filter(|e| e.mark_at_u == Mark::Circle || e.mark_at_v == Mark::Circle)
            .map(|e| {
                let mut opts = Vec::new();
                for &a in &fill(e.mark_at_u) {
                    for &b in &fill(e.mark_at_v) {
                        if !(a == Mark::Tail && b == Mark::Tail) {
                            opts.push((a, b));
                        }
                    }
                }
                (e.u, e.v, opts)
            })
            .collect();
        let mut collider = vec![false; n * n * n];
        for (a, b, c) in reference.unshielded_colliders() {
            collider[(a * n + b) * n + c] = true;
            collider[(c * n + b) * n + a] = true;
        }
        Search { fp: fingerprint(reference), open, collider, found: AtomicUsize::new(0), cap }
    }

    fn decided(g: &MixedGraph, u: usize, v: usize) -> bool {
        g.mark_at(u, v) != Some(Mark::Circle) && g.mark_at(v, u) != Some(Mark::Circle)
    }

    /// Collider agreement on the triples through the edge `touched` (all
    /// triples when `None`), and no (almost) directed cycle among decided
    /// edges.
    fn consistent_so_far(&self, g: &MixedGraph, touched: Option<(usize, usize)>) -> bool {
        let n = g.n();
        let check_center = |b: usize, a: usize| {
            for c in g.neighbors(b).iter() {
                if c == a || g.adjacent(a, c) || !Self::decided(g, b, c) {
                    continue;
                }
                let is_col = g.arrow_into(b, a) && g.arrow_into(b, c);
                if is_col != self.collider[(a * n + b) * n + c] {
                    return false;
                }
            }
            true
        };
        match touched {
            Some((u, v)) => {
                if !check_center(u, v) || !check_center(v, u) {
                    return false;
                }
            }
            None => {
                for e in g.edges() {
                    if Self::decided(g, e.u, e.v) && (!check_center(e.u, e.v) || !check_center(e.v, e.u)) {
                        return false;
                    }
                }
            }
        }
        let an: Vec<VertexSet> = (0..n).map(|v| g.ancestors_of(v)).collect();
        g.edges().iter().all(|e| match (e.mark_at_u, e.mark_at_v) {
            (Mark::Tail, Mark::Arrowhead) => !an[e.u].contains(e.v),
            (Mark::Arrowhead, Mark::Tail) => !an[e.v].contains(e.u),
            (Mark::Arrowhead, Mark::Arrowhead) => !an[e.u].contains(e.v) && !an[e.v].contains(e.u),
            _ => true,
        })
    }

    fn children(&self, g: &MixedGraph, i: usize) -> Vec<MixedGraph> {
        let (u, v, ref opts) = self.open[i];
        opts.iter()
            .filter_map(|&(a, b)| {
                let mut g2 = g.clone();
                g2.put(u, v, a, b);
                self.consistent_so_far(&g2, Some((u, v))).then_some(g2)
            })
            .collect()
    }

    fn run(&self, g: &mut MixedGraph, i: usize, out: &mut Vec<MixedGraph>) -> Result<(), OracleError> {
        if i == self.open.len() {
            if g.is_maximal()? && matches_fingerprint(g, &self.fp) {
                if self.found.fetch_add(1, Ordering::Relaxed) >= self.cap {
                    return Err(OracleError::CapExceeded(self.cap));
                }
                out.push(g.clone());
            }
            return Ok(());
        }
        let (u, v, ref opts) = self.open[i];
        let saved = (g.mark_at(u, v).expect("edge"), g.mark_at(v, u).expect("edge"));
        for &(a, b) in opts {
            g.put(u, v, a, b);
            if self.consistent_so_far(g, Some((u, v))) {
                self.run(g, i + 1, out)?;
            }
        }
        g.put(u, v, saved.0, saved.1);
        Ok(())
    }
}

/// Per endpoint: the mark shared by every MAG, or a circle.
pub fn consensus_pag(bundle: &OracleBundle) -> Result<MixedGraph, OracleError> {
    consensus_of(&bundle.consistent_mags)
}

pub fn consensus_of(mags: &[MixedGraph]) -> Result<MixedGraph, OracleError> {
    let first = mags.first().ok_or(OracleError::EmptyBundle)?;
    let mut p = first.clone();
    for e in first.edges() {
        for (at, other) in [(e.u, e.v), (e.v, e.u)] {
            let m = first.mark_at(at, other);
            if mags.iter().any(|g| g.mark_at(at, other) != m) {
                p.set_mark_at(at, other, Mark::Circle);
            }
        }
    }
    Ok(p)
}

/// `D-SEP(x, y, g)`: vertices joined to `x` by a collider path on which
/// every vertex other than `x` is an ancestor of `x` or `y`.
pub fn dsep_set(g: &MixedGraph, x: usize, y: usize) -> VertexSet {
    let an = g.ancestors(&VertexSet::from_iter([x, y]));
    g.collider_reach(x, &an.without(x), false).intersection(&an)
}

/// Generalized back-door: with the edges out of `x` deleted, `y` must not be
/// adjacent to `x` and `D-SEP(x, y, ·)` must avoid the possible descendants
/// of `x`; the set is then returned.
pub fn adjustment_via_backdoor(g: &MixedGraph, x: usize, y: usize) -> Option<VertexSet> {
    let gx = g.remove_edges_out_of(x);
    if gx.adjacent(x, y) {
        return None;
    }
    let d = dsep_set(&gx, x, y);
    if d.contains(y) || d.intersects(&g.possible_descendants_of(x)) {
        return None;
    }
    Some(d)
}

/// Adjustment criterion on a MAG read as a causal graph: `w` avoids every
/// descendant of a vertex on a proper causal path from `x` to `y`, and
/// m-separates `x` from `y` once the first edges of those paths are
/// removed.
pub fn is_adjustment_set(m: &MixedGraph, x: usize, y: usize, w: &VertexSet) -> bool {
    if w.contains(x) || w.contains(y) {
        return false;
    }
    let causal = m.descendants(&VertexSet::singleton(x)).without(x).intersection(&m.ancestors_of(y));
    if w.intersects(&m.descendants(&causal)) {
        return false;
    }
    let mut pbd = m.clone();
    for c in causal.iter() {
        if m.is_directed(x, c) {
            pbd.remove_edge(x, c);
        }
    }
    pbd.msep(x, y, w)
}

/// Adjustment sets found by the generalized back-door in every consistent
/// MAG where `x` is an ancestor of `y`.
pub fn brute_force_set_determination(p: &MixedGraph, x: usize, y: usize, cap: usize) -> Result<BTreeSet<VertexSet>, OracleError> {
    let bundle = enumerate_consistent_mags(p, p, cap)?;
    Ok(bundle
        .consistent_mags
        .iter()
        .filter(|m| m.ancestors_of(y).contains(x))
        .filter_map(|m| adjustment_via_backdoor(m, x, y))
        .collect())
}
