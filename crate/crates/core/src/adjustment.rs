//! Adjustment sets across the MAGs a PAG represents.
//!
//! Each valid way of resolving the circles at `x` gives a maximal local MAG.
//! Within it, a candidate `W` is tested either by walking block sets between
//! their lower and upper bounds, or by growing a single block set from the
//! minimal possibly directed paths out of `W̄` and letting R12 point at the
//! vertices that must join it.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Mark, MixedGraph};
use crate::rules::{close, find_unbridged_path, fset, is_bridged, r12_probe, RuleError, RuleId};
use crate::vset::VertexSet;

/// Resolves every circle at `x`: `X ←* V` for `V ∈ c`, `X → V` for the other
/// circle neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalTransformation {
    pub x: usize,
    pub c: VertexSet,
}

impl LocalTransformation {
    /// Every choice of `c` for `x` in `p`, smallest first.
    pub fn all(p: &MixedGraph, x: usize) -> Vec<LocalTransformation> {
        circle_neighbors_at(p, x).subsets_iter().map(|c| LocalTransformation { x, c }).collect()
    }

    pub fn apply_to(&self, p: &MixedGraph) -> MixedGraph {
        let mut g = p.clone();
        for v in circle_neighbors_at(p, self.x).iter() {
            if self.c.contains(v) {
                g.set_mark_at(self.x, v, Mark::Arrowhead);
            } else {
                g.set_mark_at(self.x, v, Mark::Tail);
                g.set_mark_at(v, self.x, Mark::Arrowhead);
            }
        }
        g
    }
}

/// Neighbours `v` with a circle at `x` on the edge `{x, v}`.
pub fn circle_neighbors_at(g: &MixedGraph, x: usize) -> VertexSet {
    g.neighbors(x).iter().filter(|&v| g.mark_at(x, v) == Some(Mark::Circle)).collect()
}

/// Whether some MAG in the class of `p` carries the marks of `t` at `x`.
pub fn valid_local_transformation(p: &MixedGraph, t: &LocalTransformation) -> bool {
    let x = t.x;
    if !t.c.is_subset(&circle_neighbors_at(p, x)) {
        return false;
    }
    let pd = p.minus(&t.c).possible_descendants_of(x);
    if pd.intersects(&p.parents(&t.c)) || !p.is_complete_on(&t.c) {
        return false;
    }
    is_bridged(p, &pd.without(x), &t.c.with(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalLocalMag {
    pub graph: MixedGraph,
    pub transformation: LocalTransformation,
}

/// `t` applied to `p`, closed under R1–R3, R4′ and R8–R11.
pub fn maximal_local_mag(p: &MixedGraph, t: &LocalTransformation) -> Result<MaximalLocalMag, RuleError> {
    let (graph, _) = close(&t.apply_to(p), &RuleId::CLASSIC)?;
    Ok(MaximalLocalMag { graph, transformation: t.clone() })
}

/// `W̄`: possible ancestors of `y` outside `w` that `x` reaches by a
/// collider path into `x` with every interior vertex in `w`.
pub fn bar_w(m: &MixedGraph, w: &VertexSet, x: usize, y: usize) -> VertexSet {
    m.collider_reach(x, w, true).intersection(&m.possible_ancestors(&VertexSet::singleton(y))).difference(w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSetBounds {
    pub bar_w: VertexSet,
    pub s_min: VertexSet,
    pub s_max: VertexSet,
}

impl BlockSetBounds {
    pub fn admits(&self, s: &VertexSet) -> bool {
        self.s_min.is_subset(s) && s.is_subset(&self.s_max)
    }
}

pub fn block_set_bounds(m: &MixedGraph, w: &VertexSet, x: usize, y: usize) -> BlockSetBounds {
    let bw = bar_w(m, w, x, y);
    let below = m.possible_descendants(&bw).difference(&bw);
    let yw = w.with(y);
    BlockSetBounds {
        s_min: m.ancestors(&yw).intersection(&below),
        s_max: m.possible_ancestors(&yw).intersection(&below),
        bar_w: bw,
    }
}

pub fn is_potential_adjustment_set(m: &MixedGraph, w: &VertexSet, x: usize, y: usize) -> bool {
    if w.contains(x) || w.contains(y) {
        return false;
    }
    let bw = bar_w(m, w, x, y);
    let reach = m.collider_reach(x, w, true);
    let to_y = m.minus(&bw).possible_ancestors(&VertexSet::singleton(y));
    if !w.iter().all(|v| reach.contains(v) && to_y.contains(v)) {
        return false;
    }
    if w.intersects(&m.possible_descendants_of(x)) {
        return false;
    }
    bw.is_disjoint(&m.ancestors(&w.with(y)))
}

/// The back-door set `D-SEP(x, y, ·)` with the edges out of `x` removed,
/// when `p` pins it down: collider paths through definite ancestors and
/// possible collider paths through possible ancestors must reach the same
/// vertices, so every consistent MAG has this set. `None` unless it also
/// avoids `PossDe(x)` and `y` is not adjacent to `x` by another edge.
pub fn global_backdoor_set(p: &MixedGraph, x: usize, y: usize) -> Option<VertexSet> {
    let px = p.remove_edges_out_of(x);
    if px.adjacent(x, y) {
        return None;
    }
    let ends = VertexSet::from_iter([x, y]);
    let (an, pan) = (px.ancestors(&ends), px.possible_ancestors(&ends));
    let lower = px.collider_reach(x, &an.without(x), false).intersection(&an);
    let upper = px.possible_collider_reach(x, &pan.without(x), false).intersection(&pan);
    if lower != upper || lower.contains(y) || lower.intersects(&p.possible_descendants_of(x)) {
        return None;
    }
    Some(lower)
}

/// Vertices that belong to `D-SEP(x, y, ·)` of every consistent MAG that
/// admits adjustment. Read on `m` with the edges out of `x` removed.
pub fn dd_sep(m: &MixedGraph, x: usize, y: usize) -> VertexSet {
    let mut d = VertexSet::new();
    if !m.possible_descendants_of(x).contains(y) {
        return d;
    }
    let mx = m.remove_edges_out_of(x);
    let an_y = m.ancestors_of(y);
    let forced = |v: usize| {
        if an_y.contains(v) {
            return true;
        }
        let q: VertexSet = m.neighbors(v).intersection(&an_y).iter().filter(|&u| m.mark_at(v, u) == Some(Mark::Circle)).collect();
        !m.is_complete_on(&q)
    };
    loop {
        let grown: VertexSet = mx.collider_reach(x, &d, true).iter().filter(|&v| d.contains(v) || forced(v)).collect();
        if grown == d {
            return d;
        }
        d = grown;
    }
}

/// Second vertices of minimal possibly directed paths from `W̄` into
/// `Anc(W ∪ {y})` with no interior vertex in `W̄`.
pub fn s0(m: &MixedGraph, w: &VertexSet, bw: &VertexSet, y: usize) -> VertexSet {
    let targets = m.ancestors(&w.with(y));
    let mut out = VertexSet::new();
    for v in bw.iter() {
        out.union_with(&m.minimal_pd_second_vertices(v, &targets, bw));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetUpdate {
    pub block_set: Option<VertexSet>,
    /// Passes through the loop, the final one included.
    pub loops: usize,
    pub r12_firings: usize,
    /// `m` with the arrowheads added along the way.
    pub graph: MixedGraph,
}

/// Grows a block set for `w` from `S0`, adding arrowheads at `W̄` and
/// following R12. `None` when no consistent MAG has `w` as an adjustment
/// set.
pub fn update_s(m: &MixedGraph, x: usize, y: usize, w: &VertexSet) -> SetUpdate {
    let bw = bar_w(m, w, x, y);
    let mut s = s0(m, w, &bw, y);
    let mut g = m.clone();
    let t = g.minus(&s).possible_descendants(&bw).difference(&bw);
    let mut loops = 0;
    let mut r12_firings = 0;
    loop {
        loops += 1;
        let done = |block_set, graph| SetUpdate { block_set, loops, r12_firings, graph };
        for v in bw.iter() {
            let sv: VertexSet = g.neighbors(v).intersection(&s).iter().filter(|&u| g.mark_at(v, u) != Some(Mark::Tail)).collect();
            if !g.is_complete_on(&sv) {
                return done(None, g);
            }
        }
        if g.minus(&s).possible_descendants(&bw).intersects(&g.parents(&s)) {
            return done(None, g);
        }
        for v in bw.iter() {
            for u in g.neighbors(v).intersection(&s).iter() {
                if g.mark_at(v, u) == Some(Mark::Circle) {
                    g.set_mark_at(v, u, Mark::Arrowhead);
                }
            }
        }
        if let Some((a, b, _)) = r12_probe(&g) {
            g.set_mark_at(a, b, Mark::Arrowhead);
            r12_firings += 1;
            s.union_with(&g.ancestors_of(b).intersection(&t));
            continue;
        }
        let k = g.minus(&s).possible_descendants(&bw);
        let found = find_unbridged_path(&g, &s, &k).is_none().then_some(s);
        return done(found, g);
    }
}

/// The three conditions under which the block set `s` yields a MAG with
/// `w` as adjustment set, `bw` being `W̄` for `w`.
pub fn block_set_conditions(m: &MixedGraph, bw: &VertexSet, s: &VertexSet) -> bool {
    let k = m.minus(s).possible_descendants(bw);
    if k.intersects(&m.parents(s)) {
        return false;
    }
    for v in bw.iter() {
        let sv: VertexSet = m.neighbors(v).intersection(s).iter().filter(|&u| m.mark_at(v, u) == Some(Mark::Circle)).collect();
        if !m.is_complete_on(&sv) {
            return false;
        }
    }
    is_bridged(m, &k, s)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("both orientations forced on {0} o-o {1}")]
    Conflict(String, String),
    #[error("circle left on the edge {0} - {1}")]
    LeftoverCircle(String, String),
    #[error("the result is not a MAG")]
    NotMag,
    #[error("the result drops a mark of the input")]
    Inconsistent,
}

/// A MAG consistent with `m` built from the block set `s`: arrowheads at
/// the possible descendants of `W̄` facing `s`, circle edges among them
/// ordered by the sets of `s` they receive marks from, and the remaining
/// circle components oriented without new unshielded colliders.
pub fn construct_witness_mag(m: &MixedGraph, bw: &VertexSet, s: &VertexSet) -> Result<MixedGraph, ConstructionError> {
    let k = m.minus(s).possible_descendants(bw);
    let mut g = m.clone();
    for v in k.iter() {
        for u in m.neighbors(v).intersection(s).iter() {
            if g.mark_at(v, u) == Some(Mark::Circle) {
                g.set_mark_at(v, u, Mark::Arrowhead);
            }
        }
    }
    let f: Vec<VertexSet> = (0..m.n()).map(|v| fset(m, v, s).members).collect();
    loop {
        let mut changed = false;
        for e in g.edges() {
            if !k.contains(e.u) || !k.contains(e.v) || !g.is_circle_edge(e.u, e.v) {
                continue;
            }
            let fwd = points_forward(&g, &k, &f, e.u, e.v);
            let back = points_forward(&g, &k, &f, e.v, e.u);
            match (fwd, back) {
                (true, true) => return Err(ConstructionError::Conflict(m.label(e.u).into(), m.label(e.v).into())),
                (true, false) => g.put(e.u, e.v, Mark::Tail, Mark::Arrowhead),
                (false, true) => g.put(e.v, e.u, Mark::Tail, Mark::Arrowhead),
                (false, false) => continue,
            }
            changed = true;
        }
        if !changed {
            break;
        }
    }
    for e in g.edges() {
        match (e.mark_at_u, e.mark_at_v) {
            (Mark::Circle, Mark::Arrowhead) => g.set_mark_at(e.u, e.v, Mark::Tail),
            (Mark::Arrowhead, Mark::Circle) => g.set_mark_at(e.v, e.u, Mark::Tail),
            _ => {}
        }
    }
    orient_circles_acyclic(&mut g, &k);
    let rest = g.vertices().difference(&k);
    orient_circles_acyclic(&mut g, &rest);
    if let Some(e) = g.edges().into_iter().find(|e| e.mark_at_u == Mark::Circle || e.mark_at_v == Mark::Circle) {
        return Err(ConstructionError::LeftoverCircle(m.label(e.u).into(), m.label(e.v).into()));
    }
    if !g.is_mag().unwrap_or(false) {
        return Err(ConstructionError::NotMag);
    }
    if !m.marks_refined_by(&g) {
        return Err(ConstructionError::Inconsistent);
    }
    Ok(g)
}

fn points_forward(g: &MixedGraph, k: &VertexSet, f: &[VertexSet], vi: usize, vj: usize) -> bool {
    if !f[vi].is_subset(&f[vj]) {
        return true;
    }
    f[vi] == f[vj] && k.iter().any(|vk| vk != vj && !g.adjacent(vk, vj) && g.is_directed(vk, vi))
}

/// Orients the `o-o` edges inside `within` along a maximum cardinality
/// search. A vertex is numbered only after its directed parents inside
/// `within` when some such vertex exists.
fn orient_circles_acyclic(g: &mut MixedGraph, within: &VertexSet) {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut numbered = VertexSet::new();
    let mut pos = vec![usize::MAX; n];
    while numbered.len() < within.len() {
        let open: Vec<usize> = within.iter().filter(|&v| !numbered.contains(v)).collect();
        let ready: Vec<usize> = open
            .iter()
            .copied()
            .filter(|&v| g.neighbors(v).intersection(within).iter().all(|u| numbered.contains(u) || !g.is_directed(u, v)))
            .collect();
        let pool = if ready.is_empty() { &open } else { &ready };
        let v = *pool.iter().max_by_key(|&&v| (weight[v], std::cmp::Reverse(v))).expect("open vertex remains");
        pos[v] = numbered.len();
        numbered.insert(v);
        for w in g.circle_neighbors(v).intersection(within).iter() {
            if !numbered.contains(w) {
                weight[w] += 1;
            }
        }
    }
    for e in g.edges() {
        if within.contains(e.u) && within.contains(e.v) && g.is_circle_edge(e.u, e.v) {
            let (a, b) = if pos[e.u] < pos[e.v] { (e.u, e.v) } else { (e.v, e.u) };
            g.put(a, b, Mark::Tail, Mark::Arrowhead);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeterminationOptions {
    /// Answer with the generalized back-door set of the PAG itself when it
    /// exists.
    pub global_shortcut: bool,
    /// Skip maximal local MAGs in which `y` is not a possible descendant of
    /// `x`: no MAG consistent with them has `x` as an ancestor of `y`.
    pub require_y_reachable: bool,
    /// Upper bound on block sets the baseline may examine.
    pub block_set_budget: u64,
}

impl Default for DeterminationOptions {
    fn default() -> Self {
        DeterminationOptions { global_shortcut: true, require_y_reachable: true, block_set_budget: 1 << 24 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "sets", rename_all = "snake_case")]
pub enum Outcome {
    /// `x` is not a possible ancestor of `y`.
    NoEffect,
    /// The PAG admits this adjustment set in every member.
    GloballyIdentified(VertexSet),
    /// Adjustment sets found across the consistent MAGs, sorted.
    SetOfSets(Vec<VertexSet>),
}

impl Outcome {
    /// The sets the outcome names; empty for `NoEffect`.
    pub fn sets(&self) -> Vec<VertexSet> {
        match self {
            Outcome::NoEffect => Vec::new(),
            Outcome::GloballyIdentified(w) => vec![w.clone()],
            Outcome::SetOfSets(ws) => ws.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TransformationTrace {
    /// Neighbours given an arrowhead at `x`.
    pub arrow_at_x: VertexSet,
    pub valid: bool,
    pub dd_sep: VertexSet,
    pub accepted: Vec<VertexSet>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub transformations: usize,
    pub valid_transformations: usize,
    pub candidate_sets: u64,
    pub potential_sets: u64,
    pub update_loops: u64,
    pub max_update_loops: usize,
    pub r12_firings: u64,
    pub block_sets_tested: u64,
    pub per_transformation: Vec<TransformationTrace>,
}

impl Diagnostics {
    fn absorb(&mut self, other: Diagnostics) {
        self.candidate_sets += other.candidate_sets;
        self.potential_sets += other.potential_sets;
        self.update_loops += other.update_loops;
        self.max_update_loops = self.max_update_loops.max(other.max_update_loops);
        self.r12_firings += other.r12_firings;
        self.block_sets_tested += other.block_sets_tested;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjustmentReport {
    pub outcome: Outcome,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeterminationError {
    #[error("x and y must differ")]
    SameVertex,
    #[error("vertex {0} out of range")]
    NoVertex(usize),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("block-set budget of {0} exhausted")]
    BudgetExceeded(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Rules,
    BlockSets,
}

/// Adjustment sets over the MAGs of `p`, each candidate decided by
/// [`update_s`] and only candidates containing [`dd_sep`] considered.
pub fn determine_with_rules(
    p: &MixedGraph,
    x: usize,
    y: usize,
    opts: &DeterminationOptions,
) -> Result<AdjustmentReport, DeterminationError> {
    determine(p, x, y, opts, Method::Rules)
}

/// Same answer as [`determine_with_rules`], each candidate decided by
/// walking its block sets.
pub fn determine_with_block_sets(
    p: &MixedGraph,
    x: usize,
    y: usize,
    opts: &DeterminationOptions,
) -> Result<AdjustmentReport, DeterminationError> {
    determine(p, x, y, opts, Method::BlockSets)
}

fn determine(
    p: &MixedGraph,
    x: usize,
    y: usize,
    opts: &DeterminationOptions,
    method: Method,
) -> Result<AdjustmentReport, DeterminationError> {
    if x == y {
        return Err(DeterminationError::SameVertex);
    }
    if let Some(&v) = [x, y].iter().find(|&&v| v >= p.n()) {
        return Err(DeterminationError::NoVertex(v));
    }
    let mut diagnostics = Diagnostics::default();
    if !p.possible_ancestors(&VertexSet::singleton(y)).contains(x) {
        return Ok(AdjustmentReport { outcome: Outcome::NoEffect, diagnostics });
    }
    if opts.global_shortcut {
        if let Some(d) = global_backdoor_set(p, x, y) {
            return Ok(AdjustmentReport { outcome: Outcome::GloballyIdentified(d), diagnostics });
        }
    }
    let transformations = LocalTransformation::all(p, x);
    diagnostics.transformations = transformations.len();
    let per: Vec<Result<(TransformationTrace, Diagnostics), DeterminationError>> =
        transformations.par_iter().map(|t| within_transformation(p, t, y, opts, method)).collect();
    let mut sets = Vec::new();
    for r in per {
        let (trace, d) = r?;
        diagnostics.valid_transformations += usize::from(trace.valid);
        sets.extend(trace.accepted.iter().cloned());
        diagnostics.absorb(d);
        diagnostics.per_transformation.push(trace);
    }
    if diagnostics.block_sets_tested > opts.block_set_budget {
        return Err(DeterminationError::BudgetExceeded(opts.block_set_budget));
    }
    sets.sort();
    sets.dedup();
    Ok(AdjustmentReport { outcome: Outcome::SetOfSets(sets), diagnostics })
}

fn within_transformation(
    p: &MixedGraph,
    t: &LocalTransformation,
    y: usize,
    opts: &DeterminationOptions,
    method: Method,
) -> Result<(TransformationTrace, Diagnostics), DeterminationError> {
    let x = t.x;
    let mut trace = TransformationTrace { arrow_at_x: t.c.clone(), ..Default::default() };
    let mut diag = Diagnostics::default();
    if !valid_local_transformation(p, t) {
        return Ok((trace, diag));
    }
    trace.valid = true;
    let m = maximal_local_mag(p, t)?.graph;
    let pdx = m.possible_descendants_of(x);
    if opts.require_y_reachable && !pdx.contains(y) {
        return Ok((trace, diag));
    }
    let forced = match method {
        Method::Rules => dd_sep(&m, x, y),
        Method::BlockSets => VertexSet::new(),
    };
    trace.dd_sep = forced.clone();
    if forced.contains(y) || forced.intersects(&pdx) {
        return Ok((trace, diag));
    }
    let pool = m.vertices().difference(&pdx).difference(&forced).without(x).without(y);
    for extra in pool.subsets_iter() {
        let w = forced.union(&extra);
        diag.candidate_sets += 1;
        if !is_potential_adjustment_set(&m, &w, x, y) {
            continue;
        }
        diag.potential_sets += 1;
        let accept = match method {
            Method::Rules => {
                let up = update_s(&m, x, y, &w);
                diag.update_loops += up.loops as u64;
                diag.max_update_loops = diag.max_update_loops.max(up.loops);
                diag.r12_firings += up.r12_firings as u64;
                up.block_set.is_some()
            }
            Method::BlockSets => {
                let b = block_set_bounds(&m, &w, x, y);
                let mut hit = false;
                for extra_s in b.s_max.difference(&b.s_min).subsets_iter() {
                    diag.block_sets_tested += 1;
                    if diag.block_sets_tested > opts.block_set_budget {
                        return Err(DeterminationError::BudgetExceeded(opts.block_set_budget));
                    }
                    if block_set_conditions(&m, &b.bar_w, &b.s_min.union(&extra_s)) {
                        hit = true;
                        break;
                    }
                }
                hit
            }
        };
        if accept {
            trace.accepted.push(w);
        }
    }
    Ok((trace, diag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_graph;

    fn g(s: &str) -> MixedGraph {
        parse_graph(s).unwrap()
    }

    fn set(m: &MixedGraph, names: &[&str]) -> VertexSet {
        names.iter().map(|n| m.index_of(n).unwrap()).collect()
    }

    #[test]
    fn single_circle_edge() {
        let p = g("vertices: X Y\nX o-o Y\n");
        let r = determine_with_rules(&p, 0, 1, &DeterminationOptions::default()).unwrap();
        assert_eq!(r.outcome, Outcome::SetOfSets(vec![VertexSet::new()]));
        assert_eq!(r.diagnostics.transformations, 2);
    }

    #[test]
    fn no_possible_ancestor_means_no_effect() {
        let p = g("vertices: X Y\nX <-- Y\n");
        let r = determine_with_rules(&p, 0, 1, &DeterminationOptions::default()).unwrap();
        assert_eq!(r.outcome, Outcome::NoEffect);
    }

    #[test]
    fn directed_edge_is_identified_globally() {
        let p = g("vertices: X Y\nX --> Y\n");
        let r = determine_with_rules(&p, 0, 1, &DeterminationOptions::default()).unwrap();
        assert_eq!(r.outcome, Outcome::GloballyIdentified(VertexSet::new()));
    }

    #[test]
    fn back_door_set_left_open_by_a_circle_is_not_global() {
        // `A o-> G` and `A o-> B`: A blocks `G <-- A --> B` in the members
        // where it is an ancestor, and is left out of the set read on
        // definite ancestors alone
        let p = g("vertices: A B C G\nA o-> B\nA o-> G\nC --> B\nC o-> G\nG --> B\n");
        let (b, gx) = (1, 3);
        assert_eq!(global_backdoor_set(&p, gx, b), None);
        let p = g("vertices: A B C G\nA --> B\nA --> G\nC --> B\nC --> G\nG --> B\n");
        assert_eq!(global_backdoor_set(&p, gx, b), Some(set(&p, &["A", "C"])));
    }

    #[test]
    fn bar_w_of_bidirected_neighbour() {
        let m = g("vertices: X V Y\nX <-> V\nV --> Y\nX --> Y\n");
        assert_eq!(bar_w(&m, &VertexSet::new(), 0, 2), set(&m, &["V"]));
        let m = g("vertices: X V Y\nX --> V\nV --> Y\n");
        assert!(bar_w(&m, &VertexSet::new(), 0, 2).is_empty());
    }

    #[test]
    fn dd_sep_contains_bidirected_ancestor_of_y() {
        let m = g("vertices: X V Y\nX <-> V\nV --> Y\nX --> Y\n");
        assert_eq!(dd_sep(&m, 0, 2), set(&m, &["V"]));
        let m = g("vertices: X V Y\nX <-> V\nV --> Y\nY --> X\n");
        assert!(dd_sep(&m, 0, 2).is_empty());
    }

    #[test]
    fn empty_w_collapses_to_clause_three() {
        let m = g("vertices: X V Y\nX <-> V\nV --> Y\nX --> Y\n");
        assert!(!is_potential_adjustment_set(&m, &VertexSet::new(), 0, 2));
        assert!(is_potential_adjustment_set(&m, &set(&m, &["V"]), 0, 2));
        let m = g("vertices: X V Y\nX --> V\nV --> Y\n");
        assert!(!is_potential_adjustment_set(&m, &set(&m, &["V"]), 0, 2));
    }

    #[test]
    fn empty_bar_w_accepts_empty_block_set() {
        let m = g("vertices: X Y\nX --> Y\n");
        let b = block_set_bounds(&m, &VertexSet::new(), 0, 1);
        assert!(b.bar_w.is_empty() && b.s_min.is_empty() && b.s_max.is_empty());
        assert!(block_set_conditions(&m, &b.bar_w, &VertexSet::new()));
        assert_eq!(construct_witness_mag(&m, &b.bar_w, &VertexSet::new()).unwrap(), m);
        assert_eq!(update_s(&m, 0, 1, &VertexSet::new()).block_set, Some(VertexSet::new()));
    }

    #[test]
    fn incomplete_c_is_invalid() {
        let p = g("vertices: X A B\nA o-o X\nX o-o B\n");
        let t = LocalTransformation { x: 0, c: set(&p, &["A", "B"]) };
        assert!(!valid_local_transformation(&p, &t));
        let t = LocalTransformation { x: 0, c: set(&p, &["A"]) };
        assert!(valid_local_transformation(&p, &t));
    }

    #[test]
    fn oriented_at_x_closure_is_identity() {
        let p = g("vertices: X A Y\nA --> X\nX --> Y\nA --> Y\n");
        let t = LocalTransformation { x: 0, c: VertexSet::new() };
        assert_eq!(maximal_local_mag(&p, &t).unwrap().graph, p);
    }

    #[test]
    fn both_methods_agree_on_a_chain() {
        let p = g("vertices: X A Y\nX o-o A\nA o-o Y\n");
        let opts = DeterminationOptions { global_shortcut: false, ..Default::default() };
        let a = determine_with_rules(&p, 0, 2, &opts).unwrap();
        let b = determine_with_block_sets(&p, 0, 2, &opts).unwrap();
        assert_eq!(a.outcome, b.outcome);
    }
}
