//! R12 and R13 through the per-edge procedure: collect the vertices reached
//! from `A` through `B`, test ancestry of `S_A` (R13), otherwise simulate
//! the forced orientations around `S_A` and look for a new unshielded
//! collider (R12).

use std::collections::VecDeque;

use super::unbridged::{find_unbridged_path, fset, UnbridgedPath};
use super::{commit, Firing, Intent, RuleError, RuleId, RuleOutcome};
use crate::graph::{Mark, MixedGraph};
use crate::vset::VertexSet;

/// Which walks from `A` through `B` collect the candidate set `D`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReachReading {
    /// Uncovered possibly directed paths `⟨A, B, ...⟩`, matching the rule
    /// statements.
    #[default]
    PossiblyDirected,
    /// Any uncovered path `⟨A, B, ...⟩`.
    Uncovered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NewRuleOptions {
    pub r12: bool,
    pub r13: bool,
    pub reach: ReachReading,
}

impl Default for NewRuleOptions {
    fn default() -> Self {
        NewRuleOptions { r12: true, r13: true, reach: ReachReading::PossiblyDirected }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeVerdict {
    /// `witness` is reached from `A` through `B` and is an ancestor of `S_A`.
    R13 { witness: usize },
    /// Orienting around `S_A` created the unshielded collider `(a, b, c)`.
    R12 { collider: (usize, usize, usize) },
    None,
}

/// `S_A = {V | V *→ A} ∪ {A}`.
pub(crate) fn s_a(h: &MixedGraph, a: usize) -> VertexSet {
    let mut s: VertexSet = h.neighbors(a).iter().filter(|&v| h.arrow_into(a, v)).collect();
    s.insert(a);
    s
}

/// Evaluates the edge `A o-* B` on `h` without changing it.
pub fn evaluate_edge(h: &MixedGraph, a: usize, b: usize, opts: &NewRuleOptions) -> EdgeVerdict {
    if h.mark_at(a, b) != Some(Mark::Circle) || h.mark_at(b, a) == Some(Mark::Tail) {
        return EdgeVerdict::None;
    }
    let sa = s_a(h, a);
    let search = |allowed: &VertexSet| match opts.reach {
        ReachReading::PossiblyDirected => h.uncovered_pd_search(a, b, allowed),
        ReachReading::Uncovered => h.uncovered_search(a, b, allowed, &|_, _| true),
    };
    if opts.r13 {
        // Walks may pass through S_A here: reaching S_A is reaching an
        // ancestor of S_A.
        let reached = search(&h.vertices()).reached();
        if let Some(w) = reached.intersection(&h.ancestors(&sa)).first() {
            return EdgeVerdict::R13 { witness: w };
        }
    }
    if !opts.r12 {
        return EdgeVerdict::None;
    }
    let d = search(&h.vertices().difference(&sa)).reached();
    forced_collider(h, &sa, &d)
}

fn forced_collider(h: &MixedGraph, sa: &VertexSet, d: &VertexSet) -> EdgeVerdict {
    let mut hp = h.clone();
    for v in d.iter() {
        for w in h.neighbors(v).intersection(sa).iter() {
            if hp.mark_at(v, w) == Some(Mark::Circle) {
                hp.set_mark_at(v, w, Mark::Arrowhead);
            }
        }
    }
    let f: Vec<VertexSet> = (0..h.n()).map(|v| if d.contains(v) { fset(h, v, sa).members } else { VertexSet::new() }).collect();
    // a circle edge vi o-o vj inside D turns into vi → vj when vi has a
    // private F member or a parent in D not adjacent to vj; each
    // orientation re-queues the circle edges leaving vj
    let mut queue: VecDeque<(usize, usize)> =
        d.iter().flat_map(|vi| hp.circle_neighbors(vi).intersection(d).iter().map(move |vj| (vi, vj)).collect::<Vec<_>>()).collect();
    while let Some((vi, vj)) = queue.pop_front() {
        if !hp.is_circle_edge(vi, vj) {
            continue;
        }
        let by_f = !f[vi].is_subset(&f[vj]);
        let by_parent = || hp.neighbors(vi).intersection(d).iter().any(|vk| vk != vj && hp.is_directed(vk, vi) && !hp.adjacent(vk, vj));
        if by_f || by_parent() {
            hp.put(vi, vj, Mark::Tail, Mark::Arrowhead);
            queue.extend(hp.circle_neighbors(vj).intersection(d).iter().map(|w| (vj, w)));
        }
    }
    let before = h.unshielded_colliders();
    match hp.unshielded_colliders().into_iter().find(|t| before.binary_search(t).is_err()) {
        Some(collider) => EdgeVerdict::R12 { collider },
        None => EdgeVerdict::None,
    }
}

fn candidates(h: &MixedGraph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..h.n() {
        for b in h.neighbors(a).iter() {
            if h.mark_at(a, b) == Some(Mark::Circle) && h.mark_at(b, a) != Some(Mark::Tail) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Every candidate edge `(A, B)` of `h` with a non-`None` verdict, all
/// evaluated on the same `h`.
pub fn r12_r13_candidates(h: &MixedGraph, opts: &NewRuleOptions) -> Vec<(usize, usize, EdgeVerdict)> {
    candidates(h)
        .into_iter()
        .filter_map(|(a, b)| match evaluate_edge(h, a, b, opts) {
            EdgeVerdict::None => None,
            v => Some((a, b, v)),
        })
        .collect()
}

fn intent_for(a: usize, b: usize, v: &EdgeVerdict) -> Option<Intent> {
    let (rule, witness) = match *v {
        EdgeVerdict::R13 { witness } => (RuleId::R13, vec![witness]),
        EdgeVerdict::R12 { collider: (p, q, r) } => (RuleId::R12, vec![p, q, r]),
        EdgeVerdict::None => return None,
    };
    Some(Intent { rule, set: vec![(a, b, Mark::Arrowhead)], witness })
}

/// Orients `A ←* B` on every edge where R12 or R13 applies, re-evaluating
/// after each orientation until nothing changes.
pub fn apply_r12_r13(h: &MixedGraph, opts: &NewRuleOptions) -> Result<RuleOutcome, RuleError> {
    let mut g = h.clone();
    let mut firings: Vec<Firing> = Vec::new();
    loop {
        let mut changed = false;
        for (a, b) in candidates(&g) {
            if let Some(it) = intent_for(a, b, &evaluate_edge(&g, a, b, opts)) {
                let fired = commit(&mut g, vec![it])?;
                changed |= !fired.is_empty();
                firings.extend(fired);
            }
        }
        if !changed {
            break;
        }
    }
    Ok(RuleOutcome { changed: !firings.is_empty(), graph: g, firings })
}

/// R12 read directly off its statement for the edge `A o-* B`: an
/// unbridged path relative to `S_A` among the vertices `K ≠ B` reached by
/// uncovered possibly directed paths `⟨A, B, ..., K⟩`.
pub fn r12_statement(h: &MixedGraph, a: usize, b: usize) -> Option<UnbridgedPath> {
    if h.mark_at(a, b) != Some(Mark::Circle) || h.mark_at(b, a) == Some(Mark::Tail) {
        return None;
    }
    let sa = s_a(h, a);
    let scope = h.uncovered_pd_search(a, b, &h.vertices()).reached().difference(&sa).without(b);
    find_unbridged_path(h, &sa, &scope)
}

/// First edge, in id order, that R12 transforms on `h`.
pub fn r12_probe(h: &MixedGraph) -> Option<(usize, usize, UnbridgedPath)> {
    candidates(h).into_iter().find_map(|(a, b)| r12_statement(h, a, b).map(|p| (a, b, p)))
}
