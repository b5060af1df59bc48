//! R1–R3, R4′, R8–R11. Each function scans a snapshot and returns the
//! orientations it licenses; nothing is applied here.

use super::{Intent, RuleId};
use crate::graph::{Mark, MixedGraph};
use crate::vset::VertexSet;

use Mark::{Arrowhead, Circle, Tail};

fn each_end(h: &MixedGraph, mut f: impl FnMut(usize, usize)) {
    for at in 0..h.n() {
        for other in h.neighbors(at).iter() {
            f(at, other);
        }
    }
}

/// `A *→ B o-* R`, `A`, `R` non-adjacent: `B → R`.
pub(crate) fn r1(h: &MixedGraph) -> Vec<Intent> {
    let mut out = Vec::new();
    each_end(h, |b, r| {
        if h.mark_at(b, r) != Some(Circle) {
            return;
        }
        if let Some(a) = h.neighbors(b).iter().find(|&a| a != r && h.arrow_into(b, a) && !h.adjacent(a, r)) {
            out.push(Intent { rule: RuleId::R1, set: vec![(b, r, Tail), (r, b, Arrowhead)], witness: vec![a] });
        }
    });
    out
}

/// `A → B *→ R` or `A *→ B → R`, with `A *-o R`: `A *→ R`.
pub(crate) fn r2(h: &MixedGraph) -> Vec<Intent> {
    let mut out = Vec::new();
    each_end(h, |r, a| {
        if h.mark_at(r, a) != Some(Circle) {
            return;
        }
        let common = h.neighbors(a).intersection(h.neighbors(r));
        let hit = common.iter().find(|&b| {
            (h.is_directed(a, b) && h.arrow_into(r, b)) || (h.arrow_into(b, a) && h.is_directed(b, r))
        });
        if let Some(b) = hit {
            out.push(Intent { rule: RuleId::R2, set: vec![(r, a, Arrowhead)], witness: vec![b] });
        }
    });
    out
}

/// `A *→ B ←* R`, `A *-o D o-* R`, `A`, `R` non-adjacent, `D *-o B`:
/// `D *→ B`.
pub(crate) fn r3(h: &MixedGraph) -> Vec<Intent> {
    let mut out = Vec::new();
    each_end(h, |b, d| {
        if h.mark_at(b, d) != Some(Circle) {
            return;
        }
        let common: Vec<usize> = h
            .neighbors(b)
            .intersection(h.neighbors(d))
            .iter()
            .filter(|&v| h.arrow_into(b, v) && h.mark_at(d, v) == Some(Circle))
            .collect();
        for (i, &a) in common.iter().enumerate() {
            if let Some(&r) = common[i + 1..].iter().find(|&&r| !h.adjacent(a, r)) {
                out.push(Intent { rule: RuleId::R3, set: vec![(b, d, Arrowhead)], witness: vec![a, r] });
                return;
            }
        }
    });
    out
}

/// Discriminating path `⟨K, ..., A, B, R⟩` for `B` with `B o-* R`: `B → R`.
pub(crate) fn r4p(h: &MixedGraph) -> Vec<Intent> {
    let mut out = Vec::new();
    each_end(h, |b, r| {
        if h.mark_at(b, r) != Some(Circle) {
            return;
        }
        if let Some(p) = h.find_discriminating_path(b, r) {
            out.push(Intent { rule: RuleId::R4p, set: vec![(b, r, Tail), (r, b, Arrowhead)], witness: p.vertices().to_vec() });
        }
    });
    out
}

/// `A o→ R` edges as `(a, r)`.
fn circle_arrows(h: &MixedGraph) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    each_end(h, |a, r| {
        if h.mark_at(a, r) == Some(Circle) && h.mark_at(r, a) == Some(Arrowhead) {
            v.push((a, r));
        }
    });
    v
}

/// `A → B → R` with `A o→ R`: `A → R`.
pub(crate) fn r8(h: &MixedGraph) -> Vec<Intent> {
    circle_arrows(h)
        .into_iter()
        .filter_map(|(a, r)| {
            let b = h.neighbors(a).iter().find(|&b| h.is_directed(a, b) && h.is_directed(b, r))?;
            Some(Intent { rule: RuleId::R8, set: vec![(a, r, Tail)], witness: vec![b] })
        })
        .collect()
}

/// `A o→ R` and an uncovered possibly directed path `⟨A, B, D, ..., R⟩`
/// with `B`, `R` non-adjacent: `A → R`.
pub(crate) fn r9(h: &MixedGraph) -> Vec<Intent> {
    let all = h.vertices();
    circle_arrows(h)
        .into_iter()
        .filter_map(|(a, r)| {
            for b in h.neighbors(a).iter() {
                if b == r || h.adjacent(b, r) || !h.pd_step(a, b) {
                    continue;
                }
                let reach = h.uncovered_pd_search(a, b, &all);
                if let Some(walk) = reach.walk_to(r) {
                    return Some(Intent { rule: RuleId::R9, set: vec![(a, r, Tail)], witness: walk });
                }
            }
            None
        })
        .collect()
}

/// `A o→ R`, `B → R ← D`, uncovered possibly directed paths from `A` to
/// `B` and to `D` whose second vertices `U`, `W` are distinct and
/// non-adjacent: `A → R`.
pub(crate) fn r10(h: &MixedGraph) -> Vec<Intent> {
    let all = h.vertices();
    let mut out = Vec::new();
    for (a, r) in circle_arrows(h) {
        let pars: Vec<usize> = h.neighbors(r).iter().filter(|&p| h.is_directed(p, r)).collect();
        if pars.len() < 2 {
            continue;
        }
        // firsts[i]: second vertices of uncovered pd paths from a to pars[i]
        let mut firsts = vec![VertexSet::new(); pars.len()];
        for u in h.neighbors(a).iter() {
            if !h.pd_step(a, u) {
                continue;
            }
            let reach = h.uncovered_pd_search(a, u, &all);
            for (i, &p) in pars.iter().enumerate() {
                if reach.reaches(p) {
                    firsts[i].insert(u);
                }
            }
        }
        'found: for i in 0..pars.len() {
            for j in 0..pars.len() {
                if i == j {
                    continue;
                }
                for u in firsts[i].iter() {
                    if let Some(w) = firsts[j].iter().find(|&w| w != u && !h.adjacent(u, w)) {
                        out.push(Intent {
                            rule: RuleId::R10,
                            set: vec![(a, r, Tail)],
                            witness: vec![pars[i], pars[j], u, w],
                        });
                        break 'found;
                    }
                }
            }
        }
    }
    out
}

/// `A -o B`: `A → B`.
pub(crate) fn r11(h: &MixedGraph) -> Vec<Intent> {
    let mut out = Vec::new();
    each_end(h, |a, b| {
        if h.mark_at(a, b) == Some(Tail) && h.mark_at(b, a) == Some(Circle) {
            out.push(Intent { rule: RuleId::R11, set: vec![(b, a, Arrowhead)], witness: vec![] });
        }
    });
    out
}
