//! Scaling families and the timing harness behind the `bench` subcommand.

use std::time::Instant;

use serde::Serialize;

use crate::adjustment::{determine_with_block_sets, determine_with_rules, DeterminationError, DeterminationOptions};
use crate::graph::{Mark, MixedGraph};
use crate::rules::{apply_r12_r13, NewRuleOptions};

/// A PAG on `X, Y, A, D, E, F, Q, B1..Bk` with `X --> Y`, `A <-o X` and
/// `A <-> Q`. `E --> Y` and `F --> Y` hang off `A` by circle edges without
/// being adjacent, and every `B_i` joins `A o-o B_i o-o D`. Returns the
/// graph with `x` and `y`.
///
/// With an arrowhead at `X` from `A`, the block sets of `W = ∅` range over
/// all subsets of the `B_i` and `D`, and none of them works because `E` and
/// `F` sit in every one.
pub fn ladder(k: usize) -> (MixedGraph, usize, usize) {
    let mut labels: Vec<String> = ["X", "Y", "A", "D", "E", "Q", "F"].iter().map(|s| s.to_string()).collect();
    labels.extend((1..=k).map(|i| format!("B{i}")));
    let mut g = MixedGraph::new(labels).expect("distinct labels");
    let (x, y, a, d, e, q, f) = (0, 1, 2, 3, 4, 5, 6);
    use Mark::{Arrowhead as H, Circle as O, Tail as T};
    let mut join = |u, v, mu, mv| g.add_edge(u, v, mu, mv).expect("fresh pair");
    join(x, y, T, H);
    join(d, e, O, O);
    join(d, f, O, O);
    for v in [e, f] {
        join(v, y, T, H);
    }
    for v in [a, d, e, f].into_iter().chain(7..7 + k) {
        if v != a {
            join(a, v, O, O);
        }
        join(x, v, O, H);
        join(q, v, H, H);
    }
    for b in 7..7 + k {
        join(b, d, O, O);
    }
    (g, x, y)
}

/// A triangulated strip of `2n` vertices joined by circle edges: rows
/// `U_i` and `W_i` with `U_i o-o W_i`, `U_i o-o U_{i+1}`, `W_i o-o W_{i+1}`
/// and `U_i o-o W_{i+1}`. The circle graph is chordal, so every edge is a
/// candidate for R12 and R13 and none of them fires.
pub fn circle_strip(n: usize) -> MixedGraph {
    let labels = (1..=n).map(|i| format!("U{i}")).chain((1..=n).map(|i| format!("W{i}")));
    let mut g = MixedGraph::new(labels).expect("distinct labels");
    let (u, w) = (|i: usize| i, |i: usize| n + i);
    for i in 0..n {
        g.add_edge(u(i), w(i), Mark::Circle, Mark::Circle).expect("fresh pair");
        if i + 1 < n {
            g.add_edge(u(i), u(i + 1), Mark::Circle, Mark::Circle).expect("fresh pair");
            g.add_edge(w(i), w(i + 1), Mark::Circle, Mark::Circle).expect("fresh pair");
            g.add_edge(u(i), w(i + 1), Mark::Circle, Mark::Circle).expect("fresh pair");
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderRow {
    pub k: usize,
    pub vertices: usize,
    pub block_sets_tested: u64,
    pub update_loops: u64,
    pub max_update_loops: usize,
    pub rules_ns: u128,
    pub block_sets_ns: u128,
    pub agree: bool,
}

/// Runs both determination methods on `ladder(k)` with the shortcut off.
pub fn ladder_row(k: usize) -> Result<LadderRow, DeterminationError> {
    let (g, x, y) = ladder(k);
    let opts = DeterminationOptions { global_shortcut: false, ..DeterminationOptions::default() };
    let t = Instant::now();
    let rules = determine_with_rules(&g, x, y, &opts)?;
    let rules_ns = t.elapsed().as_nanos();
    let t = Instant::now();
    let blocks = determine_with_block_sets(&g, x, y, &opts)?;
    let block_sets_ns = t.elapsed().as_nanos();
    Ok(LadderRow {
        k,
        vertices: g.n(),
        block_sets_tested: blocks.diagnostics.block_sets_tested,
        update_loops: rules.diagnostics.update_loops,
        max_update_loops: rules.diagnostics.max_update_loops,
        rules_ns,
        block_sets_ns,
        agree: rules.outcome == blocks.outcome,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StripRow {
    pub n: usize,
    pub edges: usize,
    pub median_ns: u128,
}

/// Median wall time of one `apply_r12_r13` pass over `circle_strip(n)`.
pub fn strip_row(n: usize, reps: usize) -> StripRow {
    let g = circle_strip(n);
    let opts = NewRuleOptions::default();
    let mut times: Vec<u128> = (0..reps.max(1))
        .map(|_| {
            let t = Instant::now();
            let out = apply_r12_r13(&g, &opts).expect("no contradiction on a circle graph");
            std::hint::black_box(out);
            t.elapsed().as_nanos()
        })
        .collect();
    times.sort_unstable();
    StripRow { n, edges: g.edge_count(), median_ns: times[times.len() / 2] }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_shape() {
        let (g, x, y) = ladder(3);
        assert_eq!(g.n(), 10);
        assert_eq!(g.edge_count(), 16 + 4 * 3);
        assert!(g.is_directed(x, y));
        assert!(g.validate_pmg().is_ok());
    }

    #[test]
    fn strip_is_chordal_circle_graph() {
        let g = circle_strip(5);
        assert_eq!(g.edge_count(), 5 + 3 * 4);
        assert!(g.circle_component_chordal(&g.vertices()));
    }

    #[test]
    fn slope_of_a_power_law() {
        let pts: Vec<(f64, f64)> = [2.0f64, 4.0, 8.0, 16.0].iter().map(|&x| (x, 5.0 * x.powi(3))).collect();
        assert!((loglog_slope(&pts) - 3.0).abs() < 1e-9);
    }
}
