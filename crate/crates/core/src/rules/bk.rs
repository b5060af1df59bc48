//! Background knowledge and closure under a rule set.

use super::{apply_r12_r13, apply_rule, orient, Firing, NewRuleOptions, RuleError, RuleId};
use crate::graph::{Mark, MixedGraph};

/// A required mark at `at` on the edge `{at, other}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Commitment {
    pub at: usize,
    pub other: usize,
    pub mark: Mark,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BackgroundKnowledge {
    pub commitments: Vec<Commitment>,
}

impl BackgroundKnowledge {
    pub fn new() -> Self {
        Self::default()
    }

    /// Commits the mark at `at` on `{at, other}`.
    pub fn with(mut self, at: usize, other: usize, mark: Mark) -> Self {
        self.commitments.push(Commitment { at, other, mark });
        self
    }

    /// Writes the commitments into `g`.
    pub fn apply_to(&self, g: &mut MixedGraph) -> Result<(), RuleError> {
        for c in &self.commitments {
            orient(g, c.at, c.other, c.mark, "background knowledge")?;
        }
        Ok(())
    }
}

/// Closes `h` under `rules`, cycling through them in the fixed order
/// R1, R2, R3, R4′, R8, R9, R10, R11, then R12/R13 together, until a full
/// round changes nothing.
pub fn close(h: &MixedGraph, rules: &[RuleId]) -> Result<(MixedGraph, Vec<Firing>), RuleError> {
    close_with(h, rules, NewRuleOptions::default())
}

pub(crate) fn close_with(
    h: &MixedGraph,
    rules: &[RuleId],
    new_rule_opts: NewRuleOptions,
) -> Result<(MixedGraph, Vec<Firing>), RuleError> {
    let classic: Vec<RuleId> = RuleId::CLASSIC.iter().copied().filter(|r| rules.contains(r)).collect();
    let opts = NewRuleOptions { r12: rules.contains(&RuleId::R12), r13: rules.contains(&RuleId::R13), ..new_rule_opts };
    let mut g = h.clone();
    let mut log = Vec::new();
    loop {
        let mut changed = false;
        for &id in &classic {
            let out = apply_rule(&g, id)?;
            if out.changed {
                changed = true;
                g = out.graph;
                log.extend(out.firings);
            }
        }
        // the classic rules are cheap; settle them before the path-based ones
        if changed {
            continue;
        }
        if opts.r12 || opts.r13 {
            let out = apply_r12_r13(&g, &opts)?;
            if out.changed {
                g = out.graph;
                log.extend(out.firings);
                continue;
            }
        }
        break;
    }
    Ok((g, log))
}

/// Writes `bk` into `p` and closes under `rules`.
pub fn incorporate_bk(
    p: &MixedGraph,
    bk: &BackgroundKnowledge,
    rules: &[RuleId],
) -> Result<(MixedGraph, Vec<Firing>), RuleError> {
    let mut g = p.clone();
    bk.apply_to(&mut g)?;
    close(&g, rules)
}
