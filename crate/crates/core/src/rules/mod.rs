//! Orientation rules for partial mixed graphs and background-knowledge
//! incorporation.

mod new_rules;
mod bk;
mod classic;
mod unbridged;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Mark, MixedGraph};

pub use new_rules::{
    evaluate_edge, apply_r12_r13, r12_probe, r12_r13_candidates, r12_statement, NewRuleOptions, EdgeVerdict, ReachReading,
};
pub use bk::{close, incorporate_bk, BackgroundKnowledge, Commitment};
pub use unbridged::{find_unbridged_path, fset, is_bridged, FSet, UnbridgedPath};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4p,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
}

impl RuleId {
    /// R1–R3, R4′, R8–R11.
    pub const CLASSIC: [RuleId; 8] =
        [RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4p, RuleId::R8, RuleId::R9, RuleId::R10, RuleId::R11];
    /// Classic rules followed by R12 and R13.
    pub const ALL: [RuleId; 10] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4p,
        RuleId::R8,
        RuleId::R9,
        RuleId::R10,
        RuleId::R11,
        RuleId::R12,
        RuleId::R13,
    ];
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleId::R4p => "R4'",
            other => return write!(f, "{other:?}"),
        };
        f.write_str(s)
    }
}

/// One orientation: `rule` set the marks of edge `{u, v}` to
/// `mark_at_u`/`mark_at_v`; `witness` lists the vertices that justified it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Firing {
    pub rule: RuleId,
    pub u: usize,
    pub v: usize,
    pub mark_at_u: Mark,
    pub mark_at_v: Mark,
    pub witness: Vec<usize>,
}

impl Firing {
    pub fn describe(&self, g: &MixedGraph) -> String {
        let w: Vec<&str> = self.witness.iter().map(|&v| g.label(v)).collect();
        format!(
            "{} {} {} {} [{}]",
            self.rule,
            g.label(self.u),
            crate::io::edge_token(self.mark_at_u, self.mark_at_v),
            g.label(self.v),
            w.join(" ")
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("{source_name} wants {wanted:?} at {at} on edge {at}-{other}, which already carries {existing:?}")]
    Contradiction { source_name: String, at: String, other: String, existing: Mark, wanted: Mark },
    #[error("no edge between {0} and {1}")]
    NoEdge(String, String),
}

#[derive(Clone, Debug)]
pub struct RuleOutcome {
    pub changed: bool,
    pub graph: MixedGraph,
    pub firings: Vec<Firing>,
}

/// A proposed mark change computed on a snapshot.
#[derive(Clone, Debug)]
pub(crate) struct Intent {
    pub rule: RuleId,
    pub set: Vec<(usize, usize, Mark)>,
    pub witness: Vec<usize>,
}

/// Sets the mark at `at` on `{at, other}`. Circles may be overwritten; an
/// equal mark is a no-op; anything else is a contradiction.
pub(crate) fn orient(g: &mut MixedGraph, at: usize, other: usize, m: Mark, source: &str) -> Result<bool, RuleError> {
    match g.mark_at(at, other) {
        None => Err(RuleError::NoEdge(g.label(at).into(), g.label(other).into())),
        Some(cur) if cur == m => Ok(false),
        Some(Mark::Circle) => {
            g.set_mark_at(at, other, m);
            Ok(true)
        }
        Some(cur) => Err(RuleError::Contradiction {
            source_name: source.into(),
            at: g.label(at).into(),
            other: g.label(other).into(),
            existing: cur,
            wanted: m,
        }),
    }
}

fn commit(g: &mut MixedGraph, intents: Vec<Intent>) -> Result<Vec<Firing>, RuleError> {
    let mut log = Vec::new();
    for it in intents {
        let mut any = false;
        for &(at, other, m) in &it.set {
            any |= orient(g, at, other, m, &it.rule.to_string())?;
        }
        if any {
            let (at, other, _) = it.set[0];
            let (u, v) = (at.min(other), at.max(other));
            log.push(Firing {
                rule: it.rule,
                u,
                v,
                mark_at_u: g.mark_at(u, v).expect("edge exists"),
                mark_at_v: g.mark_at(v, u).expect("edge exists"),
                witness: it.witness,
            });
        }
    }
    Ok(log)
}

/// Applies every current firing of one rule, computed on `h` as given.
/// R12 and R13 run through [`apply_r12_r13`] with its own fixpoint.
pub fn apply_rule(h: &MixedGraph, id: RuleId) -> Result<RuleOutcome, RuleError> {
    match id {
        RuleId::R12 => return apply_r12_r13(h, &NewRuleOptions { r13: false, ..NewRuleOptions::default() }),
        RuleId::R13 => return apply_r12_r13(h, &NewRuleOptions { r12: false, ..NewRuleOptions::default() }),
        _ => {}
    }
    let intents = match id {
        RuleId::R1 => classic::r1(h),
        RuleId::R2 => classic::r2(h),
        RuleId::R3 => classic::r3(h),
        RuleId::R4p => classic::r4p(h),
        RuleId::R8 => classic::r8(h),
        RuleId::R9 => classic::r9(h),
        RuleId::R10 => classic::r10(h),
        RuleId::R11 => classic::r11(h),
        RuleId::R12 | RuleId::R13 => unreachable!(),
    };
    let mut g = h.clone();
    let firings = commit(&mut g, intents)?;
    Ok(RuleOutcome { changed: !firings.is_empty(), graph: g, firings })
}
