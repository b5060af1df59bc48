//! Line-oriented text format for graphs and background knowledge.
//!
//! ```text
//! # comment
//! vertices: X A B Y
//! X o-o A
//! A o-> Y
//! X --> Y
//! ```
//!
//! An edge token has three characters: the mark at the left vertex
//! (`<` arrowhead, `o` circle, `-` tail), a `-`, and the mark at the right
//! vertex (`>` arrowhead, `o` circle, `-` tail).

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::graph::{GraphError, Mark, MixedGraph};
use crate::rules::{BackgroundKnowledge, Commitment};

/// Dense storage is quadratic in the vertex count; larger inputs are refused
/// before allocating.
pub const MAX_VERTICES: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("input is not valid UTF-8")]
    NotUtf8,
    #[error("missing `vertices:` declaration")]
    MissingVertices,
    #[error("second `vertices:` declaration")]
    RepeatedVertices,
    #[error("`vertices:` declaration is not allowed here")]
    UnexpectedVertices,
    #[error("too many vertices (limit {MAX_VERTICES})")]
    TooManyVertices,
    #[error("expected `U <mark>-<mark> V`, found {0:?}")]
    Malformed(String),
    #[error("bad edge token {0:?}")]
    BadToken(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

pub fn edge_token(at_left: Mark, at_right: Mark) -> &'static str {
    use Mark::*;
    match (at_left, at_right) {
        (Tail, Arrowhead) => "-->",
        (Arrowhead, Tail) => "<--",
        (Arrowhead, Arrowhead) => "<->",
        (Circle, Arrowhead) => "o->",
        (Arrowhead, Circle) => "<-o",
        (Circle, Circle) => "o-o",
        (Tail, Tail) => "---",
        (Circle, Tail) => "o--",
        (Tail, Circle) => "--o",
    }
}

fn parse_token(tok: &str) -> Option<(Mark, Mark)> {
    let b = tok.as_bytes();
    if b.len() != 3 || b[1] != b'-' {
        return None;
    }
    let left = match b[0] {
        b'<' => Mark::Arrowhead,
        b'o' => Mark::Circle,
        b'-' => Mark::Tail,
        _ => return None,
    };
    let right = match b[2] {
        b'>' => Mark::Arrowhead,
        b'o' => Mark::Circle,
        b'-' => Mark::Tail,
        _ => return None,
    };
    Some((left, right))
}

/// A non-blank, comment-stripped line split into words with their 1-based
/// character columns.
struct Line<'a> {
    number: usize,
    words: Vec<(usize, &'a str)>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let mut words = Vec::new();
        let mut start: Option<usize> = None;
        for (byte, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(byte),
                (true, Some(s)) => {
                    let column = body[..s].chars().count() + 1;
                    words.push((column, &body[s..byte]));
                    start = None;
                }
                _ => {}
            }
        }
        (!words.is_empty()).then_some(Line { number: i + 1, words })
    })
}

struct EdgeLine {
    u: usize,
    v: usize,
    at_u: Mark,
    at_v: Mark,
    line: usize,
    column: usize,
}

fn edge_line(g: &MixedGraph, l: &Line<'_>) -> Result<EdgeLine, ParseError> {
    let [(cu, u), (ct, tok), (cv, v)] = l.words[..] else {
        let text: Vec<&str> = l.words.iter().map(|w| w.1).collect();
        return Err(err(l.number, l.words[0].0, ParseErrorKind::Malformed(text.join(" "))));
    };
    let (at_u, at_v) = parse_token(tok).ok_or_else(|| err(l.number, ct, ParseErrorKind::BadToken(tok.into())))?;
    let find = |name: &str, col| {
        g.index_of(name).ok_or_else(|| err(l.number, col, GraphError::UnknownVertex(name.into()).into()))
    };
    Ok(EdgeLine { u: find(u, cu)?, v: find(v, cv)?, at_u, at_v, line: l.number, column: cu })
}

fn is_vertices_decl(l: &Line<'_>) -> bool {
    l.words[0].1.starts_with("vertices:")
}

/// Labels following `vertices:`; the colon may be glued to the first label.
fn vertex_labels<'a>(l: &Line<'a>) -> Vec<(usize, &'a str)> {
    let mut out = Vec::new();
    let (c0, w0) = l.words[0];
    let rest = &w0["vertices:".len()..];
    if !rest.is_empty() {
        out.push((c0 + "vertices:".len(), rest));
    }
    out.extend_from_slice(&l.words[1..]);
    out
}

fn parse_with_lines(text: &str) -> Result<(MixedGraph, Vec<EdgeLine>), ParseError> {
    let mut g: Option<MixedGraph> = None;
    let mut edges = Vec::new();
    for l in lines(text) {
        if is_vertices_decl(&l) {
            if g.is_some() {
                return Err(err(l.number, l.words[0].0, ParseErrorKind::RepeatedVertices));
            }
            let labels = vertex_labels(&l);
            if labels.len() > MAX_VERTICES {
                return Err(err(l.number, 1, ParseErrorKind::TooManyVertices));
            }
            for (i, &(col, name)) in labels.iter().enumerate() {
                if labels[..i].iter().any(|&(_, o)| o == name) {
                    return Err(err(l.number, col, GraphError::DuplicateVertex(name.into()).into()));
                }
            }
            g = Some(MixedGraph::new(labels.iter().map(|&(_, s)| s)).expect("labels checked distinct"));
            continue;
        }
        let graph = g.as_mut().ok_or_else(|| err(l.number, 1, ParseErrorKind::MissingVertices))?;
        let e = edge_line(graph, &l)?;
        graph.add_edge(e.u, e.v, e.at_u, e.at_v).map_err(|ge| err(e.line, e.column, ge.into()))?;
        edges.push(e);
    }
    let g = g.ok_or_else(|| err(1, 1, ParseErrorKind::MissingVertices))?;
    Ok((g, edges))
}

/// Parses a graph. Any mark combination is accepted; see [`parse_pmg`].
pub fn parse_graph(text: &str) -> Result<MixedGraph, ParseError> {
    parse_with_lines(text).map(|(g, _)| g)
}

pub fn parse_graph_bytes(bytes: &[u8]) -> Result<MixedGraph, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| err(1, 1, ParseErrorKind::NotUtf8))?;
    parse_graph(text)
}

/// Parses a graph and rejects edges that carry a tail next to a circle or
/// tail, reporting the line of the first offender.
pub fn parse_pmg(text: &str) -> Result<MixedGraph, ParseError> {
    let (g, edges) = parse_with_lines(text)?;
    for e in &edges {
        if (e.at_u == Mark::Tail && e.at_v != Mark::Arrowhead) || (e.at_v == Mark::Tail && e.at_u != Mark::Arrowhead) {
            let (a, b) = (g.label(e.u).to_string(), g.label(e.v).to_string());
            return Err(err(e.line, e.column, GraphError::TailEdge(a, b).into()));
        }
    }
    Ok(g)
}

/// Parses background knowledge against `g`. Each line names an existing
/// edge; every non-circle mark on the line becomes a commitment and a circle
/// commits nothing.
pub fn parse_bk(text: &str, g: &MixedGraph) -> Result<BackgroundKnowledge, ParseError> {
    let mut bk = BackgroundKnowledge::new();
    for l in lines(text) {
        if is_vertices_decl(&l) {
            return Err(err(l.number, l.words[0].0, ParseErrorKind::UnexpectedVertices));
        }
        let e = edge_line(g, &l)?;
        if !g.adjacent(e.u, e.v) {
            let (a, b) = (g.label(e.u).to_string(), g.label(e.v).to_string());
            return Err(err(e.line, e.column, GraphError::NoEdge(a, b).into()));
        }
        for (at, other, mark) in [(e.u, e.v, e.at_u), (e.v, e.u, e.at_v)] {
            if mark != Mark::Circle {
                bk.commitments.push(Commitment { at, other, mark });
            }
        }
    }
    Ok(bk)
}

pub fn serialize_bk(bk: &BackgroundKnowledge, g: &MixedGraph) -> String {
    let mut out = String::new();
    for c in &bk.commitments {
        let _ = writeln!(out, "{} {} {}", g.label(c.other), edge_token(Mark::Circle, c.mark), g.label(c.at));
    }
    out
}

/// Canonical text: the vertex declaration, then one line per edge with the
/// lower id on the left, in id order.
pub fn serialize_graph(g: &MixedGraph) -> String {
    let mut out = String::from("vertices:");
    for l in g.labels() {
        out.push(' ');
        out.push_str(l);
    }
    out.push('\n');
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", g.label(e.u), edge_token(e.mark_at_u, e.mark_at_v), g.label(e.v));
    }
    out
}

/// Graphviz rendering for external viewers.
pub fn to_dot(g: &MixedGraph) -> String {
    fn head(m: Mark) -> &'static str {
        match m {
            Mark::Tail => "none",
            Mark::Arrowhead => "normal",
            Mark::Circle => "odot",
        }
    }
    let mut out = String::from("digraph pag {\n");
    for l in g.labels() {
        let _ = writeln!(out, "  \"{l}\";");
    }
    for e in g.edges() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [dir=both, arrowtail={}, arrowhead={}];",
            g.label(e.u),
            g.label(e.v),
            head(e.mark_at_u),
            head(e.mark_at_v)
        );
    }
    out.push_str("}\n");
    out
}

/// Set rendering used in text output: `{A, B}`.
pub struct Names<'a>(pub &'a MixedGraph, pub &'a crate::vset::VertexSet);

impl fmt::Display for Names<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.1.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(self.0.label(v))?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_vertex_circle() {
        let g = parse_graph("vertices: A B\nA o-o B").unwrap();
        assert_eq!(g.n(), 2);
        assert!(g.is_circle_edge(0, 1));
    }

    #[test]
    fn round_trip_is_canonical() {
        let src = "# demo\nvertices: X A Y\nY <-- X   # reversed\nA o-> Y\nX o-o A\n";
        let g = parse_graph(src).unwrap();
        let text = serialize_graph(&g);
        assert_eq!(text, "vertices: X A Y\nX o-o A\nX --> Y\nA o-> Y\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_graph("vertices: A B\nA o=o B\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_graph("vertices: A B\nA o-o C\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        let e = parse_graph("A o-o B\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingVertices);
        let e = parse_graph("vertices: A B\nA o-o B\nB --> A\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(matches!(e.kind, ParseErrorKind::Graph(GraphError::DuplicateEdge(..))));
    }

    #[test]
    fn pmg_mode_rejects_tail_circle() {
        assert!(parse_graph("vertices: A B\nA --o B\n").is_ok());
        let e = parse_pmg("vertices: A B C\nA o-o C\nA --o B\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(parse_pmg("vertices: A B\nA --- B\n").is_err());
    }

    #[test]
    fn bk_lines_commit_non_circle_marks() {
        let g = parse_graph("vertices: C1 A C2\nC1 o-o A\nA o-o C2\n").unwrap();
        let bk = parse_bk("C1 o-> A\nC2 <-> A\n", &g).unwrap();
        assert_eq!(
            bk.commitments,
            vec![
                Commitment { at: 1, other: 0, mark: Mark::Arrowhead },
                Commitment { at: 2, other: 1, mark: Mark::Arrowhead },
                Commitment { at: 1, other: 2, mark: Mark::Arrowhead },
            ]
        );
        assert!(parse_bk("C1 o-> C2\n", &g).is_err());
    }

    #[test]
    fn glued_vertex_declaration() {
        let g = parse_graph("vertices:A B\n").unwrap();
        assert_eq!(g.labels(), &["A".to_string(), "B".to_string()]);
    }
}
