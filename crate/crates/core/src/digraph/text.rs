//! Plain-text graph format.
//!
//! ```text
//! 4            # vertex count
//! b 0 1        # arcs 0→1 and 1→0
//! e 2 3        # arc 2→3
//! ```
//!
//! Blank lines and lines starting with `#` are ignored; a trailing `# ...`
//! on a data line is a comment too.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Digraph, VertexSet, MAX_VERTICES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing vertex count")]
    MissingHeader,
    #[error("bad vertex count `{0}` (expected 1..={MAX_VERTICES})")]
    BadVertexCount(String),
    #[error("malformed line `{0}`")]
    Malformed(String),
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

pub fn parse_digraph(text: &str) -> Result<Digraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(ParseError {
        line: text.lines().count().max(1),
        kind: ParseErrorKind::MissingHeader,
    })?;
    let n: usize = match header.parse() {
        Ok(n) if (1..=MAX_VERTICES).contains(&n) => n,
        _ => {
            return Err(ParseError {
                line: header_line,
                kind: ParseErrorKind::BadVertexCount(header.to_string()),
            })
        }
    };

    let mut out: Vec<VertexSet> = vec![0; n];
    for (line, body) in lines {
        let err = |kind| ParseError { line, kind };
        let fields: Vec<&str> = body.split_whitespace().collect();
        let (tag, a, b) = match fields.as_slice() {
            [tag @ ("e" | "b"), a, b] => match (a.parse::<usize>(), b.parse::<usize>()) {
                (Ok(a), Ok(b)) => (*tag, a, b),
                _ => return Err(err(ParseErrorKind::Malformed(body.to_string()))),
            },
            _ => return Err(err(ParseErrorKind::Malformed(body.to_string()))),
        };
        for v in [a, b] {
            if v >= n {
                return Err(err(ParseErrorKind::VertexOutOfRange { vertex: v, n }));
            }
        }
        if a == b {
            return Err(err(ParseErrorKind::SelfLoop(a)));
        }
        out[a] |= 1 << b;
        if tag == "b" {
            out[b] |= 1 << a;
        }
    }
    // Masks are validated above, so construction cannot fail.
    Ok(Digraph::from_out_masks(out).expect("validated masks"))
}

/// Emits `b` lines for bidirected pairs (`u < v`), then `e` lines for the
/// remaining arcs, each group sorted.
pub fn serialize_digraph(g: &Digraph) -> String {
    let mut s = format!("{}\n", g.n());
    for (a, b) in g.arcs() {
        if a < b && g.has_arc(b, a) {
            writeln!(s, "b {a} {b}").unwrap();
        }
    }
    for (a, b) in g.arcs() {
        if !g.has_arc(b, a) {
            writeln!(s, "e {a} {b}").unwrap();
        }
    }
    s
}
