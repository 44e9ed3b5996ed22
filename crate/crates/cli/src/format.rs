//! Plain-text graph files.
//!
//! ```text
//! # optional comments
//! p 4 3
//! e 0 1
//! e 0 2
//! e 2 3
//! ```
//!
//! The header comes first, endpoints are 0-based with `u < v`, and the edge
//! count must match. Duplicate or out-of-range edges are rejected.

use std::fmt::Write as _;
use std::str::FromStr;

use oddfan::{Graph, GraphBuilder};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

fn field<T: FromStr>(line: usize, token: Option<&str>, what: &str) -> Result<T, FormatError> {
    match token.map(str::parse) {
        Some(Ok(value)) => Ok(value),
        Some(Err(_)) => fail(line, format!("malformed {what}")),
        None => fail(line, format!("missing {what}")),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut builder = GraphBuilder::new(0);
    let mut seen = 0;
    let mut last = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut tokens = content.split_ascii_whitespace();
        let tag = tokens.next();
        match (tag, header) {
            (Some("p"), None) => {
                let n = field(line, tokens.next(), "vertex count")?;
                let m = field(line, tokens.next(), "edge count")?;
                header = Some((n, m));
                builder = GraphBuilder::new(n);
            }
            (Some("p"), Some(_)) => return fail(line, "second header"),
            (Some("e"), None) => return fail(line, "edge before the header"),
            (Some("e"), Some((n, _))) => {
                let u: usize = field(line, tokens.next(), "endpoint")?;
                let v: usize = field(line, tokens.next(), "endpoint")?;
                if u >= v {
                    return fail(line, format!("endpoints must satisfy u < v, got {u} {v}"));
                }
                if v >= n {
                    return fail(line, format!("vertex {v} out of range for order {n}"));
                }
                if builder.has_edge(u, v) {
                    return fail(line, format!("duplicate edge {u} {v}"));
                }
                builder.connect(u, v);
                seen += 1;
            }
            _ => return fail(line, format!("unrecognised line {content:?}")),
        }
        if tokens.next().is_some() {
            return fail(line, "trailing tokens");
        }
    }

    let Some((_, m)) = header else {
        return fail(last.max(1), "missing `p <n> <m>` header");
    };
    if seen != m {
        return fail(last, format!("header announces {m} edges, found {seen}"));
    }
    Ok(builder.build())
}

pub fn render_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.order(), g.size());
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_edges() {
        let g = parse_graph("# square\np 4 4\ne 0 1\ne 1 2\n# mid\ne 2 3\ne 0 3\n").unwrap();
        assert_eq!(g, oddfan::generators::cycle(4));
    }

    #[test]
    fn rejects_bad_files() {
        let bad = [
            ("", 1),
            ("e 0 1\n", 1),
            ("p 3 1\ne 0 3\n", 2),
            ("p 3 2\ne 0 1\ne 0 1\n", 3),
            ("p 3 1\ne 1 0\n", 2),
            ("p 3 2\ne 0 1\n", 2),
            ("p 3 1\ne 0 x\n", 2),
            ("p 3 0 9\n", 1),
            ("p 3 0\nq\n", 2),
        ];
        for (text, line) in bad {
            assert_eq!(parse_graph(text).unwrap_err().line, line, "{text:?}");
        }
    }

    #[test]
    fn renders_header_then_sorted_edges() {
        let g = Graph::from_edges(3, [(1, 2), (0, 2)]).unwrap();
        assert_eq!(render_graph(&g), "p 3 2\ne 0 2\ne 1 2\n");
    }
}
