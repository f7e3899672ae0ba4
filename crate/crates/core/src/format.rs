//! Plain-text graph files.
//!
//! ```text
//! # comment
//! p ecs <n> <m> [simple|multi]
//! e <u> <v>
//! ```
//!
//! Vertex ids are 0-based. The mode defaults to `simple`; repeated pairs
//! are accepted only under `multi`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{GraphError, MultiGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("header declares {declared} edges but {found} were given")]
    CountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn parse_graph(text: &str) -> Result<MultiGraph, FormatError> {
    let mut header: Option<(usize, usize, bool)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let syntax = |message: &str| FormatError::SyntaxError { line, message: message.to_string() };
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let number = |t: &str| t.parse::<usize>().map_err(|_| syntax(&format!("`{t}` is not a number")));
        match tokens[0] {
            "p" => {
                if header.is_some() {
                    return Err(syntax("second header line"));
                }
                if !(4..=5).contains(&tokens.len()) || tokens[1] != "ecs" {
                    return Err(syntax("expected `p ecs <n> <m> [simple|multi]`"));
                }
                let simple = match tokens.get(4) {
                    None | Some(&"simple") => true,
                    Some(&"multi") => false,
                    Some(other) => return Err(syntax(&format!("unknown mode `{other}`"))),
                };
                header = Some((number(tokens[2])?, number(tokens[3])?, simple));
            }
            "e" => {
                if header.is_none() {
                    return Err(syntax("edge before the header"));
                }
                if tokens.len() != 3 {
                    return Err(syntax("expected `e <u> <v>`"));
                }
                edges.push((number(tokens[1])?, number(tokens[2])?));
            }
            other => return Err(syntax(&format!("unknown line type `{other}`"))),
        }
    }
    let (n, m, simple) = header.ok_or(FormatError::SyntaxError { line: 0, message: "missing header".into() })?;
    if edges.len() != m {
        return Err(FormatError::CountMismatch { declared: m, found: edges.len() });
    }
    Ok(MultiGraph::new(n, &edges, simple)?)
}

pub fn write_graph(g: &MultiGraph) -> String {
    let mode = if g.is_simple() { "simple" } else { "multi" };
    let mut s = format!("p ecs {} {} {mode}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edge_pairs() {
        writeln!(s, "e {u} {v}").unwrap();
    }
    s
}
