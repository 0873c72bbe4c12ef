//! Plain-text undirected edge lists.
//!
//! One edge per line as two whitespace-separated labels. A line with a
//! single label declares an isolated node. `#` starts a comment, blank
//! lines are ignored. Labels are opaque strings without whitespace or `#`.

use std::fs;
use std::path::Path;

use wbf_core::topology::TopologyError;
use wbf_core::GenericGraph;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: expected one or two labels, found {found}")]
    Arity { line: usize, found: usize },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: TopologyError,
    },
    #[error("{path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub fn parse_graph(text: &str) -> Result<GenericGraph, ParseError> {
    let mut g = GenericGraph::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [a] => {
                g.add_node(a);
            }
            [a, b] => {
                g.add_edge_by_label(a, b).map_err(|source| ParseError::Graph { line, source })?;
            }
            _ => return Err(ParseError::Arity { line, found: tokens.len() }),
        }
    }
    Ok(g)
}

pub fn load_graph(path: &Path) -> Result<GenericGraph, ParseError> {
    let text = fs::read_to_string(path)
        .map_err(|source| ParseError::Read { path: path.display().to_string(), source })?;
    parse_graph(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use wbf_core::Graph;

    #[test]
    fn comments_and_isolated_nodes() {
        let g = parse_graph("# header\na b\n\nb c # trailing\nlonely\n").unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 2);
        assert!(g.neighbors(g.index_of("lonely").unwrap()).is_empty());
    }

    #[test]
    fn empty_input() {
        assert!(parse_graph("").unwrap().is_empty());
        assert!(parse_graph("# nothing\n\n").unwrap().is_empty());
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_graph("a b\na b c\n").unwrap_err();
        assert_eq!(e.to_string(), "line 2: expected one or two labels, found 3");
        let e = parse_graph("a b\n\nx x\n").unwrap_err();
        assert!(matches!(e, ParseError::Graph { line: 3, .. }), "{e}");
    }
}
