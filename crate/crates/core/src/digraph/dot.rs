//! DOT export.
//!
//! The output is plain Graphviz with levels and labels kept as attributes,
//! one statement per line in canonical id order. [`parse_dot`] reads back
//! exactly this subset.

use std::fmt::Write;

use super::{FiberLabel, LabeledDigraph, Mode};
use crate::parse::{parse_level, ParseError};

pub fn export_dot(g: &LabeledDigraph) -> String {
    let mut out = String::from("digraph reeb {\n");
    writeln!(out, "  graph [mode=\"{}\"];", g.mode()).unwrap();
    for v in g.vertices() {
        writeln!(out, "  \"{}\" [level=\"{}\", label=\"{} @ {}\"];", v.id, v.level, v.id, v.level).unwrap();
    }
    for e in g.edges() {
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [id=\"{}\", label=\"{}\"];",
            g.vertices()[e.tail].id,
            g.vertices()[e.head].id,
            e.id,
            e.label
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn quoted(s: &str) -> Vec<&str> {
    s.split('"').skip(1).step_by(2).collect()
}

/// Reads a digraph previously written by [`export_dot`].
pub fn parse_dot(text: &str) -> Result<LabeledDigraph, ParseError> {
    let mut mode = None;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body == "}" || body.starts_with("digraph") {
            continue;
        }
        let q = quoted(body);
        if body.starts_with("graph") {
            let m = q.first().and_then(|s| s.parse::<u8>().ok()).and_then(Mode::from_dimension);
            mode = Some(m.ok_or_else(|| ParseError::at(line, "invalid graph mode"))?);
        } else if body.contains("->") {
            let [tail, head, id, label] = q[..] else {
                return Err(ParseError::at(line, "malformed edge statement"));
            };
            let label = label.parse::<FiberLabel>().map_err(|m| ParseError::at(line, m))?;
            edges.push((id.to_string(), tail.to_string(), head.to_string(), label));
        } else {
            let [id, level, _] = q[..] else {
                return Err(ParseError::at(line, "malformed vertex statement"));
            };
            vertices.push((id.to_string(), parse_level(line, level)?));
        }
    }
    let mode = mode.ok_or(ParseError::MissingMode)?;
    Ok(LabeledDigraph::new(mode, vertices, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::is_isomorphic;
    use FiberLabel::*;

    #[test]
    fn lens_block_export() {
        let g = LabeledDigraph::path(Mode::Three, &[S2, T2, S2]).unwrap();
        let dot = export_dot(&g);
        assert_eq!(dot, export_dot(&g));
        assert_eq!(dot.matches("label=\"T2\"").count(), 1);
        assert!(dot.contains("  \"v1\" -> \"v2\" [id=\"e1\", label=\"S2\"];\n"));
        let back = parse_dot(&dot).unwrap();
        assert_eq!(back, g);
        assert!(is_isomorphic(&back, &g, true).is_some());
    }

    #[test]
    fn single_edge_export_is_stable() {
        let g = LabeledDigraph::path(Mode::Two, &[S1]).unwrap();
        assert_eq!(
            export_dot(&g),
            "digraph reeb {\n  graph [mode=\"2\"];\n  \"v1\" [level=\"0\", label=\"v1 @ 0\"];\n  \
             \"v2\" [level=\"1\", label=\"v2 @ 1\"];\n  \"v1\" -> \"v2\" [id=\"e1\", label=\"S1\"];\n}\n"
        );
    }

    #[test]
    fn malformed_statement_is_reported() {
        let err = parse_dot("digraph reeb {\n  graph [mode=\"3\"];\n  \"a\" -> \"b\";\n}\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, .. }));
    }
}
