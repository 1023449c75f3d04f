//! The `reeb v1` text format.
//!
//! ```text
//! # reeb v1
//! mode 3
//! vertex v1 0
//! vertex v2 1/2
//! edge e1 v1 v2 S2
//! ```
//!
//! Lines may appear in any order; output is written in canonical order.

use std::fmt::Write;

use super::{FiberLabel, LabeledDigraph, Mode};
use crate::parse::{expect_arity, parse_level, tokenized_lines, ParseError};

pub fn parse_reeb(text: &str) -> Result<LabeledDigraph, ParseError> {
    let mut mode = None;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (line, tokens) in tokenized_lines(text) {
        match tokens[0] {
            "mode" => {
                expect_arity(line, &tokens, 2, "mode <2|3>")?;
                if mode.is_some() {
                    return Err(ParseError::at(line, "duplicate `mode` line"));
                }
                let m = tokens[1]
                    .parse::<u8>()
                    .ok()
                    .and_then(Mode::from_dimension)
                    .ok_or_else(|| ParseError::at(line, format!("invalid mode `{}`", tokens[1])))?;
                mode = Some(m);
            }
            "vertex" => {
                expect_arity(line, &tokens, 3, "vertex <id> <level>")?;
                vertices.push((tokens[1].to_string(), parse_level(line, tokens[2])?));
            }
            "edge" => {
                expect_arity(line, &tokens, 5, "edge <id> <tail> <head> <S1|S2|T2|K2>")?;
                let label = tokens[4].parse::<FiberLabel>().map_err(|m| ParseError::at(line, m))?;
                edges.push((tokens[1].to_string(), tokens[2].to_string(), tokens[3].to_string(), label));
            }
            other => return Err(ParseError::at(line, format!("unknown directive `{other}`"))),
        }
    }
    let mode = mode.ok_or(ParseError::MissingMode)?;
    Ok(LabeledDigraph::new(mode, vertices, edges)?)
}

pub fn write_reeb(g: &LabeledDigraph) -> String {
    let mut out = String::from("# reeb v1\n");
    writeln!(out, "mode {}", g.mode()).unwrap();
    for v in g.vertices() {
        writeln!(out, "vertex {} {}", v.id, v.level).unwrap();
    }
    for e in g.edges() {
        writeln!(out, "edge {} {} {} {}", e.id, g.vertices()[e.tail].id, g.vertices()[e.head].id, e.label).unwrap();
    }
    out
}
